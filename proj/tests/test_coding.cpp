#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "symdyn/coding.hpp"
#include "symdyn/error.hpp"
#include "symdyn/scenario.hpp"

using namespace symdyn;
using namespace symdyn::coding;
using symbolic::SymbolGenerator;

namespace {

scenario::Scenario s51(const std::string& pattern) { return scenario::builtin_example_51(pattern); }

} // namespace

TEST_CASE("nested cells: base case and closed-form depth one") {
    const auto s = s51("all-f2");
    const std::vector<int> p1{1};
    const auto c0 = nested_cell(s.seq, *s.family1, p1, 0);
    CHECK(c0.region.component_count() == 1);
    CHECK(c0.region.min() == 0.0);
    CHECK(c0.region.max() == 0.5);

    // depth 1 cell of (1,1): [0, r] with 4r(2-r) = 1/2, r = 1 - sqrt(7/8)
    const std::vector<int> p11{1, 1};
    const auto c1 = nested_cell(s.seq, *s.family1, p11, 0);
    const double r = 1.0 - std::sqrt(7.0 / 8.0);
    CHECK(c1.region.component_count() == 1);
    CHECK(c1.region.min() == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(c1.region.max() == doctest::Approx(r).epsilon(1e-12));

    // independent grid oracle agrees on the hull
    const auto hull = oracles::cell_hull_grid(s.seq, *s.family1, p11, 0, 20000);
    CHECK(std::fabs(hull.hi - c1.region.max()) < 1e-3);

    // forward check: the image of the cell stays in the prescribed set
    const auto img = s.seq.map1(0).image(c1.region);
    CHECK(img.max() <= 0.5 + 1e-12);
}

TEST_CASE("cell diameters obey the expansion bound") {
    // all-f1 with constant symbol 2: diameter <= (1/4) * 8^-m
    const auto sf1 = s51("all-f1");
    std::vector<int> prefix;
    for (int m = 0; m <= 10; ++m) {
        prefix.push_back(2);
        const auto cell = nested_cell(sf1.seq, *sf1.family1, prefix, 0);
        CHECK(cell.region.diameter() <= 0.25 * std::pow(8.0, -m) + 1e-13);
    }

    // any pattern: diameter <= (1/2) * 4^-m over random admissible prefixes
    const auto alt = s51("alternate");
    std::mt19937_64 rng(41);
    for (int t = 0; t < 100; ++t) {
        const int m = 1 + static_cast<int>(rng() % 15);
        const auto alpha = symbolic::random_admissible(alt.matrix, rng(), m + 1);
        const auto cell = nested_cell(alt.seq, *alt.family1, alpha.prefix_word(m + 1), 0);
        CHECK(cell.region.diameter() <= 0.5 * std::pow(4.0, -m) + 1e-12);
    }
}

TEST_CASE("cells are nested and shift-equivariant") {
    const auto s = s51("alternate");
    std::mt19937_64 rng(43);
    for (int t = 0; t < 50; ++t) {
        const int m = 1 + static_cast<int>(rng() % 8);
        const auto alpha = symbolic::random_admissible(s.matrix, rng(), m + 2);
        const auto shallow = nested_cell(s.seq, *s.family1, alpha.prefix_word(m), 0);
        const auto deep = nested_cell(s.seq, *s.family1, alpha.prefix_word(m + 1), 0);
        CHECK(shallow.region.contains_region(deep.region, 1e-14));

        // f_0 maps the depth-m cell into the depth-(m-1) cell of the shift
        const auto shifted =
            nested_cell(s.seq, *s.family1, alpha.shifted(1).prefix_word(m), 1);
        for (int g = 0; g <= 20; ++g) {
            const auto& comp = deep.region.components().front();
            const double x = comp.lo + (comp.hi - comp.lo) * g / 20;
            CHECK(shifted.region.contains(s.seq.evaluate1(0, x), 1e-9));
        }
    }
}

TEST_CASE("empty cells and inadmissible prefixes are reported") {
    const auto sid = scenario::builtin_counterexample_identity();
    const std::vector<int> p12{1, 2};
    CHECK_THROWS_WITH_AS(nested_cell(sid.seq, *sid.family1, p12, 0),
                         doctest::Contains("EmptyCell"), Error);

    const auto golden = symbolic::TransitionMatrix::validate({{1, 1}, {1, 0}});
    const auto s = s51("alternate");
    const expansion::CoveringFamily1D fam{golden,
                                          {{0.0, 0.5}, {0.75, 2.0}},
                                          {{{0.0, 0.25}, {0.75, 1.0}}, {{0.0, 0.5}, {1.5, 2.0}}},
                                          true};
    const std::vector<int> bad{2, 2};
    CHECK_THROWS_WITH_AS(nested_cell(s.seq, fam, bad, 0), doctest::Contains("NotAdmissible"),
                         Error);
}

TEST_CASE("decode reaches the closed-form fixed points") {
    const double tol = 1e-9;
    struct Case {
        const char* pattern;
        int symbol;
        double lo, hi;
    };
    const Case cases[] = {
        {"all-f2", 1, 0.0, 0.5},   // 0
        {"all-f1", 2, 0.75, 1.0},  // 15/16
        {"all-f2", 2, 1.5, 2.0},   // 7/4
    };
    for (const auto& c : cases) {
        const auto s = s51(c.pattern);
        const auto alpha = SymbolGenerator::periodic(s.matrix, {c.symbol});
        const auto res = decode(s.seq, *s.family1, alpha, 0, tol);
        CHECK(res.depth_used <= 20);
        CHECK(res.diameter < tol);
        // independent oracle: nested-interval bisection for the fixed point
        const double oracle =
            oracles::fixed_point_bisect(s.seq.map1(0), c.lo, c.hi, 1e-13);
        CHECK(std::fabs(res.point - oracle) < tol);
        // decode is deterministic
        const auto res2 = decode(s.seq, *s.family1, alpha, 0, tol);
        CHECK(res.point == res2.point);
        CHECK(res.depth_used == res2.depth_used);
    }
    // frozen closed forms
    const auto sf2 = s51("all-f2");
    CHECK(decode(sf2.seq, *sf2.family1, SymbolGenerator::periodic(sf2.matrix, {1}), 0, tol).point ==
          doctest::Approx(0.0).epsilon(1e-9));
    CHECK(decode(sf2.seq, *sf2.family1, SymbolGenerator::periodic(sf2.matrix, {2}), 0, tol).point ==
          doctest::Approx(1.75).epsilon(1e-9));
    const auto sf1 = s51("all-f1");
    CHECK(decode(sf1.seq, *sf1.family1, SymbolGenerator::periodic(sf1.matrix, {2}), 0, tol).point ==
          doctest::Approx(15.0 / 16.0).epsilon(1e-9));
}

TEST_CASE("decode honors a forced minimum depth") {
    const auto s = s51("all-f2");
    const auto alpha = SymbolGenerator::periodic(s.matrix, {1});
    const auto res = decode(s.seq, *s.family1, alpha, 0, 1e-9, 64, 18);
    CHECK(res.depth_used >= 18);
    CHECK(res.diameter < 1e-9);
}

TEST_CASE("decode without contraction hits the depth cap") {
    const auto sid = scenario::builtin_counterexample_identity();
    const auto ones = SymbolGenerator::periodic(sid.matrix, {1});
    CHECK_THROWS_WITH_AS(decode(sid.seq, *sid.family1, ones, 0, 1e-9, 16),
                         doctest::Contains("NoContraction"), Error);
}

TEST_CASE("itineraries read off symbols and report escapes") {
    const auto sf1 = s51("all-f1");
    const auto w1 = itinerary(sf1.seq, *sf1.family1, 15.0 / 16.0, 0, 12);
    for (std::size_t k = 0; k < w1.length(); ++k) CHECK(w1.at(k) == 2);

    const auto sf2 = s51("all-f2");
    const auto w2 = itinerary(sf2.seq, *sf2.family1, 0.0, 0, 12);
    for (std::size_t k = 0; k < w2.length(); ++k) CHECK(w2.at(k) == 1);

    try {
        itinerary(sf2.seq, *sf2.family1, 0.5, 0, 4);
        CHECK(false);
    } catch (const Error& e) {
        CHECK(e.code() == errc::orbit_escapes);
        CHECK(e.step() == 1); // f2(1/2) = 3 leaves the family after one step
    }
}

TEST_CASE("shared boundaries trigger the ambiguity guard in weak mode") {
    const auto m = symbolic::TransitionMatrix::full(2);
    const std::vector<Interval> touching{{0.0, 1.0}, {1.0, 2.0}};
    const expansion::CoveringFamily1D weak{m, touching, {touching}, false};
    const auto sid = scenario::builtin_counterexample_identity();
    CHECK_THROWS_WITH_AS(itinerary(sid.seq, weak, 1.0, 0, 2),
                         doctest::Contains("BoundaryAmbiguity"), Error);
    // decoding refuses weak families outright: the symbol assignment needs
    // disjoint per-step sets
    const std::vector<int> p{1};
    CHECK_THROWS_WITH_AS(nested_cell(sid.seq, weak, p, 0),
                         doctest::Contains("SeparationViolation"), Error);
    CHECK_THROWS_WITH_AS(decode(sid.seq, weak, SymbolGenerator::periodic(m, {1}), 0, 1e-9),
                         doctest::Contains("SeparationViolation"), Error);
}

TEST_CASE("conjugacy residuals vanish at depth 20") {
    for (const std::string pattern : {"alternate", "0110", "all-f1"}) {
        const auto s = s51(pattern);
        const auto res = conjugacy_residual(s.seq, *s.family1, 200, 20, 1e-9, 0x5eed, 16);
        CHECK(res.trials == 200);
        CHECK(res.max_equivariance < 1e-6);
        CHECK(res.max_roundtrip < 1e-6);
        CHECK(res.roundtrip_symbols_exact);
    }
}

TEST_CASE("periodic symbol sequences decode to orbits with matching itineraries") {
    const auto s = s51("alternate");
    const auto alpha = SymbolGenerator::periodic(s.matrix, {1, 2});
    const auto res = decode(s.seq, *s.family1, alpha, 0, 1e-9);
    const auto word = itinerary(s.seq, *s.family1, res.point, 0, res.depth_used + 1);
    for (int k = 0; k <= res.depth_used; ++k) CHECK(word.at(static_cast<std::size_t>(k)) == alpha.at(k));
}

TEST_CASE("equi-modulus: agreeing prefixes force uniformly close decodes") {
    const auto s = s51("alternate");
    const std::vector<int> depths{0, 2, 4, 8};
    const auto rows = equi_modulus_probe(s.seq, *s.family1, depths, 40, 0xfeed, 8, 1e-10);
    REQUIRE(rows.size() == depths.size());
    for (const auto& row : rows) {
        CHECK(row.worst_distance <= 0.5 * std::pow(4.0, -row.depth) + 1e-9);
        CHECK(row.worst_distance <= 2.0);
    }
}

TEST_CASE("decoded points generate invariant orbits") {
    const auto s = s51("alternate");
    std::mt19937_64 rng(47);
    const Region1D outer = s.family1->outer_union();
    for (int t = 0; t < 10; ++t) {
        const auto alpha = symbolic::random_admissible(s.matrix, rng(), 96);
        // the true orbit (via per-step decoding) stays inside the outer sets
        std::vector<double> orbit;
        for (long k = 0; k <= 50; ++k) {
            const double x = decode_orbit_point(s.seq, *s.family1, alpha, 0, k, 1e-10);
            CHECK(outer.contains(x, 1e-9));
            orbit.push_back(x);
        }
        // floating forward composition agrees on the numerically trustworthy
        // window: the decode error (< tol) amplifies by at most 16 per step
        const double x0 = orbit.front();
        for (long k = 0; k <= 6; ++k)
            CHECK(std::fabs(s.seq.compose1(0, k, x0) - orbit[static_cast<std::size_t>(k)]) <
                  1e-10 * std::pow(16.0, static_cast<double>(k)) + 1e-11);
    }
}
