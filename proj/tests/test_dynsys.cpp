#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "symdyn/dynsys.hpp"
#include "symdyn/error.hpp"
#include "symdyn/scenario.hpp"

using namespace symdyn;
using namespace symdyn::dynsys;

namespace {

MapSequence seq51(const std::string& pattern) {
    return scenario::builtin_example_51(pattern).seq;
}

const Map1D& f1() {
    static const Map1D m = seq51("all-f1").map1(0);
    return m;
}
const Map1D& f2() {
    static const Map1D m = seq51("all-f2").map1(0);
    return m;
}

Map1D doubling() {
    return Map1D("double", {0.0, 1.0}, {Piece1D{{0.0, 1.0}, true, true, AffineExpr{2.0, 0.0}}});
}

bool region_is(const Region1D& r, std::vector<Interval> expect, double tol = 0.0) {
    if (r.component_count() != expect.size()) return false;
    for (std::size_t k = 0; k < expect.size(); ++k) {
        if (std::fabs(r.components()[k].lo - expect[k].lo) > tol) return false;
        if (std::fabs(r.components()[k].hi - expect[k].hi) > tol) return false;
    }
    return true;
}

} // namespace

TEST_CASE("saw2 is the period-8 odd triangle wave") {
    CHECK(saw2(0.0) == 0.0);
    CHECK(saw2(2.0) == 2.0);
    CHECK(saw2(4.0) == 0.0);
    CHECK(saw2(6.0) == -2.0);
    CHECK(saw2(10.0) == 2.0);
    CHECK(saw2(-2.0) == -2.0);
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-40.0, 40.0);
    for (int t = 0; t < 500; ++t) {
        const double x = u(rng);
        CHECK(saw2(x + 8.0) == doctest::Approx(saw2(x)).epsilon(1e-12));
        CHECK(saw2(-x) == doctest::Approx(-saw2(x)).epsilon(1e-12));
        CHECK(std::fabs(saw2(x)) <= 2.0 + 1e-12);
    }
}

TEST_CASE("piecewise evaluation follows the printed boundaries") {
    CHECK(f1()(0.25) == 3.0);        // 16 * 1/4 * 3/4
    CHECK(f1()(0.5) == 3.0);         // plateau
    CHECK(f1()(2.0) == 0.0);
    CHECK(f2()(2.0) == 0.0);         // 4 * 2 * (2-2)
    CHECK(f2()(1.0) == 3.0);         // plateau (1/2, 3/2]
    CHECK(f2()(0.5) == 3.0);         // 4 * 1/2 * 3/2, owned by the quadratic piece
    CHECK_THROWS_AS(f1()(3.5), Error);
    CHECK_THROWS_AS(f1()(-0.1), Error);

    // the owning piece decides at a discontinuous junction
    const Map1D step("step", {0.0, 2.0},
                     {Piece1D{{0.0, 1.0}, true, true, ConstantExpr{1.0}},
                      Piece1D{{1.0, 2.0}, false, true, ConstantExpr{2.0}}});
    CHECK(step(1.0) == 1.0);
    CHECK(step(1.0000000001) == 2.0);
}

TEST_CASE("2D family evaluates the sine+sawtooth components") {
    const auto seq = scenario::builtin_example_52().seq;
    for (long n : {0L, 1L, 10L}) {
        const auto p = seq.evaluate2(n, {0.0, 0.0});
        CHECK(p.x == 0.0);
        CHECK(p.y == 0.0);
    }
    // at n = 0 the weight n/(n+1) vanishes, leaving pure sawtooth
    const auto q = seq.evaluate2(0, {1.0 / 6.0, 0.1});
    CHECK(q.x == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(q.y == doctest::Approx(saw2(1.2)).epsilon(1e-12));
}

TEST_CASE("composition: identity at n=0, fixed points, cocycle, step errors") {
    const auto sf1 = seq51("all-f1");
    const auto sf2 = seq51("all-f2");
    CHECK(sf1.compose1(0, 0, 0.3) == 0.3);
    CHECK(sf1.compose1(0, 2, 15.0 / 16.0) == 15.0 / 16.0); // fixed point of f1
    CHECK(sf2.compose1(0, 1, 1.0) == 3.0);

    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(0.0, 3.0);
    const auto alt = seq51("alternate");
    for (int t = 0; t < 100; ++t) {
        const double x = u(rng);
        const long i = static_cast<long>(rng() % 4);
        const long m = static_cast<long>(rng() % 5);
        const long n = static_cast<long>(rng() % 5);
        CHECK(alt.compose1(i, m + n, x) == alt.compose1(i + m, n, alt.compose1(i, m, x)));
    }

    const auto esc = MapSequence::periodic_1d({doubling()}, {0});
    try {
        esc.compose1(0, 3, 0.75);
        CHECK(false);
    } catch (const Error& e) {
        CHECK(e.code() == errc::out_of_domain_at_step);
        CHECK(e.step() == 1);
    }
}

TEST_CASE("images are exact on monotone pieces") {
    CHECK(region_is(f1().image({0.0, 0.25}), {{0.0, 3.0}}));
    CHECK(region_is(f1().image({0.75, 1.0}), {{0.0, 3.0}}));
    CHECK(region_is(f2().image({1.5, 2.0}), {{0.0, 3.0}}));
    CHECK(region_is(doubling().image({0.0, 1.0}), {{0.0, 2.0}}));
    // the vertex of 16x(1-x) lies inside the plateau piece, so the image
    // over [0,1] tops out at the plateau value 3
    CHECK(region_is(f1().image({0.0, 1.0}), {{0.0, 3.0}}));
    // a pure quadratic does split at its vertex
    const Map1D bump("bump", {0.0, 1.0},
                     {Piece1D{{0.0, 1.0}, true, true, QuadraticExpr{16.0, 1.0}}});
    CHECK(region_is(bump.image({0.0, 1.0}), {{0.0, 4.0}}));
    CHECK(bump.monotone_cuts({0.0, 1.0}).size() == 2);

    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(0.0, 3.0);
    for (int t = 0; t < 200; ++t) {
        double a = u(rng), b = u(rng);
        if (a > b) std::swap(a, b);
        if (a == b) continue;
        for (const Map1D* map : {&f1(), &f2()}) {
            const auto img = map->image({a, b});
            const auto hull = oracles::image_hull_sampled(*map, {a, b}, 1000);
            CHECK(img.min() <= hull.lo + 1e-9);
            CHECK(img.max() >= hull.hi - 1e-9);
            CHECK(img.min() >= hull.lo - (hull.hi - hull.lo) * 1e-2 - 1e-9);
            CHECK(img.max() <= hull.hi + (hull.hi - hull.lo) * 1e-2 + 1e-9);
            // every sampled value lies in the region
            for (int g = 0; g <= 100; ++g) {
                const double x = a + (b - a) * g / 100;
                CHECK(img.contains((*map)(x), 1e-12));
            }
        }
    }
}

TEST_CASE("preimages invert monotone pieces exactly") {
    // fixed-point preimage: 4x(2-x) = 7/4 inside [3/2, 2] at x = 7/4
    const auto r1 = f2().preimage_in(Interval{1.75, 1.75}, Interval{1.5, 2.0});
    REQUIRE(r1.has_value());
    CHECK(r1->component_count() == 1);
    CHECK(r1->min() == doctest::Approx(1.75).epsilon(1e-14));
    CHECK(r1->max() == doctest::Approx(1.75).epsilon(1e-14));

    const auto r2 = f1().preimage_in(Interval{0.0, 3.0}, Interval{0.0, 0.25});
    REQUIRE(r2.has_value());
    CHECK(region_is(*r2, {{0.0, 0.25}}, 1e-15));

    const auto r3 = doubling().preimage_in(Interval{1.0, 2.0}, Interval{0.0, 1.0});
    REQUIRE(r3.has_value());
    CHECK(region_is(*r3, {{0.5, 1.0}}, 1e-15));

    // empty preimages are a valid result (3 is the max of f2 on that piece)
    CHECK_FALSE(f2().preimage_in(Interval{3.1, 3.5}, Interval{1.5, 2.0}).has_value());

    // membership property: x in preimage <=> f(x) in target (tol guard band)
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> u(0.0, 3.0);
    for (int t = 0; t < 100; ++t) {
        double ta = u(rng), tb = u(rng);
        if (ta > tb) std::swap(ta, tb);
        double wa = u(rng), wb = u(rng);
        if (wa > wb) std::swap(wa, wb);
        if (ta == tb || wa == wb) continue;
        for (const Map1D* map : {&f1(), &f2()}) {
            const auto pre = map->preimage_in(Interval{ta, tb}, Interval{wa, wb});
            for (int g = 0; g <= 200; ++g) {
                const double x = wa + (wb - wa) * g / 200;
                const double fx = (*map)(x);
                const bool in_pre = pre && pre->contains(x, 0.0);
                if (in_pre) CHECK(fx >= ta - 1e-9);
                if (in_pre) CHECK(fx <= tb + 1e-9);
                if (fx > ta + 1e-9 && fx < tb - 1e-9) {
                    REQUIRE(pre.has_value());
                    CHECK(pre->contains(x, 1e-12));
                }
            }
        }
    }
}

TEST_CASE("derivative bounds are exact per piece") {
    CHECK(f1().min_abs_slope({0.0, 0.25}) == 8.0);   // |16 - 32x| at x = 1/4
    CHECK(f1().min_abs_slope({0.75, 1.0}) == 8.0);
    CHECK(f2().min_abs_slope({0.0, 0.5}) == 4.0);
    CHECK(f2().min_abs_slope({1.5, 2.0}) == 4.0);
    CHECK(f1().max_abs_slope({0.0, 0.25}) == 16.0);
    CHECK(f1().min_abs_slope({0.0, 1.0}) == 0.0);    // vertex inside
    CHECK(doubling().min_abs_slope({0.0, 1.0}) == 2.0);
}

TEST_CASE("sampled Lipschitz bands") {
    const auto band = lipschitz_band(doubling(), Region1D::from_interval({0.0, 1.0}), 4096, 1);
    CHECK(band.lower == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(band.upper == doctest::Approx(2.0).epsilon(1e-12));

    const auto b1 = lipschitz_band(f1(), Region1D::from_interval({0.0, 0.25}), 4096, 2);
    CHECK(b1.lower >= 8.0);
    CHECK(b1.upper <= 16.0 + 1e-12);

    // planar family: within each box the band sits inside [11, 13]
    const auto s52 = scenario::builtin_example_52();
    const std::vector<Box2> boxes = s52.family2->boxes();
    for (long n : {0L, 1L, 7L}) {
        const auto b2 = lipschitz_band(s52.seq.map2(n), boxes, 10000, 3);
        CHECK(b2.lower >= 11.0 - 0.5);
        CHECK(b2.upper <= 13.0 + 0.5);
    }

    CHECK_THROWS_AS(lipschitz_band(f1(), Region1D::from_point(0.2), 16, 1), Error);
}

TEST_CASE("evaluation is continuous inside pieces") {
    std::mt19937_64 rng(15);
    std::uniform_real_distribution<double> u(0.01, 0.24);
    for (int t = 0; t < 100; ++t) {
        const double x = u(rng);
        const double h = 1e-7;
        CHECK(std::fabs(f1()(x + h) - f1()(x)) <= 17.0 * h);
    }
}

TEST_CASE("map construction rejects bad piece layouts") {
    // gap between pieces
    CHECK_THROWS_AS(Map1D("gap", {0.0, 2.0},
                          {Piece1D{{0.0, 0.5}, true, true, ConstantExpr{0.0}},
                           Piece1D{{1.0, 2.0}, false, true, ConstantExpr{0.0}}}),
                    Error);
    // both sides claim the junction
    CHECK_THROWS_AS(Map1D("overlap", {0.0, 2.0},
                          {Piece1D{{0.0, 1.0}, true, true, ConstantExpr{0.0}},
                           Piece1D{{1.0, 2.0}, true, true, ConstantExpr{0.0}}}),
                    Error);
    // neither side claims it
    CHECK_THROWS_AS(Map1D("hole", {0.0, 2.0},
                          {Piece1D{{0.0, 1.0}, true, false, ConstantExpr{0.0}},
                           Piece1D{{1.0, 2.0}, false, true, ConstantExpr{0.0}}}),
                    Error);
    // degenerate expression parameters (flat pieces must be constants)
    CHECK_THROWS_AS(Map1D("flat-affine", {0.0, 1.0},
                          {Piece1D{{0.0, 1.0}, true, true, AffineExpr{0.0, 1.0}}}),
                    Error);
    CHECK_THROWS_AS(Map1D("flat-quad", {0.0, 1.0},
                          {Piece1D{{0.0, 1.0}, true, true, QuadraticExpr{0.0, 1.0}}}),
                    Error);
    CHECK_THROWS_AS(Map1D("flat-saw", {0.0, 1.0},
                          {Piece1D{{0.0, 1.0}, true, true, SawtoothExpr{0.0}}}),
                    Error);
}
