#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "symdyn/error.hpp"
#include "symdyn/expansion.hpp"
#include "symdyn/hyperspace.hpp"
#include "symdyn/scenario.hpp"

using namespace symdyn;
using namespace symdyn::expansion;

namespace {

scenario::Scenario s51(const std::string& pattern) { return scenario::builtin_example_51(pattern); }

ExpansionReport verify51(const std::string& pattern) {
    const auto s = s51(pattern);
    return check_covering_1d(s.seq, *s.family1, s.verify_horizon, s.tol.geom, 256, 1);
}

} // namespace

TEST_CASE("the bundled 1D scenario passes covering for every pattern") {
    for (const std::string pattern : {"all-f1", "all-f2", "alternate", "0110"}) {
        const auto s = s51(pattern);
        const auto rep = verify51(pattern);
        CHECK(rep.weak_ce);
        CHECK(rep.strict_weak_ce);
        CHECK(rep.h1_implied);
        CHECK(rep.h2_implied);
        CHECK(rep.separation_outer == 0.25);
        CHECK(rep.rows.size() == static_cast<std::size_t>(2 * s.verify_horizon));
        for (const auto& row : rep.rows) {
            CHECK(row.covered);
            CHECK(row.margin >= 0.0);
            // images are exactly [0,3] on every step set
            const auto img = s.seq.map1(row.n).image(s.family1->step_set(row.n, row.i));
            CHECK(img.component_count() == 1);
            CHECK(img.min() == 0.0);
            CHECK(img.max() == 3.0);
            // exact expansion constants: 8 on f1 steps, 4 on f2 steps
            const double expect = s.seq.pattern_index(row.n) == 0 ? 8.0 : 4.0;
            CHECK(std::fabs(row.lambda_exact - expect) < 1e-6);
            CHECK(row.lambda_sampled + 1e-12 >= row.lambda_exact);
        }
    }
    CHECK(verify51("all-f1").lambda_lower == 8.0);
    CHECK(verify51("all-f2").lambda_lower == 4.0);
    CHECK(verify51("alternate").lambda_lower == 4.0);
    CHECK(verify51("all-f2").separation_step == 1.0);
    CHECK(verify51("alternate").separation_step == 0.5);
}

TEST_CASE("the identity map cannot cover separated sets") {
    const auto s = scenario::builtin_counterexample_identity();
    const auto rep = check_covering_1d(s.seq, *s.family1, s.verify_horizon, s.tol.geom, 64, 1);
    CHECK_FALSE(rep.weak_ce);
    CHECK_FALSE(rep.h1_implied);
    bool some_negative_margin = false;
    for (const auto& row : rep.rows)
        if (!row.covered && row.margin < 0.0) some_negative_margin = true;
    CHECK(some_negative_margin);
}

TEST_CASE("strict mode rejects touching sets at construction") {
    const auto m = symbolic::TransitionMatrix::full(2);
    const std::vector<Interval> touching{{0.0, 0.5}, {0.5, 1.0}};
    CHECK_THROWS_WITH_AS(
        (CoveringFamily1D{m, touching, {touching}, true}),
        doctest::Contains("SeparationViolation"), Error);
    // weak mode accepts shared endpoints
    const CoveringFamily1D weak{m, touching, {touching}, false};
    CHECK(weak.step_separation() == 0.0);
}

TEST_CASE("per-step sets must sit inside their outer sets") {
    const auto m = symbolic::TransitionMatrix::full(2);
    CHECK_THROWS_AS((CoveringFamily1D{m,
                                      {{0.0, 0.5}, {0.75, 2.0}},
                                      {{{0.0, 0.6}, {0.75, 2.0}}},
                                      true}),
                    Error);
}

TEST_CASE("aperiodic or mis-dimensioned requests are rejected") {
    const auto s = s51("alternate");
    CHECK_THROWS_WITH_AS(check_covering_1d(s.seq, *s.family1, 1), doctest::Contains("Aperiodic"),
                         Error);
    const auto s2 = scenario::builtin_example_52();
    CHECK_THROWS_AS(check_covering_1d(s2.seq, *s.family1, 4), Error);
    const std::vector<long> steps{0};
    CHECK_THROWS_AS(check_covering_2d(s.seq, *s2.family2, steps, 64), Error);
}

TEST_CASE("covering is monotone under target shrinking") {
    const auto s = s51("alternate");
    for (long n = 0; n < s.verify_horizon; ++n) {
        for (int i = 1; i <= 2; ++i) {
            const auto img = s.seq.map1(n).image(s.family1->step_set(n, i));
            std::vector<Interval> full_targets, half_targets;
            for (int j = 1; j <= 2; ++j) {
                const Interval t = s.family1->step_set(n + 1, j);
                full_targets.push_back(t);
                const double c = t.midpoint(), h = 0.25 * t.width();
                half_targets.push_back({c - h, c + h});
            }
            const auto full = Region1D::from_intervals(full_targets);
            const auto half = Region1D::from_intervals(half_targets);
            CHECK(img.containment_margin(half) >= img.containment_margin(full));
            if (img.contains_region(full, 1e-12)) CHECK(img.contains_region(half, 1e-12));
        }
    }
}

TEST_CASE("strict separation agrees with the metric module") {
    const auto s = s51("alternate");
    for (long r = 0; r < s.family1->period(); ++r) {
        const auto& ph = s.family1->phase(r);
        const double direct = region_distance(Region1D::from_interval(ph[0]),
                                              Region1D::from_interval(ph[1]));
        CHECK(direct == interval_distance(ph[0], ph[1]));
        CHECK(direct > 0.0);
    }
    CHECK(region_distance(Region1D::from_interval(s.family1->outer(1)),
                          Region1D::from_interval(s.family1->outer(2))) == 0.25);
}

TEST_CASE("induced covering transfer: preimages of compact targets map back onto them") {
    // whenever the point system covers, every compact K inside an allowed
    // target admits K0 = f^{-1}(hull K) within V_{i,n} with f(K0) = hull K
    const auto s = s51("alternate");
    std::mt19937_64 rng(31);
    for (long n = 0; n < s.verify_horizon; ++n) {
        for (int i = 1; i <= 2; ++i) {
            for (int j = 1; j <= 2; ++j) {
                if (!s.matrix.entry(i, j)) continue;
                const Interval target = s.family1->step_set(n + 1, j);
                for (int t = 0; t < 50; ++t) {
                    std::uniform_real_distribution<double> u(target.lo, target.hi);
                    std::vector<Interval> parts;
                    const int count = 1 + static_cast<int>(rng() % 3);
                    for (int c = 0; c < count; ++c) {
                        double a = u(rng), b = u(rng);
                        if (a > b) std::swap(a, b);
                        parts.push_back({a, b});
                    }
                    const auto k = Region1D::from_intervals(parts);
                    const Interval hull = k.hull();
                    const auto k0 = s.seq.map1(n).preimage_in(
                        Region1D::from_interval(hull),
                        Region1D::from_interval(s.family1->step_set(n, i)), s.tol.geom);
                    REQUIRE(k0.has_value());
                    const auto img = s.seq.map1(n).image(*k0);
                    const auto clipped = intersect(img, hull);
                    REQUIRE(clipped.has_value());
                    CHECK(hyperspace::hausdorff(*clipped, Region1D::from_interval(hull)) <
                          s.tol.geom);
                }
            }
        }
    }
}

TEST_CASE("expansion constant combines exact and sampled routes") {
    const auto s = s51("alternate");
    CHECK(expansion_constant(s.seq, *s.family1, s.verify_horizon, 512, 5) == 4.0);
    const auto sf1 = s51("all-f1");
    CHECK(expansion_constant(sf1.seq, *sf1.family1, sf1.verify_horizon, 512, 5) == 8.0);
}

TEST_CASE("planar face-sign verification covers the bundled boxes") {
    const auto s = scenario::builtin_example_52();
    const std::vector<long> steps{0, 1, 10, 1000};
    const auto rep = check_covering_2d(s.seq, *s.family2, steps, 256, 4096, 1);
    CHECK(rep.weak_ce);
    CHECK(rep.strict_weak_ce);
    CHECK_FALSE(rep.any_inconclusive());
    CHECK(rep.rows.size() == 8);
    for (const auto& row : rep.rows) {
        CHECK(row.covered);
        CHECK(row.margin > 0.0);
    }
    CHECK(rep.lambda_lower >= 11.0 - 0.5);
    CHECK(rep.lambda_lower <= 13.0 + 0.5);
    CHECK(rep.separation_outer == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
}

TEST_CASE("a too-coarse face grid is reported inconclusive, not covered") {
    // with two face samples the Lipschitz correction L*h swamps the true
    // margin (~1.15) while the raw bounds stay strict
    const auto s = scenario::builtin_example_52();
    const std::vector<long> steps{0};
    const auto rep = check_covering_2d(s.seq, *s.family2, steps, 2, 512, 1);
    CHECK_FALSE(rep.weak_ce);
    CHECK(rep.any_inconclusive());
    for (const auto& row : rep.rows) CHECK(row.inconclusive);
}

TEST_CASE("boxes crossing a sawtooth fold are rejected") {
    // 12 * [-1/2, 1/2] = [-6, 6] spans fold points: not coordinate-expanding
    const auto m = symbolic::TransitionMatrix::full(2);
    const CoveringFamily2D fam{
        m, {{{-0.5, 0.5}, {-0.5, 0.5}}, {{1.0, 1.5}, {1.0, 1.5}}}, true};
    const auto s = scenario::builtin_example_52();
    const std::vector<long> steps{0};
    CHECK_THROWS_WITH_AS(check_covering_2d(s.seq, fam, steps, 64),
                         doctest::Contains("FaceTestInconclusive"), Error);
}

TEST_CASE("a weakened planar map fails the face test") {
    // weight 0 and unit inner scale: saw2(x1) on [-1/6,1/6] has range
    // [-1/6,1/6] and cannot cover either box
    const auto m = symbolic::TransitionMatrix::full(2);
    const double sixth = 1.0 / 6.0;
    const CoveringFamily2D fam{
        m, {{{-sixth, sixth}, {-sixth, sixth}}, {{0.5, 5.0 / 6.0}, {0.5, 5.0 / 6.0}}}, true};
    const auto weak_seq =
        dynsys::MapSequence::family_2d({dynsys::WeightRule::Kind::constant, 0.0}, 1.0);
    const std::vector<long> steps{0};
    const auto rep = check_covering_2d(weak_seq, fam, steps, 128, 512, 1);
    CHECK_FALSE(rep.weak_ce);
}

namespace {

// A golden-mean scenario: V2 may only be followed by V1, and the map on V2
// reaches exactly [0,1], so covering holds for [[1,1],[1,0]] but not for
// the full matrix.
dynsys::MapSequence golden_seq() {
    using namespace dynsys;
    return MapSequence::periodic_1d(
        {Map1D("gm", {0.0, 2.0},
               {Piece1D{{0.0, 0.5}, true, true, AffineExpr{4.0, 0.0}},
                Piece1D{{0.5, 1.5}, false, true, ConstantExpr{1.0}},
                Piece1D{{1.5, 2.0}, false, true, AffineExpr{-2.0, 4.0}}})},
        {0});
}

CoveringFamily1D golden_family(const symbolic::TransitionMatrix& m) {
    return CoveringFamily1D{m,
                            {{0.0, 0.5}, {1.5, 2.0}},
                            {{{0.0, 0.5}, {1.5, 2.0}}},
                            true};
}

} // namespace

TEST_CASE("row-dependent target unions discriminate between matrices") {
    const auto golden = symbolic::TransitionMatrix::validate({{1, 1}, {1, 0}});
    const auto full = symbolic::TransitionMatrix::full(2);
    const auto seq = golden_seq();

    const auto rep_golden = check_covering_1d(seq, golden_family(golden), 2);
    CHECK(rep_golden.weak_ce);
    CHECK(rep_golden.strict_weak_ce);
    CHECK(rep_golden.lambda_lower == 2.0); // min slope on V2
    CHECK(rep_golden.h2_implied);

    // under the full matrix, V2 would also have to cover itself, and the
    // image [0,1] cannot reach [3/2,2]
    const auto rep_full = check_covering_1d(seq, golden_family(full), 2);
    CHECK_FALSE(rep_full.weak_ce);
    bool row2_uncovered = false;
    for (const auto& row : rep_full.rows)
        if (row.i == 2 && !row.covered) row2_uncovered = true;
    CHECK(row2_uncovered);
}

TEST_CASE("classification mirrors the worked examples") {
    const auto s1 = s51("alternate");
    const auto rep1 = verify51("alternate");
    const auto checks1 = classify(rep1, s1.matrix, s1.flags);
    int applicable1 = 0;
    for (const auto& t : checks1) {
        if (t.applicable) ++applicable1;
        if (t.name.rfind("3.7", 0) == 0 || t.name.rfind("3.8", 0) == 0 ||
            t.name.rfind("4.8", 0) == 0)
            CHECK(t.applicable);
    }
    CHECK(applicable1 == 15);

    const auto s2 = scenario::builtin_example_52();
    const std::vector<long> steps{0, 1, 10, 1000};
    const auto rep2 = check_covering_2d(s2.seq, *s2.family2, steps, 256, 2048, 1);
    for (const auto& t : classify(rep2, s2.matrix, s2.flags)) {
        if (t.name.rfind("3.7", 0) == 0 || t.name.rfind("4.8", 0) == 0) CHECK(t.applicable);
        if (t.name.rfind("3.8", 0) == 0 || t.name.rfind("4.9", 0) == 0) CHECK_FALSE(t.applicable);
    }

    const auto sid = scenario::builtin_counterexample_identity();
    const auto rep3 = check_covering_1d(sid.seq, *sid.family1, sid.verify_horizon);
    for (const auto& t : classify(rep3, sid.matrix, sid.flags)) CHECK_FALSE(t.applicable);
}
