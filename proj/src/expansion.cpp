#include "symdyn/expansion.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "symdyn/error.hpp"
#include "symdyn/hyperspace.hpp"

namespace symdyn::expansion {

using dynsys::MapSequence;
using symbolic::TransitionMatrix;

// ---- covering families -------------------------------------------------------

namespace {

double pairwise_separation(const std::vector<Interval>& sets) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < sets.size(); ++i)
        for (std::size_t j = i + 1; j < sets.size(); ++j)
            best = std::min(best, interval_distance(sets[i], sets[j]));
    return best;
}

double box_distance(const Box2& a, const Box2& b) {
    // sup-norm distance between boxes: max of the per-axis gaps
    return std::max(interval_distance(a.x, b.x), interval_distance(a.y, b.y));
}

} // namespace

CoveringFamily1D::CoveringFamily1D(TransitionMatrix matrix, std::vector<Interval> outer,
                                   std::vector<std::vector<Interval>> phases, bool strict)
    : matrix_(std::move(matrix)), outer_(std::move(outer)), phases_(std::move(phases)),
      strict_(strict) {
    const int n = matrix_.size();
    if (static_cast<int>(outer_.size()) != n)
        raise(errc::validation_error, "need one outer set per symbol");
    if (phases_.empty()) raise(errc::validation_error, "per-step rule needs at least one phase");
    for (const auto& ph : phases_) {
        if (static_cast<int>(ph.size()) != n)
            raise(errc::validation_error, "each phase needs one set per symbol");
        for (int i = 0; i < n; ++i) {
            if (!(ph[i].lo <= ph[i].hi))
                raise(errc::validation_error, "empty per-step set");
            if (!outer_[i].contains(ph[i]))
                raise(errc::validation_error, "per-step set escapes its outer set");
        }
        if (strict_ && pairwise_separation(ph) <= 0.0)
            raise(errc::separation_violation, "strict mode requires positive per-step separation");
    }
    if (strict_ && pairwise_separation(outer_) <= 0.0)
        raise(errc::separation_violation, "strict mode requires positive outer separation");
}

const Interval& CoveringFamily1D::step_set(long n, int i) const {
    if (n < 0) raise(errc::symbol_out_of_range, "negative time index");
    const auto& ph = phases_[static_cast<std::size_t>(n % period())];
    if (i < 1 || i > symbols()) raise(errc::symbol_out_of_range, "symbol outside 1..N");
    return ph[static_cast<std::size_t>(i - 1)];
}

double CoveringFamily1D::outer_separation() const { return pairwise_separation(outer_); }

double CoveringFamily1D::step_separation() const {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& ph : phases_) best = std::min(best, pairwise_separation(ph));
    return best;
}

Interval CoveringFamily1D::envelope() const {
    double lo = outer_.front().lo, hi = outer_.front().hi;
    for (const auto& v : outer_) {
        lo = std::min(lo, v.lo);
        hi = std::max(hi, v.hi);
    }
    return {lo, hi};
}

Region1D CoveringFamily1D::outer_union() const {
    return Region1D::from_intervals(outer_);
}

CoveringFamily2D::CoveringFamily2D(TransitionMatrix matrix, std::vector<Box2> outer, bool strict)
    : matrix_(std::move(matrix)), outer_(std::move(outer)), strict_(strict) {
    if (static_cast<int>(outer_.size()) != matrix_.size())
        raise(errc::validation_error, "need one box per symbol");
    if (strict_ && outer_separation() <= 0.0)
        raise(errc::separation_violation, "strict mode requires positive box separation");
}

double CoveringFamily2D::outer_separation() const {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < outer_.size(); ++i)
        for (std::size_t j = i + 1; j < outer_.size(); ++j)
            best = std::min(best, box_distance(outer_[i], outer_[j]));
    return best;
}

// ---- report helpers ----------------------------------------------------------

bool ExpansionReport::all_covered() const {
    return std::all_of(rows.begin(), rows.end(),
                       [](const CoverRow& r) { return r.covered && !r.inconclusive; });
}

bool ExpansionReport::any_inconclusive() const {
    return std::any_of(rows.begin(), rows.end(), [](const CoverRow& r) { return r.inconclusive; });
}

// ---- 1D covering check -------------------------------------------------------

ExpansionReport check_covering_1d(const MapSequence& seq, const CoveringFamily1D& fam,
                                  long horizon, double geom_tol, int lambda_samples,
                                  std::uint64_t seed) {
    if (seq.dimension() != 1) raise(errc::not_one_dimensional, "1D covering check");
    if (!seq.periodic()) raise(errc::aperiodic_rule, "map pattern must be periodic");
    const long scenario_period = std::lcm(seq.period(), fam.period());
    if (scenario_period > horizon)
        raise(errc::aperiodic_rule, "horizon must cover a full period of the scenario");

    ExpansionReport rep;
    rep.horizon = horizon;
    rep.periodic_rule = true;
    rep.period = scenario_period;
    rep.separation_outer = fam.outer_separation();
    rep.separation_step = fam.step_separation();

    const int N = fam.symbols();
    double lambda = std::numeric_limits<double>::infinity();
    std::mt19937_64 rng(seed);
    for (long n = 0; n < horizon; ++n) {
        const auto& map = seq.map1(n);
        for (int i = 1; i <= N; ++i) {
            const Interval& vin = fam.step_set(n, i);
            const Region1D img = map.image(vin);
            std::vector<Interval> targets;
            for (int j = 1; j <= N; ++j)
                if (fam.matrix().entry(i, j)) targets.push_back(fam.step_set(n + 1, j));
            const Region1D target = Region1D::from_intervals(std::move(targets));

            CoverRow row;
            row.n = n;
            row.i = i;
            const double margin = img.containment_margin(target);
            row.covered = margin >= -geom_tol;
            row.margin = row.covered ? std::max(margin, 0.0)
                                     : -hyperspace::directed_distance(target, img);
            row.lambda_exact = map.min_abs_slope(vin);
            row.lambda_sampled =
                vin.width() > 0.0
                    ? dynsys::lipschitz_band(map, Region1D::from_interval(vin), lambda_samples,
                                             rng())
                          .lower
                    : row.lambda_exact;
            lambda = std::min(lambda, std::min(row.lambda_exact, row.lambda_sampled));
            rep.rows.push_back(row);
        }
    }
    rep.weak_ce = rep.all_covered();
    rep.strict_weak_ce = rep.weak_ce && rep.separation_step > 0.0 && rep.separation_outer > 0.0;
    rep.h1_implied = rep.weak_ce;
    rep.lambda_lower = lambda;
    rep.h2_implied = rep.weak_ce && lambda > 1.0;
    return rep;
}

// ---- 2D face-sign check ------------------------------------------------------

namespace {

// Checks that saw2(scale * t) is monotone on the box's k-extent (the extent
// must fit inside one branch [4m-2, 4m+2]).
bool saw_monotone_on(double scale, const Interval& ext) {
    const double ulo = std::min(scale * ext.lo, scale * ext.hi);
    const double uhi = std::max(scale * ext.lo, scale * ext.hi);
    const double m = std::floor((ulo + 2.0) / 4.0);
    return uhi <= 4.0 * m + 2.0 + 1e-12;
}

} // namespace

ExpansionReport check_covering_2d(const MapSequence& seq, const CoveringFamily2D& fam,
                                  std::span<const long> steps, int grid, int lambda_samples,
                                  std::uint64_t seed) {
    if (seq.dimension() != 2) raise(errc::not_two_dimensional, "2D covering check");
    if (grid < 2) raise(errc::symbol_out_of_range, "grid must be >= 2");

    ExpansionReport rep;
    rep.horizon = static_cast<long>(steps.size());
    rep.periodic_rule = seq.period() == 1;
    rep.period = seq.period();
    rep.separation_outer = fam.outer_separation();
    rep.separation_step = rep.separation_outer;

    const int N = fam.symbols();
    const double scale = seq.scale2();
    for (const auto& box : fam.boxes()) {
        if (!saw_monotone_on(scale, box.x) || !saw_monotone_on(scale, box.y))
            raise(errc::face_test_inconclusive,
                  "box is not coordinate-expanding: sawtooth folds inside");
    }

    double lambda = std::numeric_limits<double>::infinity();
    std::mt19937_64 rng(seed);
    for (long n : steps) {
        const dynsys::Map2D map = seq.map2(n);
        // Lipschitz upper bound for the face-sampling correction.
        const double lip_upper =
            dynsys::lipschitz_band(map, fam.boxes(), lambda_samples, rng()).upper;
        for (int i = 1; i <= N; ++i) {
            const Box2& box = fam.outer(i);
            // Bounds of the target union per coordinate.
            double tlo[3] = {0, std::numeric_limits<double>::infinity(),
                             std::numeric_limits<double>::infinity()};
            double thi[3] = {0, -std::numeric_limits<double>::infinity(),
                             -std::numeric_limits<double>::infinity()};
            bool has_target = false;
            for (int j = 1; j <= N; ++j) {
                if (!fam.matrix().entry(i, j)) continue;
                has_target = true;
                const Box2& t = fam.outer(j);
                tlo[1] = std::min(tlo[1], t.x.lo);
                thi[1] = std::max(thi[1], t.x.hi);
                tlo[2] = std::min(tlo[2], t.y.lo);
                thi[2] = std::max(thi[2], t.y.hi);
            }
            CoverRow row;
            row.n = n;
            row.i = i;
            if (!has_target) {
                row.covered = true;
                row.margin = std::numeric_limits<double>::infinity();
                rep.rows.push_back(row);
                continue;
            }
            double raw_margin = std::numeric_limits<double>::infinity();
            double corrected_margin = std::numeric_limits<double>::infinity();
            for (int k = 1; k <= 2; ++k) {
                const Interval self = (k == 1) ? box.x : box.y;
                const Interval other = (k == 1) ? box.y : box.x;
                const double h = other.width() / grid;
                const double corr = lip_upper * h;
                double face_max = -std::numeric_limits<double>::infinity();
                double face_min = std::numeric_limits<double>::infinity();
                for (int g = 0; g <= grid; ++g) {
                    const double o = other.lo + g * h;
                    const Point2 plo = (k == 1) ? Point2{self.lo, o} : Point2{o, self.lo};
                    const Point2 phi = (k == 1) ? Point2{self.hi, o} : Point2{o, self.hi};
                    face_max = std::max(face_max, map.component(k, plo));
                    face_min = std::min(face_min, map.component(k, phi));
                }
                // low face must land strictly below the target, high face
                // strictly above; IVT then sweeps component k across it
                const double m_lo = tlo[k] - face_max;
                const double m_hi = face_min - thi[k];
                raw_margin = std::min(raw_margin, std::min(m_lo, m_hi));
                corrected_margin = std::min(corrected_margin, std::min(m_lo - corr, m_hi - corr));
            }
            row.margin = corrected_margin;
            if (corrected_margin > 0.0) {
                row.covered = true;
            } else if (raw_margin > 0.0) {
                row.covered = false;
                row.inconclusive = true;
            } else {
                row.covered = false;
            }
            const double lam =
                dynsys::lipschitz_band(map, std::span<const Box2>(&box, 1), lambda_samples, rng())
                    .lower;
            row.lambda_sampled = lam;
            row.lambda_exact = lam;
            lambda = std::min(lambda, lam);
            rep.rows.push_back(row);
        }
    }
    rep.weak_ce = rep.all_covered();
    rep.strict_weak_ce = rep.weak_ce && rep.separation_outer > 0.0;
    rep.h1_implied = rep.weak_ce;
    rep.lambda_lower = lambda;
    rep.h2_implied = rep.weak_ce && lambda > 1.0;
    return rep;
}

// ---- expansion constant ------------------------------------------------------

double expansion_constant(const MapSequence& seq, const CoveringFamily1D& fam, long horizon,
                          int samples, std::uint64_t seed) {
    if (samples < 2) raise(errc::degenerate_region, "need at least 2 samples");
    double lambda = std::numeric_limits<double>::infinity();
    std::mt19937_64 rng(seed);
    for (long n = 0; n < horizon; ++n) {
        const auto& map = seq.map1(n);
        for (int i = 1; i <= fam.symbols(); ++i) {
            const Interval& vin = fam.step_set(n, i);
            const double exact = map.min_abs_slope(vin);
            double sampled = exact;
            if (vin.width() > 0.0)
                sampled = dynsys::lipschitz_band(map, Region1D::from_interval(vin), samples, rng())
                              .lower;
            lambda = std::min(lambda, std::min(exact, sampled));
        }
    }
    return lambda;
}

// ---- classification ----------------------------------------------------------

namespace {

using Pred = std::pair<std::string, bool>;

TheoremCheck make_check(std::string name, std::vector<Pred> preds, std::string note = "") {
    TheoremCheck t;
    t.name = std::move(name);
    t.predicates = std::move(preds);
    t.applicable =
        std::all_of(t.predicates.begin(), t.predicates.end(), [](const Pred& p) { return p.second; });
    t.note = std::move(note);
    return t;
}

} // namespace

std::vector<TheoremCheck> classify(const ExpansionReport& report, const TransitionMatrix& matrix,
                                   const ScenarioFlags& flags) {
    const bool covering = report.weak_ce;
    const bool h1 = report.h1_implied;
    const bool h2 = report.h2_implied;
    const bool lam = report.lambda_lower > 1.0;
    const bool sep_outer = report.separation_outer > 0.0;
    const bool sep_step = report.separation_step > 0.0;
    const bool equi = flags.equi_continuous;
    const bool compact = flags.compact_space;
    const bool h3 = flags.compact_space || flags.compact_base;
    const bool irr = matrix.is_irreducible();
    const bool row2 = matrix.row_sum_at_least_two();
    const bool bounded = true; // covering sets are finite intervals/boxes
    const std::string chaos_note =
        irr && row2 ? "chaos clauses active (irreducible, a row sums to >= 2)"
                    : "chaos clauses inactive (needs irreducible matrix and a row sum >= 2)";
    const std::string h3_note = flags.compact_space
                                    ? "ambient space declared compact"
                                    : (flags.compact_base
                                           ? "covering-set union declared as the compact base"
                                           : "no compactness declared");

    std::vector<TheoremCheck> out;
    out.push_back(make_check("3.3 equi-semiconjugate onto the subshift; h >= log rho(A)",
                             {{"cells nonempty (H1)", h1},
                              {"outer sets separated", sep_outer},
                              {"equi-continuity declared", equi}},
                             "entropy clause additionally needs a compact space"));
    out.push_back(make_check("3.4 covering version of 3.3; images onto",
                             {{"covering verified", covering},
                              {"outer sets separated", sep_outer},
                              {"equi-continuity declared", equi}}));
    out.push_back(make_check("3.5 reverse equi-semiconjugacy; h <= log rho(A)",
                             {{"cells nonempty (H1)", h1}, {"cell diameters vanish (H2)", h2}}));
    out.push_back(make_check("3.6 equi-conjugate; h = log rho(A); chaos under irreducibility",
                             {{"cells nonempty (H1)", h1},
                              {"outer sets separated", sep_outer},
                              {"equi-continuity declared", equi},
                              {"cell diameters vanish (H2)", h2}},
                             chaos_note));
    out.push_back(make_check("3.7 covering + expansion constant; conclusions of 3.6, strong Li-Yorke",
                             {{"covering verified", covering},
                              {"outer sets separated", sep_outer},
                              {"equi-continuity declared", equi},
                              {"expansion constant > 1", lam},
                              {"outer sets bounded", bounded}},
                             chaos_note));
    out.push_back(make_check("3.8 h(f) >= log rho(A) on the whole space",
                             {{"covering verified", covering},
                              {"outer sets separated", sep_outer},
                              {"ambient space compact", compact}}));
    out.push_back(make_check("4.1 induced system semiconjugate onto the subshift",
                             {{"cells nonempty (H1)", h1},
                              {"per-step sets disjoint", sep_step},
                              {"compact base (H3)", h3}},
                             h3_note));
    out.push_back(make_check("4.2 induced covering version of 4.1; images onto",
                             {{"covering verified", covering},
                              {"per-step sets disjoint", sep_step},
                              {"compact base (H3)", h3}},
                             h3_note));
    out.push_back(make_check("4.3 induced system conjugate to the subshift",
                             {{"cells nonempty (H1)", h1},
                              {"per-step sets disjoint", sep_step},
                              {"cell diameters vanish (H2)", h2},
                              {"compact base (H3)", h3}},
                             h3_note));
    out.push_back(make_check("4.4 induced equi-semiconjugacy; h-bar >= log rho(A)",
                             {{"cells nonempty (H1)", h1},
                              {"outer sets separated", sep_outer},
                              {"equi-continuity declared", equi},
                              {"compact base (H3)", h3}},
                             h3_note));
    out.push_back(make_check("4.5 covering version of 4.4; images onto",
                             {{"covering verified", covering},
                              {"outer sets separated", sep_outer},
                              {"equi-continuity declared", equi},
                              {"compact base (H3)", h3}},
                             h3_note));
    out.push_back(make_check("4.6 reverse induced equi-semiconjugacy; h-bar <= log rho(A)",
                             {{"cells nonempty (H1)", h1},
                              {"cell diameters vanish (H2)", h2},
                              {"compact base (H3)", h3}},
                             h3_note));
    out.push_back(make_check("4.7 induced equi-conjugacy; h-bar = log rho(A); chaos",
                             {{"cells nonempty (H1)", h1},
                              {"outer sets separated", sep_outer},
                              {"equi-continuity declared", equi},
                              {"cell diameters vanish (H2)", h2},
                              {"compact base (H3)", h3}},
                             chaos_note));
    out.push_back(make_check("4.8 covering + expansion constant for the induced system",
                             {{"covering verified", covering},
                              {"outer sets separated", sep_outer},
                              {"equi-continuity declared", equi},
                              {"expansion constant > 1", lam},
                              {"outer sets bounded", bounded},
                              {"compact base (H3)", h3}},
                             chaos_note + "; " + h3_note));
    out.push_back(make_check("4.9 h-bar >= log rho(A) on the whole hyperspace",
                             {{"covering verified", covering},
                              {"outer sets separated", sep_outer},
                              {"ambient space compact", compact}}));
    return out;
}

} // namespace symdyn::expansion
