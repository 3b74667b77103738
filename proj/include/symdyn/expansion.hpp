// Verification of (strict) weak A-coupled-expansion: per-step covering
// checks (exact images in 1D, face-sign tests in 2D), separation, the
// expansion constant, and theorem-applicability classification.
#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "symdyn/dynsys.hpp"
#include "symdyn/region.hpp"
#include "symdyn/symbolic.hpp"

namespace symdyn::expansion {

/// Covering family for a 1D scenario: outer sets V_i and a periodic rule
/// n -> (V_{1,n}, ..., V_{N,n}); phases[n % period][i-1] is V_{i,n}.
/// Strict mode demands positive pairwise separation of the per-step sets at
/// every phase and of the outer sets (separation_violation otherwise);
/// weak mode allows shared endpoints.
class CoveringFamily1D {
public:
    CoveringFamily1D(symbolic::TransitionMatrix matrix, std::vector<Interval> outer,
                     std::vector<std::vector<Interval>> phases, bool strict);

    const symbolic::TransitionMatrix& matrix() const { return matrix_; }
    int symbols() const { return matrix_.size(); }
    long period() const { return static_cast<long>(phases_.size()); }
    bool strict() const { return strict_; }

    const Interval& outer(int i) const { return outer_.at(i - 1); }
    const Interval& step_set(long n, int i) const;
    const std::vector<Interval>& phase(long r) const { return phases_.at(r); }

    /// min over i != j of d(V_i, V_j).
    double outer_separation() const;
    /// min over phases of min over i != j of d(V_{i,n}, V_{j,n}).
    double step_separation() const;

    /// Hull of all outer sets.
    Interval envelope() const;
    Region1D outer_union() const;

private:
    symbolic::TransitionMatrix matrix_;
    std::vector<Interval> outer_;
    std::vector<std::vector<Interval>> phases_;
    bool strict_;
};

/// 2D covering family: boxes, constant in n.
class CoveringFamily2D {
public:
    CoveringFamily2D(symbolic::TransitionMatrix matrix, std::vector<Box2> outer, bool strict);

    const symbolic::TransitionMatrix& matrix() const { return matrix_; }
    int symbols() const { return matrix_.size(); }
    const Box2& outer(int i) const { return outer_.at(i - 1); }
    const std::vector<Box2>& boxes() const { return outer_; }
    double outer_separation() const;
    bool strict() const { return strict_; }

private:
    symbolic::TransitionMatrix matrix_;
    std::vector<Box2> outer_;
    bool strict_;
};

struct CoverRow {
    long n = 0;
    int i = 0;
    bool covered = false;
    bool inconclusive = false;   // 2D face test: raw bounds strict, corrected overlap
    double margin = 0.0;         // containment slack (2D: corrected face margin)
    double lambda_exact = 0.0;   // 1D: exact min |f'| on V_{i,n}
    double lambda_sampled = 0.0;
};

struct ExpansionReport {
    long horizon = 0;
    bool periodic_rule = false;  // verdict extends to all n by periodicity
    long period = 0;
    std::vector<CoverRow> rows;  // sorted by (n, i)
    double separation_outer = 0.0;
    double separation_step = 0.0;
    double lambda_lower = 0.0;
    bool weak_ce = false;
    bool strict_weak_ce = false;
    bool h1_implied = false;     // Lemma: weak coupled-expansion forces nonempty cells
    bool h2_implied = false;     // lambda_lower > 1 and bounded outer sets

    bool all_covered() const;
    bool any_inconclusive() const;
};

/// Exact per-step covering check: for each n < horizon and each i, tests
/// image(V_{i,n}) contains the union of V_{j,n+1} over allowed successors j.
/// Requires a periodic scenario (pattern and family), period <= horizon, so
/// the verdict extends to all n. Errors: not_one_dimensional, aperiodic_rule.
ExpansionReport check_covering_1d(const dynsys::MapSequence& seq, const CoveringFamily1D& fam,
                                  long horizon, double geom_tol = 1e-12,
                                  int lambda_samples = 256, std::uint64_t seed = 1);

/// Face-sign covering test for coordinate-expanding box maps at the given
/// steps: on the two faces of V_i normal to axis k, component k must lie
/// strictly below the min (resp. above the max) of the target union, with
/// Lipschitz correction L*h from face sampling. Rows are marked
/// inconclusive when only the corrected bounds overlap.
/// Errors: not_two_dimensional, face_test_inconclusive (non-monotone box).
ExpansionReport check_covering_2d(const dynsys::MapSequence& seq, const CoveringFamily2D& fam,
                                  std::span<const long> steps, int grid,
                                  int lambda_samples = 4096, std::uint64_t seed = 1);

/// lambda = min over n < horizon, i of inf |f_n(x)-f_n(y)|/|x-y| on V_{i,n}.
/// For 1D piecewise maps the exact derivative bound is computed as well and
/// the smaller of (sampled, exact) is returned. Errors: degenerate_region.
double expansion_constant(const dynsys::MapSequence& seq, const CoveringFamily1D& fam,
                          long horizon, int samples, std::uint64_t seed = 1);

/// Declared analytic facts a report cannot check.
struct ScenarioFlags {
    bool equi_continuous = false;
    bool compact_space = false;   // the ambient space itself is compact
    bool compact_base = false;    // the union of the outer sets serves as a compact base
};

struct TheoremCheck {
    std::string name;
    bool applicable = false;
    std::vector<std::pair<std::string, bool>> predicates;
    std::string note;
};

/// Transparency report: which theorem hypothesis sets are verified at desk
/// scale, from the report's checked predicates plus the declared flags.
/// Never a proof claim for unchecked analytic hypotheses.
std::vector<TheoremCheck> classify(const ExpansionReport& report,
                                   const symbolic::TransitionMatrix& matrix,
                                   const ScenarioFlags& flags);

} // namespace symdyn::expansion
