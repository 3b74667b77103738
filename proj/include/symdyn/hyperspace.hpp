// Compact-set arithmetic: the exact Hausdorff metric on interval unions and
// point sets, the induced set-valued step, and desk-scale checks of the
// hyperspace cell bridge.
#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "symdyn/coding.hpp"
#include "symdyn/dynsys.hpp"
#include "symdyn/expansion.hpp"
#include "symdyn/region.hpp"

namespace symdyn::hyperspace {

double dist_point_region(double x, const Region1D& r);

/// Directed distance sup_{a in A} d(a, B), exact for unions of closed
/// intervals (endpoint sweep; see the case analysis in the implementation).
double directed_distance(const Region1D& a, const Region1D& b);

/// Hausdorff metric: max of the two directed distances.
double hausdorff(const Region1D& a, const Region1D& b);
/// Exact max-min over the two finite point sets (sup-norm).
double hausdorff(const Region2D& a, const Region2D& b);

/// Induced set-valued step A -> f_n(A): exact 1D interval-union image,
/// pointwise 2D image. Errors: out_of_domain.
Region1D induced_step(const dynsys::MapSequence& seq, long n, const Region1D& a);
Region2D induced_step(const dynsys::MapSequence& seq, long n, const Region2D& a);

struct OrbitStep1D {
    long step;
    Region1D region;
};
struct OrbitStep2D {
    long step;
    Region2D region;
};

/// Iterated induced step. Errors: out_of_domain_at_step(k).
std::vector<OrbitStep1D> induced_orbit(const dynsys::MapSequence& seq, const Region1D& a0,
                                       long steps);
std::vector<OrbitStep2D> induced_orbit(const dynsys::MapSequence& seq, const Region2D& a0,
                                       long steps);

struct HyperCellReport {
    int member_samples = 0;      // random compact K inside the cell
    int member_failures = 0;     // some forward image escaped its prescribed set
    int exterior_samples = 0;    // K with a point outside the cell
    int exterior_detected = 0;   // those whose membership test failed, as it must
    double worst_slack = 0.0;    // most negative containment margin over member checks
};

/// Desk-scale check of the hyperspace cell bridge for one prefix: random
/// compact sub-regions K of the cell must satisfy f_n^k(K) inside
/// V_{a_k,n+k} for k <= depth (membership in the hyperspace cell), and
/// regions with an exterior point must fail the test. Iterated-image
/// containments are checked with geom_tol plus a floating amplification
/// allowance of 1e-14 * 16^depth.
HyperCellReport hyper_cell_check(const dynsys::MapSequence& seq,
                                 const expansion::CoveringFamily1D& fam,
                                 std::span<const int> prefix, long n, int samples,
                                 std::uint64_t seed, double geom_tol = 1e-12);

struct ContractionRow {
    int depth = 0;
    double cell_diameter = 0.0;  // d(V_alpha^{m,n})
    double member_spread = 0.0;  // max pairwise Hausdorff among sampled members
};

/// Measures, per depth m of the schedule, the cell diameter against the
/// Hausdorff spread of sampled members of the hyperspace cell (the two
/// vanish together; each bounds the other). Sampled members always include
/// the endpoint singletons, which realize the diameter exactly.
std::vector<ContractionRow> hausdorff_contraction_probe(const dynsys::MapSequence& seq,
                                                        const expansion::CoveringFamily1D& fam,
                                                        const symbolic::SymbolGenerator& alpha,
                                                        long n, std::span<const int> depths,
                                                        int samples, std::uint64_t seed);

} // namespace symdyn::hyperspace
