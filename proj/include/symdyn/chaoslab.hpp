// Finite-horizon chaos statistics (Li-Yorke and distributional witnesses)
// and entropy estimators compared against log rho(A).
#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "symdyn/coding.hpp"
#include "symdyn/dynsys.hpp"
#include "symdyn/expansion.hpp"
#include "symdyn/symbolic.hpp"

namespace symdyn::chaoslab {

/// Distance statistics of an orbit pair over i = 0..horizon (inclusive).
/// F(eps, n') = (1/n') * #{i < n' : d_i < eps}; f_max/f_min record the
/// extreme values of F over all prefix windows n' <= horizon+1.
struct PairStats {
    long horizon = 0;
    std::vector<double> dist;
    double running_min = 0.0;
    double running_max = 0.0;
    double tail_min = 0.0;  // over the tail half [horizon/2, horizon]
    double tail_max = 0.0;
    std::vector<double> eps_grid;
    std::vector<double> f_max;
    std::vector<double> f_min;

    /// running min < 1e-3 * delta and running max > delta.
    bool li_yorke_witness(double delta) const;

    struct DcPair {
        double delta;
        double eps;
    };
    /// Grid pairs (delta <= eps) with F(eps,.) reaching >= 1 - tol on some
    /// window and F(delta,.) reaching <= tol on another.
    std::vector<DcPair> dc_pairs(double tol = 0.05) const;
    bool dc_witness(double tol = 0.05) const { return !dc_pairs(tol).empty(); }
};

/// 16 logarithmically spaced values from separation/1e3 to the domain diameter.
std::vector<double> default_eps_grid(double separation, double domain_diameter);

/// Orbit pair by raw forward iteration (suitable for fixed points and other
/// numerically benign orbits). Errors: orbit_escapes via out_of_domain.
PairStats pair_stats(const dynsys::MapSequence& seq, double x, double y, long horizon,
                     std::span<const double> eps_grid);
PairStats pair_stats(const dynsys::MapSequence& seq, const Point2& x, const Point2& y,
                     long horizon, std::span<const double> eps_grid);

/// Orbit pair of two decoded points, evaluated through per-step decoding of
/// the shifted symbol sequences: this follows the true orbits of the true
/// decoded points (a floating forward orbit of a decoded point leaves the
/// family within ~a dozen steps under expansion).
PairStats decoded_pair_stats(const dynsys::MapSequence& seq,
                             const expansion::CoveringFamily1D& fam,
                             const symbolic::SymbolGenerator& alpha,
                             const symbolic::SymbolGenerator& beta, long horizon,
                             std::span<const double> eps_grid, double decode_tol);

/// Symbol-space pair statistics with d_i the truncated sequence metric.
PairStats subshift_pair_stats(const symbolic::TransitionMatrix& m,
                              const symbolic::SymbolGenerator& alpha,
                              const symbolic::SymbolGenerator& beta, long horizon,
                              std::span<const double> eps_grid, int metric_depth = 40);

enum class EntropyMethod { word_count, itinerary_count, separated_set, induced_probe };

struct EntropyEstimate {
    EntropyMethod method{};
    std::vector<std::pair<long, double>> per_n; // (n, estimate at n)
    double rate = 0.0;
    double reference_log_rho = 0.0;
    std::string label; // what the estimator is and is not
};

/// (1/n) log count_words(n): exact on the symbolic side.
EntropyEstimate entropy_word_count(const symbolic::TransitionMatrix& m, long n_max);

/// (1/n) log of the number of admissible n-prefixes realized by decoding
/// (nonempty verified cells). Lower-bound flavored; requires a verified
/// covering. Errors: covering_required.
EntropyEstimate entropy_itinerary_count(const dynsys::MapSequence& seq,
                                        const expansion::CoveringFamily1D& fam,
                                        const expansion::ExpansionReport& report, long n_max,
                                        double decode_tol);

/// Greedy (n,eps)-separated-set growth on sampled orbits. A heuristic
/// estimator, not the open-cover entropy. The rate is the last log-count
/// increment. Errors: insufficient_samples.
EntropyEstimate entropy_separated_set(const dynsys::MapSequence& seq, const Interval& domain,
                                      long n_max, int samples, double eps, std::uint64_t seed);

/// Itinerary counting on the induced system: sub-regions of decoded cells
/// are assigned symbol words through region membership K inside V_{i,n}.
/// Errors: covering_required.
EntropyEstimate induced_entropy_probe(const dynsys::MapSequence& seq,
                                      const expansion::CoveringFamily1D& fam,
                                      const expansion::ExpansionReport& report, long n_max,
                                      int samples, double decode_tol, std::uint64_t seed);

} // namespace symdyn::chaoslab
