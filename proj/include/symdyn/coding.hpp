// The conjugacy machinery: nested cells, the decode map (symbol sequence to
// point), the itinerary map (point to symbol word), and residual checks of
// the conjugacy identities.
#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "symdyn/dynsys.hpp"
#include "symdyn/expansion.hpp"
#include "symdyn/region.hpp"
#include "symdyn/symbolic.hpp"

namespace symdyn::coding {

/// The exact set of points whose next depth() forward images from time
/// `start` follow the symbol prefix.
struct NestedCell {
    std::vector<int> prefix;
    long start = 0;
    Region1D region = Region1D::from_point(0.0);

    int depth() const { return static_cast<int>(prefix.size()) - 1; }
};

/// Backward recursion: C_m = V_{a_m, n+m}, then
/// C_k = (preimage of C_{k+1} under f_{n+k}) within V_{a_k, n+k}.
/// Errors: empty_cell (nonemptiness is only guaranteed under a verified
/// covering), not_admissible, not_one_dimensional.
NestedCell nested_cell(const dynsys::MapSequence& seq, const expansion::CoveringFamily1D& fam,
                       std::span<const int> prefix, long start, double geom_tol = 1e-12);

struct DecodeResult {
    double point = 0.0;     // nearest region point to the hull midpoint
    double diameter = 0.0;  // final cell diameter (error bar: point is within diameter/2)
    int depth_used = 0;
    Region1D cell = Region1D::from_point(0.0);
};

/// Deepens the nested cell of alpha from time n until its diameter falls
/// below tol. Deterministic. min_depth forces at least that many symbols to
/// be consumed. Errors: empty_cell, no_contraction (depth cap reached).
DecodeResult decode(const dynsys::MapSequence& seq, const expansion::CoveringFamily1D& fam,
                    const symbolic::SymbolGenerator& alpha, long n, double tol,
                    int depth_cap = 64, int min_depth = 0, double geom_tol = 1e-12);

/// True orbit value at time n+k of the point decoded from alpha at time n,
/// computed by decoding the shifted sequence (the conjugacy identity), so no
/// floating forward iteration is involved.
double decode_orbit_point(const dynsys::MapSequence& seq, const expansion::CoveringFamily1D& fam,
                          const symbolic::SymbolGenerator& alpha, long n, long k, double tol);

/// Symbol word of the forward orbit of x from time n: a_k is the unique i
/// with f_n^k(x) in V_{i,n+k}. Errors: orbit_escapes(k) (the exception
/// message carries the partial word length), boundary_ambiguity. The result
/// is cross-checked for admissibility.
symbolic::SymbolWord itinerary(const dynsys::MapSequence& seq,
                               const expansion::CoveringFamily1D& fam, double x, long n,
                               int steps, double geom_tol = 1e-12);

/// 2D scenarios support itineraries only (no exact planar preimages).
std::vector<int> itinerary_2d(const dynsys::MapSequence& seq,
                              const expansion::CoveringFamily2D& fam, const Point2& p, long n,
                              int steps, double geom_tol = 1e-12);

struct ConjugacyResiduals {
    double max_equivariance = 0.0; // max |f_n(decode(alpha,n)) - decode(shift(alpha), n+1)|
    double max_roundtrip = 0.0;    // max |decode(itinerary(decode(alpha,n))) - decode(alpha,n)|
    bool roundtrip_symbols_exact = false;
    int trials = 0;
    std::uint64_t seed = 0;
};

/// Over seeded random admissible sequences and random start times
/// n <= horizon, measures both conjugacy residuals.
ConjugacyResiduals conjugacy_residual(const dynsys::MapSequence& seq,
                                      const expansion::CoveringFamily1D& fam, int trials,
                                      int depth, double tol, std::uint64_t seed, long horizon);

struct ModulusRow {
    int depth = 0;
    double worst_distance = 0.0;
};

/// For random sequence pairs agreeing on the first `depth` symbols (uniform
/// over start times in the horizon), the worst decoded-point distance: the
/// uniform modulus equi-conjugacy requires.
std::vector<ModulusRow> equi_modulus_probe(const dynsys::MapSequence& seq,
                                           const expansion::CoveringFamily1D& fam,
                                           std::span<const int> depths, int pairs,
                                           std::uint64_t seed, long horizon, double tol);

} // namespace symdyn::coding
