#include "symdyn/coding.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "symdyn/error.hpp"

namespace symdyn::coding {

using dynsys::MapSequence;
using expansion::CoveringFamily1D;
using symbolic::SymbolGenerator;
using symbolic::SymbolWord;

NestedCell nested_cell(const MapSequence& seq, const CoveringFamily1D& fam,
                       std::span<const int> prefix, long start, double geom_tol) {
    if (seq.dimension() != 1) raise(errc::not_one_dimensional, "nested cells need exact preimages");
    // weak-mode families (shared boundaries) are fine for covering checks,
    // but the symbol assignment behind cells and decoding needs disjoint
    // per-step sets
    if (!(fam.step_separation() > 0.0))
        raise(errc::separation_violation, "decoding requires strictly separated per-step sets");
    if (prefix.empty()) raise(errc::empty_word, "prefix must be nonempty");
    for (std::size_t k = 0; k + 1 < prefix.size(); ++k)
        if (!fam.matrix().entry(prefix[k], prefix[k + 1]))
            raise(errc::not_admissible, "prefix is not admissible at position " + std::to_string(k));

    const int m = static_cast<int>(prefix.size()) - 1;
    Region1D cell = Region1D::from_interval(fam.step_set(start + m, prefix[m]));
    for (int k = m - 1; k >= 0; --k) {
        const Interval& vk = fam.step_set(start + k, prefix[k]);
        auto pre = seq.map1(start + k).preimage_in(cell, Region1D::from_interval(vk), geom_tol);
        if (!pre)
            raise(errc::empty_cell,
                  "cell is empty at depth " + std::to_string(k) + " (covering assumption fails)");
        cell = *pre;
    }
    NestedCell out;
    out.prefix.assign(prefix.begin(), prefix.end());
    out.start = start;
    out.region = cell;
    return out;
}

DecodeResult decode(const MapSequence& seq, const CoveringFamily1D& fam,
                    const SymbolGenerator& alpha, long n, double tol, int depth_cap,
                    int min_depth, double geom_tol) {
    if (!(tol > 0)) raise(errc::symbol_out_of_range, "decode tolerance must be positive");
    std::vector<int> prefix;
    for (int m = 0; m <= depth_cap; ++m) {
        prefix.push_back(alpha.at(m));
        if (m < min_depth) continue;
        NestedCell cell = nested_cell(seq, fam, prefix, n, geom_tol);
        if (cell.region.diameter() < tol) {
            DecodeResult out;
            out.cell = cell.region;
            out.diameter = cell.region.diameter();
            out.depth_used = m;
            out.point = cell.region.nearest_point(cell.region.hull().midpoint());
            return out;
        }
    }
    raise(errc::no_contraction,
          "cell diameter did not fall below tol within depth " + std::to_string(depth_cap));
}

double decode_orbit_point(const MapSequence& seq, const CoveringFamily1D& fam,
                          const SymbolGenerator& alpha, long n, long k, double tol) {
    return decode(seq, fam, alpha.shifted(k), n + k, tol).point;
}

namespace {

int locate_symbol(const CoveringFamily1D& fam, double x, long time, double ambiguity_tol,
                  double geom_tol, long step_for_error) {
    int found = 0;
    int near = 0;
    for (int i = 1; i <= fam.symbols(); ++i) {
        const Interval& v = fam.step_set(time, i);
        if (v.contains(x, geom_tol)) {
            if (found) raise(errc::boundary_ambiguity,
                             "point lies in two per-step sets at time " + std::to_string(time));
            found = i;
        }
        const double d = v.contains(x) ? 0.0 : std::min(std::fabs(x - v.lo), std::fabs(x - v.hi));
        if (d <= ambiguity_tol) ++near;
    }
    if (found && near > 1)
        raise(errc::boundary_ambiguity,
              "point within the ambiguity tolerance of two per-step sets at time " +
                  std::to_string(time));
    if (!found)
        raise(errc::orbit_escapes,
              "orbit leaves the covering family at step " + std::to_string(step_for_error),
              step_for_error);
    return found;
}

} // namespace

SymbolWord itinerary(const MapSequence& seq, const CoveringFamily1D& fam, double x, long n,
                     int steps, double geom_tol) {
    if (steps < 1) raise(errc::symbol_out_of_range, "need at least one step");
    // Strict separation turns a two-set tie into a pure tolerance event; the
    // guard threshold is separation/1e3 there, the geometric tolerance when
    // boundaries are shared.
    const double sep = fam.step_separation();
    const double amb = sep > 0.0 ? sep / 1e3 : geom_tol;
    std::vector<int> word;
    double v = x;
    for (int k = 0; k < steps; ++k) {
        word.push_back(locate_symbol(fam, v, n + k, amb, geom_tol, k));
        if (k + 1 < steps) {
            try {
                v = seq.evaluate1(n + k, v);
            } catch (const Error& e) {
                if (e.code() == errc::out_of_domain)
                    raise(errc::orbit_escapes, e.what(), k + 1);
                throw;
            }
        }
    }
    // cross-check against the matrix
    for (std::size_t k = 0; k + 1 < word.size(); ++k)
        if (!fam.matrix().entry(word[k], word[k + 1]))
            raise(errc::not_admissible, "itinerary produced a forbidden pair");
    return SymbolWord(fam.matrix(), std::move(word));
}

std::vector<int> itinerary_2d(const MapSequence& seq, const expansion::CoveringFamily2D& fam,
                              const Point2& p, long n, int steps, double geom_tol) {
    if (steps < 1) raise(errc::symbol_out_of_range, "need at least one step");
    std::vector<int> word;
    Point2 v = p;
    for (int k = 0; k < steps; ++k) {
        int found = 0;
        for (int i = 1; i <= fam.symbols(); ++i) {
            if (fam.outer(i).contains(v, geom_tol)) {
                if (found)
                    raise(errc::boundary_ambiguity, "point lies in two boxes");
                found = i;
            }
        }
        if (!found)
            raise(errc::orbit_escapes, "orbit leaves the boxes at step " + std::to_string(k), k);
        word.push_back(found);
        if (k + 1 < steps) v = seq.evaluate2(n + k, v);
    }
    return word;
}

ConjugacyResiduals conjugacy_residual(const MapSequence& seq, const CoveringFamily1D& fam,
                                      int trials, int depth, double tol, std::uint64_t seed,
                                      long horizon) {
    ConjugacyResiduals out;
    out.trials = trials;
    out.seed = seed;
    out.roundtrip_symbols_exact = true;
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<long> pick_n(0, std::max(0L, horizon));
    for (int t = 0; t < trials; ++t) {
        const auto alpha = symbolic::random_admissible(fam.matrix(), rng(), depth + 80);
        const long n = pick_n(rng);

        const auto here = decode(seq, fam, alpha, n, tol, depth + 16);
        const auto next = decode(seq, fam, alpha.shifted(1), n + 1, tol, depth + 16);
        const double equiv = std::fabs(seq.evaluate1(n, here.point) - next.point);
        out.max_equivariance = std::max(out.max_equivariance, equiv);

        const SymbolWord word = itinerary(seq, fam, here.point, n, here.depth_used + 1);
        for (int k = 0; k <= here.depth_used; ++k)
            if (word.at(static_cast<std::size_t>(k)) != alpha.at(k)) {
                out.roundtrip_symbols_exact = false;
                break;
            }
        const auto back = decode(
            seq, fam, SymbolGenerator::from_prefix(fam.matrix(), word.symbols()), n, tol,
            depth + 16);
        out.max_roundtrip = std::max(out.max_roundtrip, std::fabs(back.point - here.point));
    }
    return out;
}

std::vector<ModulusRow> equi_modulus_probe(const MapSequence& seq, const CoveringFamily1D& fam,
                                           std::span<const int> depths, int pairs,
                                           std::uint64_t seed, long horizon, double tol) {
    std::vector<ModulusRow> rows;
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<long> pick_n(0, std::max(0L, horizon));
    for (int d : depths) {
        double worst = 0.0;
        for (int t = 0; t < pairs; ++t) {
            const long n = pick_n(rng);
            const auto shared = symbolic::random_admissible(fam.matrix(), rng(), d + 1);
            // two random continuations of the shared d+1-symbol prefix
            auto stem = shared.prefix_word(d + 1);
            auto extend = [&](std::uint64_t s) {
                std::mt19937_64 r2(s);
                auto w = stem;
                for (int k = 0; k < 48; ++k) {
                    const auto& succ = fam.matrix().successors(w.back());
                    std::uniform_int_distribution<std::size_t> pick(0, succ.size() - 1);
                    w.push_back(succ[pick(r2)]);
                }
                return SymbolGenerator::from_prefix(fam.matrix(), std::move(w));
            };
            const auto a = extend(rng());
            const auto b = extend(rng());
            const double da = decode(seq, fam, a, n, tol).point;
            const double db = decode(seq, fam, b, n, tol).point;
            worst = std::max(worst, std::fabs(da - db));
        }
        rows.push_back({d, worst});
    }
    return rows;
}

} // namespace symdyn::coding
