// The non-autonomous map engine: piecewise 1D maps with exact monotone-piece
// images/preimages, the planar sine+sawtooth family, composed maps, and
// sampled Lipschitz bands.
#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "symdyn/region.hpp"

namespace symdyn::dynsys {

// ---- expressions ----------------------------------------------------------

struct ConstantExpr { double c; };
struct AffineExpr   { double p, q; };          // p*t + q
struct QuadraticExpr{ double c, d; };          // c*t*(d - t)
struct SawtoothExpr { double scale; };         // saw2(scale * t)

using Expr = std::variant<ConstantExpr, AffineExpr, QuadraticExpr, SawtoothExpr>;

/// Period-8 triangle wave: saw2(t) = (-1)^m (t - 4m) on [4m-2, 4m+2).
/// Continuous, odd, |slope| = 1.
double saw2(double t);

double eval_expr(const Expr& e, double t);

// ---- piecewise 1D maps ----------------------------------------------------

/// One piece of a piecewise map. The domain interval carries ownership flags
/// for its endpoints so half-open conventions like (1/4, 3/4] are exact.
struct Piece1D {
    Interval domain;
    bool closed_lo = true;
    bool closed_hi = true;
    Expr expr;

    bool owns(double x) const {
        if (x < domain.lo || x > domain.hi) return false;
        if (x == domain.lo && !closed_lo) return false;
        if (x == domain.hi && !closed_hi) return false;
        return true;
    }
};

/// Piecewise-defined map on a closed interval. Pieces must tile the declared
/// domain exactly (each boundary owned by exactly one piece). Monotone
/// decomposition is computed symbolically at construction: quadratics split
/// at the vertex d/2, sawtooths at the fold points scale*t = 4m+2.
class Map1D {
public:
    Map1D(std::string name, Interval domain, std::vector<Piece1D> pieces);

    const std::string& name() const { return name_; }
    const Interval& domain() const { return domain_; }
    const std::vector<Piece1D>& pieces() const { return pieces_; }

    /// Errors: out_of_domain.
    double operator()(double x) const;

    /// Exact image of iv as a canonical union of closed intervals (per
    /// monotone sub-piece, the interval between the endpoint values).
    /// Piece closures are used, which can add isolated limit values at
    /// jump junctions; the maps in this library are continuous, where the
    /// result is exact. Errors: out_of_domain.
    Region1D image(const Interval& iv) const;
    Region1D image(const Region1D& region) const;

    /// { x in `within` : f(x) in target }, exact per monotone sub-piece via
    /// closed-form inversion. tol guards the quadratic discriminant against
    /// targets a rounding error beyond the vertex value. An empty result is
    /// valid and is returned as nullopt.
    std::optional<Region1D> preimage_in(const Interval& target, const Interval& within,
                                        double tol = 1e-12) const;
    std::optional<Region1D> preimage_in(const Region1D& target, const Region1D& within,
                                        double tol = 1e-12) const;

    /// Exact inf / sup of |f'| over the interval (piecewise closed form).
    double min_abs_slope(const Interval& iv) const;
    double max_abs_slope(const Interval& iv) const;

    /// Monotone sub-piece domains overlapping iv (for tests/inspection).
    std::vector<Interval> monotone_cuts(const Interval& iv) const;

private:
    struct MonoPiece {
        Interval dom;           // closed sub-domain
        std::size_t piece;      // index of the owning piece (keeps copies valid)
    };
    std::vector<MonoPiece> mono_overlapping(const Interval& iv) const;

    std::string name_;
    Interval domain_;
    std::vector<Piece1D> pieces_;
    std::vector<MonoPiece> mono_;
};

// ---- the planar family ----------------------------------------------------

/// Component k of F is weight*sin(x_other) + saw2(scale * x_k).
/// Defined and continuous on the whole plane.
class Map2D {
public:
    Map2D(double weight, double scale) : weight_(weight), scale_(scale) {}

    Point2 operator()(const Point2& p) const;
    double component(int k, const Point2& p) const; // k = 1 or 2

    double weight() const { return weight_; }
    double scale() const { return scale_; }

private:
    double weight_;
    double scale_;
};

/// Weight rule for the planar family: constant w, or n/(n+1).
struct WeightRule {
    enum class Kind { constant, n_over_n_plus_1 };
    Kind kind = Kind::constant;
    double value = 0.0;

    double at(long n) const {
        return kind == Kind::constant ? value
                                      : static_cast<double>(n) / static_cast<double>(n + 1);
    }
    bool operator==(const WeightRule&) const = default;
};

// ---- map sequences --------------------------------------------------------

/// The non-autonomous family f_0, f_1, ...: in 1D a periodic pattern over a
/// finite list of maps; in 2D the sine+sawtooth family with a weight rule.
class MapSequence {
public:
    static MapSequence periodic_1d(std::vector<Map1D> maps, std::vector<int> pattern);
    static MapSequence family_2d(WeightRule rule, double scale);

    int dimension() const;
    long period() const; // 1D pattern length; 1 for constant 2D weight, 0 otherwise
    bool periodic() const { return period() > 0; }

    const Map1D& map1(long n) const;
    int pattern_index(long n) const;
    Map2D map2(long n) const;
    const std::vector<Map1D>& maps1() const;
    const std::vector<int>& pattern() const;
    const WeightRule& weight_rule() const;
    double scale2() const;

    /// Errors: out_of_domain.
    double evaluate1(long n, double x) const;
    Point2 evaluate2(long n, const Point2& p) const;

    /// f_i^n(x) = f_{i+n-1} o ... o f_i (x); n = 0 is the identity.
    /// Errors: out_of_domain_at_step(k).
    double compose1(long i, long n_steps, double x) const;
    Point2 compose2(long i, long n_steps, const Point2& p) const;

private:
    struct Seq1D {
        std::vector<Map1D> maps;
        std::vector<int> pattern;
    };
    struct Seq2D {
        WeightRule rule;
        double scale;
    };
    explicit MapSequence(Seq1D s) : impl_(std::move(s)) {}
    explicit MapSequence(Seq2D s) : impl_(std::move(s)) {}
    std::variant<Seq1D, Seq2D> impl_;
};

// ---- sampled Lipschitz bands ----------------------------------------------

struct LipschitzBand {
    double lower;
    double upper;
};

/// Sampled inf and sup of |f(x)-f(y)| / |x-y| over distinct pairs drawn
/// within each connected component of the region. An estimate, not a
/// certificate. Errors: degenerate_region when no component admits two
/// distinct samples.
LipschitzBand lipschitz_band(const Map1D& map, const Region1D& region, int samples,
                             std::uint64_t seed);

/// Same in 2D (sup norm), pairs drawn within each box.
LipschitzBand lipschitz_band(const Map2D& map, std::span<const Box2> boxes, int samples,
                             std::uint64_t seed);

} // namespace symdyn::dynsys
