// Compact region values: canonical unions of closed intervals (1D) and
// finite point sets (2D). These are the carriers of the Hausdorff metric
// and of induced set-valued dynamics.
#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <vector>

namespace symdyn {

/// Gap below which adjacent intervals are merged during canonicalization.
/// Deliberately far below every analysis tolerance (geometric, decode).
inline constexpr double kMergeTol = 1e-14;

/// Closed interval [lo, hi]; degenerate points (lo == hi) allowed.
struct Interval {
    double lo = 0.0;
    double hi = 0.0;

    double width() const { return hi - lo; }
    double midpoint() const { return 0.5 * (lo + hi); }
    bool contains(double x, double tol = 0.0) const { return x >= lo - tol && x <= hi + tol; }
    bool contains(const Interval& other, double tol = 0.0) const {
        return other.lo >= lo - tol && other.hi <= hi + tol;
    }
};

/// Distance between two closed intervals (0 if they intersect).
double interval_distance(const Interval& a, const Interval& b);

/// Canonical finite union of pairwise disjoint closed intervals, sorted by
/// left endpoint, with every gap strictly larger than the merge tolerance.
/// Always nonempty.
class Region1D {
public:
    static Region1D from_interval(const Interval& iv);
    static Region1D from_point(double x);
    /// Canonicalizes: sorts, merges overlaps and gaps below merge_tol.
    /// Throws degenerate_region if the input list is empty.
    static Region1D from_intervals(std::vector<Interval> ivs, double merge_tol = kMergeTol);

    const std::vector<Interval>& components() const { return parts_; }
    std::size_t component_count() const { return parts_.size(); }

    double min() const { return parts_.front().lo; }
    double max() const { return parts_.back().hi; }
    Interval hull() const { return {min(), max()}; }
    /// Set diameter = hull width (1D).
    double diameter() const { return max() - min(); }
    /// Total measure of the union.
    double total_length() const;

    bool contains(double x, double tol = 0.0) const;
    /// Every component of `other` lies inside a single component of *this,
    /// with components inflated by tol.
    bool contains_region(const Region1D& other, double tol = 0.0) const;
    /// Containment slack: the largest e such that inflating every component
    /// of `other` by e keeps it inside *this. Negative when not contained
    /// (then equal to minus the directed excess).
    double containment_margin(const Region1D& other) const;

    double distance_to(double x) const;
    /// Point of the region closest to x (x itself when inside).
    double nearest_point(double x) const;

private:
    explicit Region1D(std::vector<Interval> parts) : parts_(std::move(parts)) {}
    std::vector<Interval> parts_;
};

/// min distance between two interval unions (0 when they intersect).
double region_distance(const Region1D& a, const Region1D& b);

/// Exact intersection; empty result encoded as nullopt (regions are nonempty).
std::optional<Region1D> intersect(const Region1D& a, const Interval& b);

struct Point2 {
    double x = 0.0;
    double y = 0.0;
};

/// sup-norm distance, the 2D metric used throughout.
double sup_dist(const Point2& a, const Point2& b);

/// Axis-aligned box, the 2D covering-set shape.
struct Box2 {
    Interval x;
    Interval y;

    bool contains(const Point2& p, double tol = 0.0) const {
        return x.contains(p.x, tol) && y.contains(p.y, tol);
    }
};

/// Finite nonempty point set; the 2D compact-region representation.
class Region2D {
public:
    static Region2D from_points(std::vector<Point2> pts);

    const std::vector<Point2>& points() const { return pts_; }
    std::size_t size() const { return pts_.size(); }

private:
    explicit Region2D(std::vector<Point2> pts) : pts_(std::move(pts)) {}
    std::vector<Point2> pts_;
};

} // namespace symdyn
