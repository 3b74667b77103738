#include "symdyn/region.hpp"

#include <algorithm>
#include <cmath>

#include "symdyn/error.hpp"

namespace symdyn {

double interval_distance(const Interval& a, const Interval& b) {
    if (a.lo > b.hi) return a.lo - b.hi;
    if (b.lo > a.hi) return b.lo - a.hi;
    return 0.0;
}

Region1D Region1D::from_interval(const Interval& iv) {
    return from_intervals({iv});
}

Region1D Region1D::from_point(double x) {
    return from_intervals({Interval{x, x}});
}

Region1D Region1D::from_intervals(std::vector<Interval> ivs, double merge_tol) {
    if (ivs.empty()) raise(errc::degenerate_region, "empty interval list");
    for (auto& iv : ivs) {
        if (!(iv.lo <= iv.hi)) raise(errc::degenerate_region, "interval with lo > hi");
    }
    std::sort(ivs.begin(), ivs.end(), [](const Interval& a, const Interval& b) {
        return a.lo < b.lo || (a.lo == b.lo && a.hi < b.hi);
    });
    std::vector<Interval> merged;
    merged.push_back(ivs.front());
    for (std::size_t k = 1; k < ivs.size(); ++k) {
        Interval& last = merged.back();
        if (ivs[k].lo <= last.hi + merge_tol) {
            last.hi = std::max(last.hi, ivs[k].hi);
        } else {
            merged.push_back(ivs[k]);
        }
    }
    return Region1D(std::move(merged));
}

double Region1D::total_length() const {
    double s = 0.0;
    for (const auto& p : parts_) s += p.width();
    return s;
}

bool Region1D::contains(double x, double tol) const {
    for (const auto& p : parts_) {
        if (x < p.lo - tol) return false;
        if (x <= p.hi + tol) return true;
    }
    return false;
}

bool Region1D::contains_region(const Region1D& other, double tol) const {
    return containment_margin(other) >= -tol;
}

double Region1D::containment_margin(const Region1D& other) const {
    // For each component T of `other`, the best slack over host components C
    // is min(T.lo - C.lo, C.hi - T.hi); take the worst component.
    double margin = std::numeric_limits<double>::infinity();
    for (const auto& t : other.parts_) {
        double best = -std::numeric_limits<double>::infinity();
        for (const auto& c : parts_) {
            best = std::max(best, std::min(t.lo - c.lo, c.hi - t.hi));
        }
        margin = std::min(margin, best);
    }
    return margin;
}

double Region1D::distance_to(double x) const {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& p : parts_) {
        if (x < p.lo) best = std::min(best, p.lo - x);
        else if (x > p.hi) best = std::min(best, x - p.hi);
        else return 0.0;
    }
    return best;
}

double Region1D::nearest_point(double x) const {
    double best = parts_.front().lo;
    double bestd = std::numeric_limits<double>::infinity();
    for (const auto& p : parts_) {
        double cand = std::clamp(x, p.lo, p.hi);
        double d = std::fabs(cand - x);
        if (d < bestd) {
            bestd = d;
            best = cand;
        }
    }
    return best;
}

std::optional<Region1D> intersect(const Region1D& a, const Interval& b) {
    std::vector<Interval> parts;
    for (const auto& p : a.components()) {
        const double lo = std::max(p.lo, b.lo);
        const double hi = std::min(p.hi, b.hi);
        if (lo <= hi) parts.push_back({lo, hi});
    }
    if (parts.empty()) return std::nullopt;
    return Region1D::from_intervals(std::move(parts));
}

double region_distance(const Region1D& a, const Region1D& b) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& pa : a.components())
        for (const auto& pb : b.components())
            best = std::min(best, interval_distance(pa, pb));
    return best;
}

double sup_dist(const Point2& a, const Point2& b) {
    return std::max(std::fabs(a.x - b.x), std::fabs(a.y - b.y));
}

Region2D Region2D::from_points(std::vector<Point2> pts) {
    if (pts.empty()) raise(errc::degenerate_region, "empty point set");
    return Region2D(std::move(pts));
}

} // namespace symdyn
