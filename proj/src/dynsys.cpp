#include "symdyn/dynsys.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "symdyn/error.hpp"

namespace symdyn::dynsys {

double saw2(double t) {
    const double m = std::floor((t + 2.0) / 4.0);
    const long long mi = static_cast<long long>(m);
    const double sign = (mi & 1LL) ? -1.0 : 1.0;
    return sign * (t - 4.0 * m);
}

double eval_expr(const Expr& e, double t) {
    return std::visit(
        [&](const auto& k) -> double {
            using T = std::decay_t<decltype(k)>;
            if constexpr (std::is_same_v<T, ConstantExpr>) return k.c;
            else if constexpr (std::is_same_v<T, AffineExpr>) return k.p * t + k.q;
            else if constexpr (std::is_same_v<T, QuadraticExpr>) return k.c * t * (k.d - t);
            else return saw2(k.scale * t);
        },
        e);
}

namespace {

// Interior break points of the monotone decomposition of an expression.
std::vector<double> mono_breaks(const Expr& e, const Interval& dom) {
    std::vector<double> cuts;
    if (const auto* q = std::get_if<QuadraticExpr>(&e)) {
        const double v = q->d / 2.0;
        if (v > dom.lo && v < dom.hi) cuts.push_back(v);
    } else if (const auto* s = std::get_if<SawtoothExpr>(&e)) {
        // folds of saw2(scale*t) at scale*t = 4m + 2
        const double lo_u = s->scale * dom.lo, hi_u = s->scale * dom.hi;
        const double ulo = std::min(lo_u, hi_u), uhi = std::max(lo_u, hi_u);
        for (long long mm = static_cast<long long>(std::ceil((ulo - 2.0) / 4.0));; ++mm) {
            const double u = 4.0 * static_cast<double>(mm) + 2.0;
            if (u >= uhi) break;
            if (u > ulo) {
                const double t = u / s->scale;
                if (t > dom.lo && t < dom.hi) cuts.push_back(t);
            }
        }
        std::sort(cuts.begin(), cuts.end());
    }
    return cuts;
}

// |d/dt| extrema of an expression over a closed interval.
std::pair<double, double> abs_slope_range(const Expr& e, const Interval& iv) {
    return std::visit(
        [&](const auto& k) -> std::pair<double, double> {
            using T = std::decay_t<decltype(k)>;
            if constexpr (std::is_same_v<T, ConstantExpr>) {
                return {0.0, 0.0};
            } else if constexpr (std::is_same_v<T, AffineExpr>) {
                return {std::fabs(k.p), std::fabs(k.p)};
            } else if constexpr (std::is_same_v<T, QuadraticExpr>) {
                // f' = c (d - 2t), affine in t
                const double a = std::fabs(k.c * (k.d - 2.0 * iv.lo));
                const double b = std::fabs(k.c * (k.d - 2.0 * iv.hi));
                double lo = std::min(a, b), hi = std::max(a, b);
                const double v = k.d / 2.0;
                if (v >= iv.lo && v <= iv.hi) lo = 0.0;
                return {lo, hi};
            } else {
                return {std::fabs(k.scale), std::fabs(k.scale)};
            }
        },
        e);
}

// Inverse of the expression restricted to a monotone sub-domain. `tol`
// guards the quadratic discriminant against values a rounding error past
// the vertex.
double invert_monotone(const Expr& e, const Interval& sub, double y, double tol) {
    if (const auto* a = std::get_if<AffineExpr>(&e)) {
        return (y - a->q) / a->p;
    }
    if (const auto* q = std::get_if<QuadraticExpr>(&e)) {
        // c t (d - t) = y  =>  t = (d -+ sqrt(d^2 - 4 y / c)) / 2
        double disc = q->d * q->d - 4.0 * y / q->c;
        if (disc < 0.0) {
            if (disc < -tol) raise(errc::out_of_domain, "quadratic inversion past vertex");
            disc = 0.0;
        }
        const double s = std::sqrt(disc);
        const double vertex = q->d / 2.0;
        const bool left_branch = sub.midpoint() <= vertex;
        return left_branch ? (q->d - s) / 2.0 : (q->d + s) / 2.0;
    }
    if (const auto* sw = std::get_if<SawtoothExpr>(&e)) {
        // On the branch containing the sub-domain, saw2(u) = (-1)^m (u - 4m).
        const double umid = sw->scale * sub.midpoint();
        const double m = std::floor((umid + 2.0) / 4.0);
        const long long mi = static_cast<long long>(m);
        const double sign = (mi & 1LL) ? -1.0 : 1.0;
        const double u = 4.0 * m + sign * y;
        return u / sw->scale;
    }
    raise(errc::out_of_domain, "constant expression has no pointwise inverse");
}

} // namespace

// ---- Map1D ------------------------------------------------------------------

Map1D::Map1D(std::string name, Interval domain, std::vector<Piece1D> pieces)
    : name_(std::move(name)), domain_(domain), pieces_(std::move(pieces)) {
    if (!(domain_.lo < domain_.hi)) raise(errc::out_of_domain, "map domain must have lo < hi");
    if (pieces_.empty()) raise(errc::out_of_domain, "map needs at least one piece");
    std::sort(pieces_.begin(), pieces_.end(),
              [](const Piece1D& a, const Piece1D& b) { return a.domain.lo < b.domain.lo; });
    // Pieces must tile the declared domain exactly, each junction owned by
    // exactly one side.
    if (pieces_.front().domain.lo != domain_.lo || !pieces_.front().closed_lo)
        raise(errc::out_of_domain, name_ + ": first piece must start closed at the domain start");
    if (pieces_.back().domain.hi != domain_.hi || !pieces_.back().closed_hi)
        raise(errc::out_of_domain, name_ + ": last piece must end closed at the domain end");
    for (const auto& p : pieces_) {
        if (!(p.domain.lo < p.domain.hi))
            raise(errc::out_of_domain, name_ + ": degenerate piece");
        // degenerate parameters break closed-form inversion; a flat piece
        // must be declared constant
        if (const auto* a = std::get_if<AffineExpr>(&p.expr); a && a->p == 0.0)
            raise(errc::validation_error, name_ + ": affine piece with zero slope");
        if (const auto* q = std::get_if<QuadraticExpr>(&p.expr); q && q->c == 0.0)
            raise(errc::validation_error, name_ + ": quadratic piece with zero coefficient");
        if (const auto* s = std::get_if<SawtoothExpr>(&p.expr); s && s->scale == 0.0)
            raise(errc::validation_error, name_ + ": sawtooth piece with zero scale");
    }
    for (std::size_t k = 0; k + 1 < pieces_.size(); ++k) {
        const auto& a = pieces_[k];
        const auto& b = pieces_[k + 1];
        if (a.domain.hi != b.domain.lo)
            raise(errc::out_of_domain, name_ + ": pieces must tile the domain without gaps");
        if (a.closed_hi == b.closed_lo)
            raise(errc::out_of_domain, name_ + ": junction must be owned by exactly one piece");
    }
    for (std::size_t pi = 0; pi < pieces_.size(); ++pi) {
        const auto& p = pieces_[pi];
        double lo = p.domain.lo;
        for (double c : mono_breaks(p.expr, p.domain)) {
            mono_.push_back({Interval{lo, c}, pi});
            lo = c;
        }
        mono_.push_back({Interval{lo, p.domain.hi}, pi});
    }
}

double Map1D::operator()(double x) const {
    if (x < domain_.lo || x > domain_.hi)
        raise(errc::out_of_domain, name_ + ": " + std::to_string(x) + " outside declared domain");
    for (const auto& p : pieces_)
        if (p.owns(x)) return eval_expr(p.expr, x);
    raise(errc::out_of_domain, name_ + ": no piece owns " + std::to_string(x));
}

std::vector<Map1D::MonoPiece> Map1D::mono_overlapping(const Interval& iv) const {
    std::vector<MonoPiece> out;
    for (const auto& mp : mono_) {
        const double lo = std::max(iv.lo, mp.dom.lo);
        const double hi = std::min(iv.hi, mp.dom.hi);
        if (lo > hi) continue;
        // point overlaps matter only for a degenerate query; otherwise the
        // neighboring sub-piece covers that endpoint with a full interval
        if (lo == hi && iv.lo != iv.hi) continue;
        out.push_back({Interval{lo, hi}, mp.piece});
    }
    return out;
}

std::vector<Interval> Map1D::monotone_cuts(const Interval& iv) const {
    std::vector<Interval> out;
    for (const auto& mp : mono_overlapping(iv)) out.push_back(mp.dom);
    return out;
}

Region1D Map1D::image(const Interval& iv) const {
    if (iv.lo < domain_.lo || iv.hi > domain_.hi)
        raise(errc::out_of_domain, name_ + ": interval outside declared domain");
    std::vector<Interval> images;
    for (const auto& mp : mono_overlapping(iv)) {
        const double va = eval_expr(pieces_[mp.piece].expr, mp.dom.lo);
        const double vb = eval_expr(pieces_[mp.piece].expr, mp.dom.hi);
        images.push_back({std::min(va, vb), std::max(va, vb)});
    }
    return Region1D::from_intervals(std::move(images));
}

Region1D Map1D::image(const Region1D& region) const {
    std::vector<Interval> images;
    for (const auto& comp : region.components()) {
        const Region1D sub = image(comp);
        for (const auto& iv : sub.components()) images.push_back(iv);
    }
    return Region1D::from_intervals(std::move(images));
}

std::optional<Region1D> Map1D::preimage_in(const Interval& target, const Interval& within,
                                           double tol) const {
    std::vector<Interval> hits;
    for (const auto& mp : mono_overlapping(within)) {
        if (std::holds_alternative<ConstantExpr>(pieces_[mp.piece].expr)) {
            const double c = std::get<ConstantExpr>(pieces_[mp.piece].expr).c;
            if (c >= target.lo && c <= target.hi) hits.push_back(mp.dom);
            continue;
        }
        const double va = eval_expr(pieces_[mp.piece].expr, mp.dom.lo);
        const double vb = eval_expr(pieces_[mp.piece].expr, mp.dom.hi);
        const double vlo = std::min(va, vb), vhi = std::max(va, vb);
        const double ylo = std::max(target.lo, vlo);
        const double yhi = std::min(target.hi, vhi);
        if (ylo > yhi) continue;
        double t1 = invert_monotone(pieces_[mp.piece].expr, mp.dom, ylo, tol);
        double t2 = invert_monotone(pieces_[mp.piece].expr, mp.dom, yhi, tol);
        if (t1 > t2) std::swap(t1, t2);
        t1 = std::clamp(t1, mp.dom.lo, mp.dom.hi);
        t2 = std::clamp(t2, mp.dom.lo, mp.dom.hi);
        hits.push_back({t1, t2});
    }
    if (hits.empty()) return std::nullopt;
    return Region1D::from_intervals(std::move(hits));
}

std::optional<Region1D> Map1D::preimage_in(const Region1D& target, const Region1D& within,
                                           double tol) const {
    std::vector<Interval> hits;
    for (const auto& w : within.components())
        for (const auto& t : target.components())
            if (const auto r = preimage_in(t, w, tol))
                for (const auto& iv : r->components()) hits.push_back(iv);
    if (hits.empty()) return std::nullopt;
    return Region1D::from_intervals(std::move(hits));
}

double Map1D::min_abs_slope(const Interval& iv) const {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& mp : mono_overlapping(iv)) best = std::min(best, abs_slope_range(pieces_[mp.piece].expr, mp.dom).first);
    return best;
}

double Map1D::max_abs_slope(const Interval& iv) const {
    double best = 0.0;
    for (const auto& mp : mono_overlapping(iv)) best = std::max(best, abs_slope_range(pieces_[mp.piece].expr, mp.dom).second);
    return best;
}

// ---- Map2D ------------------------------------------------------------------

double Map2D::component(int k, const Point2& p) const {
    if (k == 1) return weight_ * std::sin(p.y) + saw2(scale_ * p.x);
    return weight_ * std::sin(p.x) + saw2(scale_ * p.y);
}

Point2 Map2D::operator()(const Point2& p) const { return {component(1, p), component(2, p)}; }

// ---- MapSequence ------------------------------------------------------------

MapSequence MapSequence::periodic_1d(std::vector<Map1D> maps, std::vector<int> pattern) {
    if (maps.empty()) raise(errc::out_of_domain, "map list must be nonempty");
    if (pattern.empty()) raise(errc::out_of_domain, "pattern must be nonempty");
    for (int idx : pattern)
        if (idx < 0 || idx >= static_cast<int>(maps.size()))
            raise(errc::out_of_domain, "pattern index outside map list");
    return MapSequence(Seq1D{std::move(maps), std::move(pattern)});
}

MapSequence MapSequence::family_2d(WeightRule rule, double scale) {
    return MapSequence(Seq2D{rule, scale});
}

int MapSequence::dimension() const { return std::holds_alternative<Seq1D>(impl_) ? 1 : 2; }

long MapSequence::period() const {
    if (const auto* s = std::get_if<Seq1D>(&impl_)) return static_cast<long>(s->pattern.size());
    const auto& s2 = std::get<Seq2D>(impl_);
    return s2.rule.kind == WeightRule::Kind::constant ? 1 : 0;
}

int MapSequence::pattern_index(long n) const {
    const auto& s = std::get<Seq1D>(impl_);
    return s.pattern[static_cast<std::size_t>(n % static_cast<long>(s.pattern.size()))];
}

const Map1D& MapSequence::map1(long n) const {
    const auto& s = std::get<Seq1D>(impl_);
    return s.maps[static_cast<std::size_t>(pattern_index(n))];
}

Map2D MapSequence::map2(long n) const {
    const auto& s = std::get<Seq2D>(impl_);
    return Map2D(s.rule.at(n), s.scale);
}

const std::vector<Map1D>& MapSequence::maps1() const { return std::get<Seq1D>(impl_).maps; }
const std::vector<int>& MapSequence::pattern() const { return std::get<Seq1D>(impl_).pattern; }
const WeightRule& MapSequence::weight_rule() const { return std::get<Seq2D>(impl_).rule; }
double MapSequence::scale2() const { return std::get<Seq2D>(impl_).scale; }

double MapSequence::evaluate1(long n, double x) const { return map1(n)(x); }
Point2 MapSequence::evaluate2(long n, const Point2& p) const { return map2(n)(p); }

double MapSequence::compose1(long i, long n_steps, double x) const {
    double v = x;
    for (long k = 0; k < n_steps; ++k) {
        try {
            v = evaluate1(i + k, v);
        } catch (const Error& e) {
            if (e.code() == errc::out_of_domain)
                raise(errc::out_of_domain_at_step, e.what(), k);
            throw;
        }
    }
    return v;
}

Point2 MapSequence::compose2(long i, long n_steps, const Point2& p) const {
    Point2 v = p;
    for (long k = 0; k < n_steps; ++k) v = evaluate2(i + k, v);
    return v;
}

// ---- Lipschitz bands ---------------------------------------------------------

LipschitzBand lipschitz_band(const Map1D& map, const Region1D& region, int samples,
                             std::uint64_t seed) {
    if (samples < 2) raise(errc::degenerate_region, "need at least 2 samples");
    std::mt19937_64 rng(seed);
    double lo = std::numeric_limits<double>::infinity();
    double hi = 0.0;
    bool any = false;
    for (const auto& comp : region.components()) {
        if (comp.width() == 0.0) continue;
        std::uniform_real_distribution<double> u(comp.lo, comp.hi);
        for (int k = 0; k < samples; ++k) {
            const double x = u(rng), y = u(rng);
            if (x == y) continue;
            const double r = std::fabs(map(x) - map(y)) / std::fabs(x - y);
            lo = std::min(lo, r);
            hi = std::max(hi, r);
            any = true;
        }
    }
    if (!any) raise(errc::degenerate_region, "no two distinct samples in any component");
    return {lo, hi};
}

LipschitzBand lipschitz_band(const Map2D& map, std::span<const Box2> boxes, int samples,
                             std::uint64_t seed) {
    if (samples < 2) raise(errc::degenerate_region, "need at least 2 samples");
    std::mt19937_64 rng(seed);
    double lo = std::numeric_limits<double>::infinity();
    double hi = 0.0;
    bool any = false;
    for (const auto& box : boxes) {
        std::uniform_real_distribution<double> ux(box.x.lo, box.x.hi);
        std::uniform_real_distribution<double> uy(box.y.lo, box.y.hi);
        for (int k = 0; k < samples; ++k) {
            const Point2 a{ux(rng), uy(rng)};
            const Point2 b{ux(rng), uy(rng)};
            const double den = sup_dist(a, b);
            if (den == 0.0) continue;
            const double r = sup_dist(map(a), map(b)) / den;
            lo = std::min(lo, r);
            hi = std::max(hi, r);
            any = true;
        }
    }
    if (!any) raise(errc::degenerate_region, "no two distinct samples in any box");
    return {lo, hi};
}

} // namespace symdyn::dynsys
