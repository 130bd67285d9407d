#ifndef CHAC_GEOMETRY_HPP
#define CHAC_GEOMETRY_HPP

#include "chac/errors.hpp"

#include <Eigen/Dense>

#include <initializer_list>
#include <limits>
#include <vector>

namespace chac {

using Vec = Eigen::VectorXd;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// A closed interval over the extended reals. lo = -inf / hi = +inf encode
/// unbounded ends; a singular interval has lo == hi.
struct Interval {
    double lo;
    double hi;

    bool singular() const { return lo == hi; }
    bool operator==(const Interval& o) const { return lo == o.lo && hi == o.hi; }
};

/// An n-dimensional axis-aligned rectangle (product of closed intervals).
/// Used for mode flows and edge guards. All comparisons are exact on binary
/// floating point; bounds only ever come from inputs or exact min/max.
class Rect {
public:
    Rect(Eigen::ArrayXd lo, Eigen::ArrayXd hi) : lo_(std::move(lo)), hi_(std::move(hi)) {
        validate();
    }

    Rect(std::initializer_list<Interval> dims)
        : lo_(static_cast<Eigen::Index>(dims.size())), hi_(static_cast<Eigen::Index>(dims.size())) {
        Eigen::Index d = 0;
        for (const Interval& iv : dims) {
            lo_[d] = iv.lo;
            hi_[d] = iv.hi;
            ++d;
        }
        validate();
    }

    /// The unconstrained rectangle (-inf, inf)^n: the vacuous guard and the
    /// neutral element of box_hull-with-anything.
    static Rect full(Eigen::Index n) {
        if (n < 1)
            throw input_error("Rect::full: dimension must be at least 1");
        return Rect(Eigen::ArrayXd::Constant(n, -kInf), Eigen::ArrayXd::Constant(n, kInf));
    }

    /// The degenerate rectangle {x}.
    static Rect singular(const Vec& x) {
        if (x.size() < 1)
            throw input_error("Rect::singular: dimension must be at least 1");
        return Rect(x.array(), x.array());
    }

    Eigen::Index dim() const { return lo_.size(); }
    const Eigen::ArrayXd& lo() const { return lo_; }
    const Eigen::ArrayXd& hi() const { return hi_; }
    Interval at(Eigen::Index d) const { return Interval{lo_[d], hi_[d]}; }

    bool is_singular() const { return (lo_ == hi_).all(); }
    bool is_bounded() const { return lo_.isFinite().all() && hi_.isFinite().all(); }

    bool operator==(const Rect& o) const {
        return lo_.size() == o.lo_.size() && (lo_ == o.lo_).all() && (hi_ == o.hi_).all();
    }
    bool operator!=(const Rect& o) const { return !(*this == o); }

private:
    void validate() const {
        if (lo_.size() != hi_.size())
            throw input_error("Rect: lower/upper bound dimensions differ");
        if (lo_.size() < 1)
            throw input_error("Rect: dimension must be at least 1");
        if ((lo_ > hi_).any())
            throw input_error("Rect: lower bound exceeds upper bound");
    }

    Eigen::ArrayXd lo_;
    Eigen::ArrayXd hi_;
};

inline void check_same_dim(const Rect& r, const Vec& x, const char* who) {
    if (r.dim() != x.size())
        throw input_error(std::string(who) + ": point/rectangle dimension mismatch");
}

inline void check_same_dim(const Rect& a, const Rect& b, const char* who) {
    if (a.dim() != b.dim())
        throw input_error(std::string(who) + ": rectangle dimension mismatch");
}

/// x in r, with closed bounds.
inline bool contains_point(const Rect& r, const Vec& x) {
    check_same_dim(r, x, "contains_point");
    return (x.array() >= r.lo()).all() && (x.array() <= r.hi()).all();
}

/// Component-wise bounding box of two rectangles. This is a superset of the
/// true convex hull, which keeps the result in the multi-rectangular class.
inline Rect box_hull(const Rect& a, const Rect& b) {
    check_same_dim(a, b, "box_hull");
    return Rect(a.lo().min(b.lo()), a.hi().max(b.hi()));
}

/// Bounding box of a nonempty set of rectangles; identity on singletons.
inline Rect box_hull(const std::vector<Rect>& rs) {
    if (rs.empty())
        throw input_error("box_hull: empty input");
    Rect acc = rs.front();
    for (std::size_t i = 1; i < rs.size(); ++i)
        acc = box_hull(acc, rs[i]);
    return acc;
}

/// x + delta * r, the set of points reachable by following some f in r for
/// time delta. delta = 0 collapses to the singular rectangle at x.
inline Rect scale_translate(const Rect& r, const Vec& x, double delta) {
    check_same_dim(r, x, "scale_translate");
    if (delta < 0)
        throw input_error("scale_translate: negative delay");
    if (delta == 0)
        return Rect::singular(x);  // avoids 0 * inf
    return Rect(x.array() + delta * r.lo(), x.array() + delta * r.hi());
}

/// a included in b, component-wise.
inline bool subset(const Rect& a, const Rect& b) {
    check_same_dim(a, b, "subset");
    return (b.lo() <= a.lo()).all() && (a.hi() <= b.hi()).all();
}

/// Widen each interval by eps on both ends (eps >= 0). Used only by the
/// optional membership tolerance; all other checks stay exact.
inline Rect inflate(const Rect& r, double eps) {
    if (eps < 0)
        throw input_error("inflate: negative tolerance");
    if (eps == 0)
        return r;
    return Rect(r.lo() - eps, r.hi() + eps);
}

} // namespace chac

#endif
