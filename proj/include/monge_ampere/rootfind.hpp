#pragma once

#include "errors.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>

namespace ma {

/// Up to three real roots in ascending order.
class RealRoots {
public:
    RealRoots() = default;

    void push(double r) {
        roots_[count_++] = r;
        std::sort(roots_.begin(), roots_.begin() + count_);
    }

    std::size_t size() const { return count_; }
    bool empty() const { return count_ == 0; }
    double operator[](std::size_t i) const { return roots_[i]; }
    const double* begin() const { return roots_.data(); }
    const double* end() const { return roots_.data() + count_; }

private:
    std::array<double, 3> roots_{};
    std::size_t count_ = 0;
};

namespace detail {

inline double newton_polish_cubic(double a2, double a1, double a0, double x) {
    // monic x^3 + a2 x^2 + a1 x + a0
    const double p = ((x + a2) * x + a1) * x + a0;
    const double dp = (3.0 * x + 2.0 * a2) * x + a1;
    if (dp == 0.0 || !std::isfinite(dp)) return x;
    const double next = x - p / dp;
    // keep the step only if it does not make things worse
    const double pn = ((next + a2) * next + a1) * next + a0;
    return std::abs(pn) <= std::abs(p) ? next : x;
}

} // namespace detail

/// All real roots of c3 v^3 + c2 v^2 + c1 v + c0, ascending.
///
/// Normalizes to monic, shifts to the depressed form t^3 + p t + q, then takes the
/// trigonometric branch when three real roots exist and Cardano's formula otherwise.
/// Every root gets one Newton polish on the monic polynomial. A discriminant within
/// 1e-13 of the polynomial's scale is treated as the three-root (clustered) branch.
inline RealRoots cubic_real_roots(double c3, double c2, double c1, double c0) {
    if (c3 == 0.0) throw DomainError("cubic_real_roots needs a nonzero leading coefficient");
    const double a2 = c2 / c3, a1 = c1 / c3, a0 = c0 / c3;

    const double shift = a2 / 3.0;
    const double p = a1 - a2 * shift;
    const double q = a0 - shift * a1 + 2.0 * shift * shift * shift;

    // Discriminant of t^3 + p t + q: (q/2)^2 + (p/3)^3 (positive -> one real root)
    const double hq = 0.5 * q, tp = p / 3.0;
    const double disc = hq * hq + tp * tp * tp;
    const double scale = hq * hq + std::abs(tp * tp * tp);

    RealRoots out;
    if (disc > 1e-13 * scale) {
        const double sq = std::sqrt(disc);
        const double big = -std::copysign(std::cbrt(std::abs(hq) + sq), hq);
        const double t = big + (big != 0.0 ? -tp / big : 0.0);
        out.push(detail::newton_polish_cubic(a2, a1, a0, t - shift));
    } else if (tp >= 0.0) {
        // p == 0 (up to rounding) forces q == 0: triple root
        out.push(detail::newton_polish_cubic(a2, a1, a0, -shift));
        out.push(detail::newton_polish_cubic(a2, a1, a0, -shift));
        out.push(detail::newton_polish_cubic(a2, a1, a0, -shift));
    } else {
        const double m = 2.0 * std::sqrt(-tp);
        const double arg = std::clamp(hq / (-tp * std::sqrt(-tp)), -1.0, 1.0);
        const double theta = std::acos(-arg) / 3.0;
        for (int k = 0; k < 3; ++k) {
            const double t = m * std::cos(theta - 2.0 * std::numbers::pi * k / 3.0);
            out.push(detail::newton_polish_cubic(a2, a1, a0, t - shift));
        }
    }
    return out;
}

/// Real roots of q2 v^2 + q1 v + q0, ascending. A negative discriminant yields an
/// empty set; the caller decides what that means.
inline RealRoots quadratic_real_roots(double q2, double q1, double q0) {
    if (q2 == 0.0) throw DomainError("quadratic_real_roots needs a nonzero leading coefficient");
    const double disc = q1 * q1 - 4.0 * q2 * q0;
    RealRoots out;
    if (disc < 0.0) return out;
    const double sq = std::sqrt(disc);
    // no cancellation between -q1 and sqrt(disc)
    const double w = -0.5 * (q1 + std::copysign(sq, q1));
    if (w == 0.0) {
        out.push(0.0);
        out.push(0.0);
        return out;
    }
    out.push(w / q2);
    out.push(q0 / w);
    return out;
}

/// The smallest real root: the one giving a convex (positive-definite) discrete Hessian.
inline double select_convex_root(const RealRoots& roots) {
    if (roots.empty()) throw DegenerateNodeError("no real root available at node (loss of ellipticity)");
    return roots[0];
}

} // namespace ma
