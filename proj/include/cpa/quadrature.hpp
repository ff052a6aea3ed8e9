#pragma once

#include <cmath>
#include <functional>

#include "cpa/errors.hpp"

namespace cpa {

namespace detail {

template <typename F>
double adaptive_simpson_step(const F& f, double a, double b, double fa, double fm,
                             double fb, double whole, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol)
        return left + right + delta / 15.0;
    return adaptive_simpson_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           adaptive_simpson_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

}  // namespace detail

// Adaptive Simpson quadrature of f over [a, b].
template <typename F>
double integrate(const F& f, double a, double b, double tol = 1e-12,
                 int max_depth = 48) {
    if (!(b >= a)) throw ValidationError("integration bounds must satisfy a <= b");
    if (a == b) return 0.0;
    const double m = 0.5 * (a + b);
    const double fa = f(a), fm = f(m), fb = f(b);
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return detail::adaptive_simpson_step(f, a, b, fa, fm, fb, whole, tol, max_depth);
}

// Smallest x in [lo, hi] where the predicate flips false -> true.
// pred must be monotone on the interval and pred(hi) true.
template <typename P>
double bisect_threshold(const P& pred, double lo, double hi, double tol = 1e-12) {
    if (pred(lo)) return lo;
    if (!pred(hi)) throw ValidationError("bisection bracket does not contain a threshold");
    while (hi - lo > tol) {
        double mid = 0.5 * (lo + hi);
        (pred(mid) ? hi : lo) = mid;
    }
    return hi;
}

}  // namespace cpa
