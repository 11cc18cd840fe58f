#pragma once

#include <cmath>
#include <cstdint>

#include "hygreedy/common.hpp"

namespace hygreedy {

namespace detail {

inline double simpson(double a, double fa, double b, double fb, double fm) {
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

template <class F>
double adaptive_simpson_rec(const F& f, double a, double fa, double b, double fb,
                            double m, double fm, double whole, double tol,
                            int depth, std::int64_t& evals, std::int64_t eval_cap) {
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    evals += 2;
    if (evals > eval_cap)
        throw ResourceError("adaptive quadrature exceeded subdivision cap");
    const double left = simpson(a, fa, m, fm, flm);
    const double right = simpson(m, fm, b, fb, frm);
    const double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol)
        return left + right + delta / 15.0;
    return adaptive_simpson_rec(f, a, fa, m, fm, lm, flm, left, 0.5 * tol, depth - 1, evals, eval_cap) +
           adaptive_simpson_rec(f, m, fm, b, fb, rm, frm, right, 0.5 * tol, depth - 1, evals, eval_cap);
}

}  // namespace detail

// Adaptive Simpson quadrature of f over [a, b]. The tolerance is applied as
// rel_tol * (scale of a coarse estimate) + abs_tol. Throws ResourceError if
// the subdivision budget is exhausted before convergence.
template <class F>
double integrate(const F& f, double a, double b, double rel_tol = 1e-9,
                 double abs_tol = 1e-300, int max_depth = 48,
                 std::int64_t eval_cap = 1'000'000) {
    if (a == b) return 0.0;
    const double fa = f(a);
    const double fb = f(b);
    const double m = 0.5 * (a + b);
    const double fm = f(m);
    const double whole = detail::simpson(a, fa, b, fb, fm);
    const double tol = std::max(std::abs(whole) * rel_tol, abs_tol);
    std::int64_t evals = 3;
    return detail::adaptive_simpson_rec(f, a, fa, b, fb, m, fm, whole, tol,
                                        max_depth, evals, eval_cap);
}

}  // namespace hygreedy
