#ifndef RAMANPASS_QUADRATURE_HPP
#define RAMANPASS_QUADRATURE_HPP

#include <cmath>
#include <cstddef>

#include "ramanpass/errors.hpp"

namespace raman {

namespace detail {

inline double simpson_panel(double a, double fa, double b, double fb,
                            double fm) {
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

template <class F>
double adaptive_simpson_rec(F&& f, double a, double fa, double b, double fb,
                            double fm, double whole, double tol,
                            double tol_floor, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = simpson_panel(a, fa, m, fm, flm);
  const double right = simpson_panel(m, fm, b, fb, frm);
  const double delta = left + right - whole;
  // The floor keeps the halving rule from demanding sub-roundoff accuracy
  // on the deep panels next to a steep endpoint; at the depth cap the
  // extrapolated estimate is accepted (panels there are vanishingly thin).
  if (std::fabs(delta) <= 15.0 * std::max(tol, tol_floor) || depth <= 0)
    return left + right + delta / 15.0;
  return adaptive_simpson_rec(f, a, fa, m, fm, flm, left, 0.5 * tol,
                              tol_floor, depth - 1) +
         adaptive_simpson_rec(f, m, fm, b, fb, frm, right, 0.5 * tol,
                              tol_floor, depth - 1);
}

}  // namespace detail

// Adaptive Simpson integration of f over [a, b] to the given absolute
// tolerance. The integrand may be steep but must be evaluable on [a, b].
template <class F>
double adaptive_simpson(F&& f, double a, double b, double abs_tol,
                        int max_depth = 48) {
  if (a == b) return 0.0;
  const double fa = f(a);
  const double fb = f(b);
  const double fm = f(0.5 * (a + b));
  const double whole = detail::simpson_panel(a, fa, b, fb, fm);
  const double tol_floor =
      1e-16 * std::max(1.0, std::fabs(whole));
  return detail::adaptive_simpson_rec(f, a, fa, b, fb, fm, whole, abs_tol,
                                      tol_floor, max_depth);
}

// One-panel 3-point Gauss-Legendre rule; exact through degree 5. The sign
// of (b - a) is respected.
template <class F>
double gauss3(F&& f, double a, double b) {
  constexpr double kNode = 0.7745966692414834;  // sqrt(3/5)
  constexpr double kW0 = 8.0 / 9.0;
  constexpr double kW1 = 5.0 / 9.0;
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (a + b);
  return half * (kW1 * f(mid - half * kNode) + kW0 * f(mid) +
                 kW1 * f(mid + half * kNode));
}

}  // namespace raman

#endif  // RAMANPASS_QUADRATURE_HPP
