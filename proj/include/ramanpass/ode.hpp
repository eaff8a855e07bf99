#ifndef RAMANPASS_ODE_HPP
#define RAMANPASS_ODE_HPP

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <functional>
#include <string>

#include "ramanpass/errors.hpp"

// Embedded Dormand-Prince 5(4) integrator with FSAL, PI-free standard step
// control, and cubic Hermite dense output between accepted steps. The
// right-hand side may throw EvalDomainError / SingularityError; such steps
// are rejected and retried with a smaller h, so integration can approach an
// envelope domain boundary from inside.
namespace raman::ode {

template <int N>
using Vec = Eigen::Matrix<double, N, 1>;

struct Options {
  double rtol = 1e-10;
  double atol = 1e-12;
  double max_step = 0.0;  // 0 means unrestricted
};

template <int N>
struct Step {
  double t0 = 0.0, t1 = 0.0;
  Vec<N> y0, y1;
  // Shampine continuous-extension coefficients; local error O(h^5), so
  // interpolated rows carry integration-level accuracy even where the
  // Hamiltonian is large.
  Vec<N> rcont2, rcont3, rcont4, rcont5;

  Vec<N> at(double t) const {
    const double h = t1 - t0;
    if (h == 0.0) return y1;
    const double s = (t - t0) / h;
    const double s1 = 1.0 - s;
    return y0 + s * (rcont2 + s1 * (rcont3 + s * (rcont4 + s1 * rcont5)));
  }
};

enum class Control { Continue, Stop };

// Integrates y' = rhs(t, y) from (t0, y0) to t_end (t_end >= t0). The
// callback sees every accepted step and may stop the run early. Returns the
// state at t_end (or at the stopping step's end).
template <int N, class Rhs, class Callback>
Vec<N> integrate(Rhs&& rhs, double t0, const Vec<N>& y0, double t_end,
                 const Options& opt, Callback&& on_step) {
  using V = Vec<N>;

  // Dormand-Prince coefficients.
  constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
  constexpr double a21 = 1.0 / 5;
  constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                   a53 = 64448.0 / 6561, a54 = -212.0 / 729;
  constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33,
                   a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                   a65 = -5103.0 / 18656;
  constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                   b5 = -2187.0 / 6784, b6 = 11.0 / 84;
  // y5 - y4 error weights.
  constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                   e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
  // Continuous-extension weights (Hairer/Shampine).
  constexpr double d1 = -12715105075.0 / 11282082432.0,
                   d3 = 87487479700.0 / 32700410799.0,
                   d4 = -10690763975.0 / 1880347072.0,
                   d5 = 701980252875.0 / 199316789632.0,
                   d6 = -1453857185.0 / 822651844.0,
                   d7 = 69997945.0 / 29380423.0;

  if (t_end < t0)
    throw IntegrationError("integration interval is reversed");

  double t = t0;
  V y = y0;
  V f = rhs(t, y);

  if (t_end == t0) {
    Step<N> s;
    s.t0 = s.t1 = t0;
    s.y0 = s.y1 = y;
    s.rcont2 = s.rcont3 = s.rcont4 = s.rcont5 = V::Zero();
    on_step(s);
    return y;
  }

  const double span = t_end - t0;
  double h = 1e-4 * span;
  {
    // Crude automatic initial step from the first derivative scale.
    const double dy = f.cwiseAbs().maxCoeff();
    if (dy > 0.0) h = std::min(h, 1e-2 / dy);
  }
  if (opt.max_step > 0.0) h = std::min(h, opt.max_step);
  h = std::min(h, span);

  const double h_floor = 1e-14 * std::max(1.0, std::fabs(t_end));

  while (t < t_end) {
    const double remaining = t_end - t;
    bool final_step = false;
    if (h >= remaining) {
      h = remaining;
      final_step = true;
    } else if (h < h_floor) {
      throw IntegrationError(
          "step size underflow near t = " + std::to_string(t) +
          " (singular or non-evaluable right-hand side)");
    }

    V k1 = f, k2, k3, k4, k5, k6, k7, y1;
    bool evaluable = true;
    try {
      k2 = rhs(t + c2 * h, y + h * (a21 * k1));
      k3 = rhs(t + c3 * h, y + h * (a31 * k1 + a32 * k2));
      k4 = rhs(t + c4 * h, y + h * (a41 * k1 + a42 * k2 + a43 * k3));
      k5 = rhs(t + c5 * h,
               y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
      k6 = rhs(t + h,
               y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
      y1 = y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
      k7 = rhs(t + h, y1);  // FSAL
    } catch (const NumericalError&) {
      evaluable = false;
    }
    if (!evaluable) {
      h *= 0.25;
      continue;
    }

    const V err_vec =
        h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
    double err = 0.0;
    for (int i = 0; i < N; ++i) {
      const double scale =
          opt.atol +
          opt.rtol * std::max(std::fabs(y[i]), std::fabs(y1[i]));
      const double q = err_vec[i] / scale;
      err += q * q;
    }
    err = std::sqrt(err / N);

    if (err <= 1.0) {
      const double t1 = final_step ? t_end : t + h;
      Step<N> s;
      s.t0 = t;
      s.t1 = t1;
      s.y0 = y;
      s.y1 = y1;
      s.rcont2 = y1 - y;
      s.rcont3 = h * k1 - s.rcont2;
      s.rcont4 = s.rcont2 - h * k7 - s.rcont3;
      s.rcont5 = h * (d1 * k1 + d3 * k3 + d4 * k4 + d5 * k5 + d6 * k6 +
                      d7 * k7);
      t = t1;
      y = y1;
      f = k7;
      const double grow =
          (err == 0.0) ? 5.0 : std::clamp(0.9 * std::pow(err, -0.2), 0.2, 5.0);
      h *= grow;
      if (opt.max_step > 0.0) h = std::min(h, opt.max_step);
      if (on_step(s) == Control::Stop) return y;
    } else {
      h *= std::clamp(0.9 * std::pow(err, -0.2), 0.1, 0.9);
    }
  }
  return y;
}

template <int N, class Rhs>
Vec<N> integrate(Rhs&& rhs, double t0, const Vec<N>& y0, double t_end,
                 const Options& opt) {
  return integrate<N>(std::forward<Rhs>(rhs), t0, y0, t_end, opt,
                      [](const Step<N>&) { return Control::Continue; });
}

// Locates g(t, step.at(t)) == 0 inside an accepted step by bisection on the
// dense output. Assumes g(t0) and g(t1) bracket a root.
template <int N, class G>
double locate_zero(const Step<N>& step, G&& g, double t_tol) {
  double lo = step.t0, hi = step.t1;
  double glo = g(lo, step.y0);
  for (int iter = 0; iter < 200 && (hi - lo) > t_tol; ++iter) {
    const double mid = 0.5 * (lo + hi);
    const double gm = g(mid, step.at(mid));
    if ((glo <= 0.0) == (gm <= 0.0)) {
      lo = mid;
      glo = gm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace raman::ode

#endif  // RAMANPASS_ODE_HPP
