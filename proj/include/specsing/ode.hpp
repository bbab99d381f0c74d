#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <utility>
#include <vector>

#include "specsing/errors.hpp"

namespace specsing {

struct OdeOptions {
  double abs_tol = 1e-12;
  double rel_tol = 1e-12;
  double initial_step = 1e-4;
  double min_step = 1e-14;
  long max_steps = 10'000'000;
};

template <std::size_t N>
using ComplexState = std::array<std::complex<double>, N>;

template <std::size_t N>
struct OdeTrajectory {
  ComplexState<N> y{};
  // Sum of the accepted local error estimates, in the units of the state
  // normalised by the size of the initial data.
  double est_error = 0.0;
  long accepted = 0;
  long rejected = 0;
};

namespace detail {

// Dormand-Prince 5(4) tableau.
inline constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
inline constexpr double a21 = 1.0 / 5;
inline constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
inline constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
inline constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                        a54 = -212.0 / 729;
inline constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                        a64 = 49.0 / 176, a65 = -5103.0 / 18656;
inline constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                        b5 = -2187.0 / 6784, b6 = 11.0 / 84;
// b - b* (fifth minus fourth order weights).
inline constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                        e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

template <std::size_t N>
ComplexState<N> axpy(const ComplexState<N>& y, double h,
                     std::initializer_list<std::pair<double, const ComplexState<N>*>> terms) {
  ComplexState<N> out = y;
  for (const auto& [coef, k] : terms)
    for (std::size_t i = 0; i < N; ++i) out[i] += h * coef * (*k)[i];
  return out;
}

}  // namespace detail

// Integrates y' = rhs(x, y) from x0 to x1 with an embedded Dormand-Prince
// 5(4) pair. The error norm is scaled by the initial-data magnitude, so the
// step sequence (and the result, up to rounding) is linear in y0.
// `observe(x, y)` is called at every requested checkpoint, which must be
// sorted and lie in (x0, x1].
template <std::size_t N, typename Rhs, typename Observer>
OdeTrajectory<N> integrate_dopri5(Rhs&& rhs, double x0, double x1, const ComplexState<N>& y0,
                                  const OdeOptions& opt, const std::vector<double>& checkpoints,
                                  Observer&& observe) {
  using namespace detail;
  double y0_norm = 0.0;
  for (const auto& v : y0) y0_norm = std::max(y0_norm, std::abs(v));
  if (y0_norm == 0.0) y0_norm = 1.0;

  OdeTrajectory<N> out;
  ComplexState<N> y = y0;
  double x = x0;
  double h = std::min(opt.initial_step, x1 - x0);
  auto k1 = rhs(x, y);
  std::size_t next_checkpoint = 0;

  while (x < x1) {
    if (out.accepted + out.rejected >= opt.max_steps)
      throw IntegratorFailure("step budget exhausted", x, h);
    double target = x1;
    if (next_checkpoint < checkpoints.size()) target = std::min(target, checkpoints[next_checkpoint]);
    double step = h;
    bool hits_target = false;
    if (x + step >= target) {
      step = target - x;
      hits_target = true;
    }

    const auto k2 = rhs(x + c2 * step, axpy<N>(y, step, {{a21, &k1}}));
    const auto k3 = rhs(x + c3 * step, axpy<N>(y, step, {{a31, &k1}, {a32, &k2}}));
    const auto k4 = rhs(x + c4 * step, axpy<N>(y, step, {{a41, &k1}, {a42, &k2}, {a43, &k3}}));
    const auto k5 =
        rhs(x + c5 * step, axpy<N>(y, step, {{a51, &k1}, {a52, &k2}, {a53, &k3}, {a54, &k4}}));
    const auto k6 = rhs(x + step, axpy<N>(y, step, {{a61, &k1}, {a62, &k2}, {a63, &k3}, {a64, &k4},
                                              {a65, &k5}}));
    const auto y_new =
        axpy<N>(y, step, {{b1, &k1}, {b3, &k3}, {b4, &k4}, {b5, &k5}, {b6, &k6}});
    const auto k7 = rhs(x + step, y_new);

    double err = 0.0;
    double err_abs = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
      const auto delta = step * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] +
                              e7 * k7[i]);
      const double scale =
          opt.abs_tol * y0_norm + opt.rel_tol * std::max(std::abs(y[i]), std::abs(y_new[i]));
      err = std::max(err, std::abs(delta) / scale);
      err_abs = std::max(err_abs, std::abs(delta) / y0_norm);
    }

    if (err <= 1.0) {
      x = hits_target ? target : x + step;
      y = y_new;
      k1 = k7;
      out.est_error += err_abs;
      ++out.accepted;
      if (hits_target && next_checkpoint < checkpoints.size() &&
          target == checkpoints[next_checkpoint]) {
        observe(x, y);
        ++next_checkpoint;
      }
    } else {
      ++out.rejected;
    }
    const double factor = err == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(err, -0.2), 0.2, 5.0);
    // A step shortened to land on a checkpoint leaves the proposal unchanged.
    if (!(hits_target && err <= 1.0)) h = step * factor;
    if (h < opt.min_step && x < x1) throw IntegratorFailure("step size underflow", x, h);
  }
  out.y = y;
  return out;
}

}  // namespace specsing
