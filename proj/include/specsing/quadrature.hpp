#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <queue>
#include <vector>

namespace specsing {

struct QuadratureTolerance {
  double abs = 1e-13;
  double rel = 1e-12;
  int max_intervals = 500;
};

template <typename T>
struct QuadratureResult {
  T value{};
  double error = 0.0;
  int evaluations = 0;
  bool converged = false;
};

namespace detail {

// 15-point Kronrod nodes on [-1,1] (non-negative half) with the embedded
// 7-point Gauss rule on the odd-indexed nodes.
inline constexpr std::array<double, 8> kKronrodNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> kKronrodWeights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> kGaussWeights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

template <typename T>
double magnitude(const T& x) {
  return std::abs(x);
}

template <typename T>
struct Segment {
  double a, b;
  T value;
  double error;
  bool operator<(const Segment& other) const { return error < other.error; }
};

template <typename T, typename F>
Segment<T> kronrod15(F& fn, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const T fc = fn(center);
  T kronrod = fc * kKronrodWeights[7];
  T gauss = fc * kGaussWeights[3];
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kKronrodNodes[j];
    const T sum = fn(center - dx) + fn(center + dx);
    kronrod += sum * kKronrodWeights[j];
    if (j % 2 == 1) gauss += sum * kGaussWeights[j / 2];
  }
  return {a, b, kronrod * half, magnitude(T((kronrod - gauss) * half))};
}

}  // namespace detail

// Globally adaptive Gauss-Kronrod (7/15) integration of a real- or
// complex-valued integrand. The interval with the largest error estimate is
// bisected until the summed estimate drops below max(abs, rel * |I|).
template <typename T, typename F>
QuadratureResult<T> integrate_adaptive(F&& fn, double a, double b,
                                       const QuadratureTolerance& tol = {}) {
  std::priority_queue<detail::Segment<T>> pending;
  auto first = detail::kronrod15<T>(fn, a, b);
  QuadratureResult<T> out;
  out.evaluations = 15;
  T total = first.value;
  double total_error = first.error;
  pending.push(first);

  auto done = [&] {
    return total_error <= std::max(tol.abs, tol.rel * detail::magnitude(total));
  };
  while (!done() && static_cast<int>(pending.size()) < tol.max_intervals) {
    auto worst = pending.top();
    pending.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    auto left = detail::kronrod15<T>(fn, worst.a, mid);
    auto right = detail::kronrod15<T>(fn, mid, worst.b);
    out.evaluations += 30;
    total += left.value + right.value - worst.value;
    total_error += left.error + right.error - worst.error;
    pending.push(left);
    pending.push(right);
  }

  // Re-sum to shed the drift of the running updates.
  total = T{};
  total_error = 0.0;
  std::vector<detail::Segment<T>> parts;
  parts.reserve(pending.size());
  while (!pending.empty()) {
    parts.push_back(pending.top());
    pending.pop();
  }
  std::sort(parts.begin(), parts.end(),
            [](const auto& l, const auto& r) { return l.a < r.a; });
  for (const auto& p : parts) {
    total += p.value;
    total_error += p.error;
  }
  out.value = total;
  out.error = total_error;
  out.converged = done();
  return out;
}

}  // namespace specsing
