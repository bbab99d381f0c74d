#pragma once

#include <cmath>

#include "specsing/errors.hpp"

namespace specsing {

// Root of a continuous scalar function on [lo, hi] with a sign change,
// halving until the bracket is narrower than tol. Returns the midpoint.
template <typename F>
double bisect_root(F&& fn, double lo, double hi, double tol) {
  double flo = fn(lo);
  const double fhi = fn(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if ((flo > 0.0) == (fhi > 0.0)) throw InvalidInput("bisection bracket has no sign change");
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    const double fmid = fn(mid);
    if (fmid == 0.0) return mid;
    if ((fmid > 0.0) == (flo > 0.0)) {
      lo = mid;
      flo = fmid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace specsing
