#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <string>

#include "emdenflow/errors.hpp"

namespace emdenflow::detail {

// Bisection on a bracketing interval [lo, hi] with f(lo) and f(hi) of
// opposite sign. Runs until the interval collapses to machine resolution.
template <class F>
double bisect(F&& f, double lo, double hi, int max_iter = 200) {
  double flo = f(lo);
  if (flo == 0.0) return lo;
  for (int i = 0; i < max_iter; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) return mid;
    const double fm = f(mid);
    if (fm == 0.0) return mid;
    if ((fm < 0.0) == (flo < 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

// Newton iteration safeguarded by a sign-preserving bracket. Falls back to a
// bisection step whenever the Newton step leaves the bracket or the
// derivative is unusable. Stops on |f| <= ftol.
template <class F, class DF>
double newton_bisect(F&& f, DF&& df, double lo, double hi, double x0,
                     double ftol, const char* who, int max_iter = 200,
                     std::uint64_t* iterations = nullptr) {
  double flo = f(lo);
  double x = x0;
  if (!(x > lo && x < hi)) x = 0.5 * (lo + hi);
  for (int i = 0; i < max_iter; ++i) {
    const double fx = f(x);
    if (iterations) *iterations = static_cast<std::uint64_t>(i + 1);
    if (std::abs(fx) <= ftol) return x;
    if ((fx < 0.0) == (flo < 0.0)) {
      lo = x;
      flo = fx;
    } else {
      hi = x;
    }
    const double d = df(x);
    double next = x - fx / d;
    if (!std::isfinite(next) || next <= lo || next >= hi) {
      next = 0.5 * (lo + hi);
    }
    if (next == x) return x;
    x = next;
  }
  throw convergence_error(std::string(who) + ": iteration budget exhausted");
}

// Golden-section minimization of a unimodal function on [lo, hi].
template <class F>
double golden_min(F&& f, double lo, double hi, double xtol) {
  const double invphi = 0.6180339887498949;
  double a = lo, b = hi;
  double c = b - invphi * (b - a);
  double d = a + invphi * (b - a);
  double fc = f(c), fd = f(d);
  while (b - a > xtol) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - invphi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + invphi * (b - a);
      fd = f(d);
    }
  }
  return 0.5 * (a + b);
}

} // namespace emdenflow::detail
