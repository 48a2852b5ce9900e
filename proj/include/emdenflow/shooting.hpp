#pragma once

#include <cstdint>

namespace emdenflow::shooting {

/// Result of the slope-matching solve: w such that f(0)=1, f'(0)=w gives f(1)=1+k.
struct ShootingResult {
  double k;
  double w;               ///< in (0, k]
  double residual;        ///< matching_integral(k, w) - 1
  std::uint64_t iterations;
};

/// integral_1^{1+k} (w^2 + 2k ln s)^(-1/2) ds, evaluated through the
/// exponential-square substitution (the s = exp(v^2 - W^2) change of
/// variables removes the s = 1 singularity for every w >= 0).
/// Strictly decreasing in w, value > sqrt(2) at w = 0.
double matching_integral(double k, double w);

/// d/dw of matching_integral, by differentiation under the integral sign.
double matching_integral_dw(double k, double w);

/// Unique root of matching_integral(k, .) = 1 on (0, k], found by bracketed
/// bisection refined with Newton steps.
ShootingResult solve_w(double k, double tol = 1e-12);

} // namespace emdenflow::shooting
