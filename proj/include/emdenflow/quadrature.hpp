#pragma once

#include <cstdint>
#include <functional>

namespace emdenflow::quad {

/// Value returned by the adaptive engine.
struct QuadratureResult {
  double value = 0.0;
  double abs_error_estimate = 0.0;  ///< >= 0, same units as value
  std::uint64_t evaluations = 1;    ///< integrand evaluations, >= 1
};

/// Dawson integral D(y) = exp(-y^2) * integral_0^y exp(u^2) du, for y >= 0.
/// Maclaurin series of the integral below the validated switchover,
/// continued fraction above it.
double dawson(double y);

/// I(y) = integral_0^y exp(u^2) du. Rejects y < 0 and y^2 > 700 (the value
/// would not be representable in double precision).
double exp_sq_integral(double y);

/// integral_lo^hi exp(v^2) dv for 0 <= lo <= hi, evaluated so that the
/// result keeps full relative accuracy even when exp(hi^2) dwarfs
/// exp(lo^2). Narrow intervals go through a single quadrature panel
/// instead of a cancelling difference.
double exp_sq_integral_between(double lo, double hi);

using Integrand = std::function<double(double)>;

/// Globally adaptive Gauss-Kronrod 15-point integration with bisection.
/// Integrable endpoint singularities are handled by refinement toward the
/// endpoint (nodes are interior). Throws convergence_error when the
/// subdivision budget is exhausted before the tolerance is met.
QuadratureResult adaptive_quad(const Integrand& f, double lo, double hi, double tol);

} // namespace emdenflow::quad
