#include "emdenflow/shooting.hpp"

#include <cmath>
#include <stdexcept>

#include "detail/rootfind.hpp"
#include "emdenflow/errors.hpp"
#include "emdenflow/quadrature.hpp"

namespace emdenflow::shooting {

namespace {

void check_kw(double k, double w, const char* who) {
  if (!(k > 0.0) || !std::isfinite(k)) {
    throw std::domain_error(std::string(who) + ": k must be finite and > 0");
  }
  if (!(w >= 0.0) || !std::isfinite(w)) {
    throw std::domain_error(std::string(who) + ": w must be finite and >= 0");
  }
}

} // namespace

double matching_integral(double k, double w) {
  check_kw(k, w, "matching_integral");
  // s = exp(v^2 - W^2) maps the integral onto exponential-square form:
  //   sqrt(2/k) * exp(-W^2) * int_W^{V1} exp(v^2) dv,
  // which reduces to (1+k) D(V1) - D(W) after scaling both endpoints.
  const double W = w / std::sqrt(2.0 * k);
  const double V1 = std::sqrt(W * W + std::log1p(k));
  return std::sqrt(2.0 / k) * ((1.0 + k) * quad::dawson(V1) - quad::dawson(W));
}

double matching_integral_dw(double k, double w) {
  check_kw(k, w, "matching_integral_dw");
  const double s2k = std::sqrt(2.0 * k);
  const double W = w / s2k;
  const double V1 = std::sqrt(W * W + std::log1p(k));
  // d/dw = -w * int (w^2 + 2k ln s)^(-3/2) ds; the substituted form gives
  // w/W = sqrt(2k) exactly, so the endpoint term stays finite as w -> 0.
  const double c = 2.0 / (s2k * s2k * s2k);
  const double endpoint = s2k - w * (1.0 + k) / V1;
  const double tail = 2.0 * w * ((1.0 + k) * quad::dawson(V1) - quad::dawson(W));
  return -c * (endpoint + tail);
}

ShootingResult solve_w(double k, double tol) {
  if (!(k > 0.0) || !std::isfinite(k)) {
    throw std::domain_error("solve_w: k must be finite and > 0");
  }
  if (!(tol > 0.0)) throw std::domain_error("solve_w: tol must be positive");

  if (matching_integral(k, 0.0) <= 1.0) {
    throw convergence_error("solve_w: integral at w = 0 not above 1; monotonicity violated");
  }
  double lo = 0.0;
  double hi = k;
  int expand = 0;
  while (matching_integral(k, hi) > 1.0) {
    lo = hi;
    hi *= 2.0;
    if (++expand > 60) {
      throw convergence_error("solve_w: no sign change found; monotonicity violated");
    }
  }

  std::uint64_t iters = 0;
  const double w = detail::newton_bisect(
      [k](double x) { return matching_integral(k, x) - 1.0; },
      [k](double x) { return matching_integral_dw(k, x); }, lo, hi,
      0.5 * (lo + hi), tol, "solve_w", 200, &iters);
  return ShootingResult{k, w, matching_integral(k, w) - 1.0, iters};
}

} // namespace emdenflow::shooting
