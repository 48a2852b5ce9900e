#include "emdenflow/continuous.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "detail/rootfind.hpp"
#include "emdenflow/errors.hpp"
#include "emdenflow/quadrature.hpp"

namespace emdenflow::continuous {

namespace {

constexpr double kSqrt2 = std::numbers::sqrt2;

double log1p_sq(double z) {
  // ln(1 + z^2) without overflowing z^2
  if (z > 1e150) return 2.0 * std::log(z);
  return std::log1p(z * z);
}

} // namespace

ModelParams::ModelParams(double k_, double y_, double w_) : k(k_), y(y_), w(w_) {
  if (!(k > 0.0) || !(y > 0.0) || !(w >= 0.0) || !std::isfinite(k) ||
      !std::isfinite(y) || !std::isfinite(w)) {
    throw std::domain_error("ModelParams: need k > 0, y > 0, w >= 0");
  }
}

double solve_U(double x, double tol) {
  if (!std::isfinite(x) || x < 0.0) {
    throw std::domain_error("solve_U: x must be finite and >= 0");
  }
  if (!(tol > 0.0)) throw std::domain_error("solve_U: tol must be positive");
  if (x == 0.0) return 0.0;
  if (x >= 1e300) throw std::overflow_error("solve_U: x out of double range");

  const double X = x / kSqrt2;
  const double z = x * kSqrt2;
  // The bracket end from the concavity argument, clamped inside the region
  // where exp(u^2) stays representable; the root never reaches the clamp
  // for any x below the overflow guard.
  const double hi = std::min(1.0 + std::sqrt(log1p_sq(z)), 26.45);
  // one step of the fixed point U = sqrt(ln(1 + z U)) from U = 1
  const double guess = std::sqrt(std::log1p(z));

  const double ftol = tol * std::max(1.0, X);
  return detail::newton_bisect(
      [X](double u) { return quad::exp_sq_integral(u) - X; },
      [](double u) { return std::exp(u * u); }, 0.0, hi,
      std::min(guess, hi * 0.999), ftol, "solve_U");
}

double f0(double x) {
  const double u = solve_U(x);
  return std::exp(u * u);
}

TransformConstants transform_constants(const ModelParams& p) {
  const double W = p.w / std::sqrt(2.0 * p.k);
  const double W2 = W * W;
  if (W2 > 700.0) {
    throw std::overflow_error("transform_constants: exp(w^2/2k) exceeds double range");
  }
  TransformConstants tc;
  tc.a = kSqrt2 * quad::exp_sq_integral(W);
  tc.b = std::sqrt(p.k) / p.y * std::exp(W2);
  tc.c = p.y * std::exp(-W2);
  return tc;
}

double f_eval(double t, const ModelParams& p) {
  if (!(t >= 0.0)) throw std::domain_error("f_eval: t must be >= 0");
  const TransformConstants tc = transform_constants(p);
  return tc.c * f0(tc.a + tc.b * t);
}

double f_prime(double t, const ModelParams& p) {
  if (!(t >= 0.0)) throw std::domain_error("f_prime: t must be >= 0");
  if (t == 0.0) return p.w;
  const double r = p.w * p.w + 2.0 * p.k * std::log(f_eval(t, p) / p.y);
  return std::sqrt(std::max(0.0, r));
}

double g_eval(double t, double k) {
  if (!(k > 0.0)) throw std::domain_error("g_eval: k must be > 0");
  if (!(t >= 1.0)) throw std::domain_error("g_eval: t must be >= 1");
  if (t == 1.0) return 0.0;
  return t * std::sqrt(2.0 * k * std::log(t));
}

double g_prime(double t, double k) {
  if (!(k > 0.0)) throw std::domain_error("g_prime: k must be > 0");
  if (!(t > 1.0)) throw std::domain_error("g_prime: t must be > 1");
  const double L = std::log(t);
  return std::sqrt(2.0 * k * L + 2.0 * k + k / (2.0 * L));
}

double asymptotic_f(double t, double k) {
  if (!(t > std::numbers::e)) {
    throw std::domain_error("asymptotic_f: t must exceed e");
  }
  return g_eval(t, k);
}

double asymptotic_f0(double x) {
  const double z = x * kSqrt2;
  if (!(z > std::numbers::e)) {
    throw std::domain_error("asymptotic_f0: x*sqrt(2) must exceed e");
  }
  return z * std::sqrt(std::log(z));
}

std::vector<OdePoint> ode_oracle(const ModelParams& p, double t_end,
                                 std::uint64_t n_steps,
                                 std::uint64_t record_every) {
  if (!(t_end > 0.0) || !std::isfinite(t_end)) {
    throw std::domain_error("ode_oracle: t_end must be finite and > 0");
  }
  if (n_steps < 1000) {
    throw std::invalid_argument("ode_oracle: need n_steps >= 1000 (h <= 1e-3 t_end)");
  }
  if (record_every == 0) record_every = 1;

  const double h = t_end / static_cast<double>(n_steps);
  double f = p.y;
  double fp = p.w;

  std::vector<OdePoint> out;
  out.reserve(static_cast<std::size_t>(n_steps / record_every) + 2);
  out.push_back({0.0, f, fp});

  for (std::uint64_t i = 0; i < n_steps; ++i) {
    const double t = h * static_cast<double>(i);
    const double k1f = fp;
    const double k1p = p.k / f;
    const double f2 = f + 0.5 * h * k1f;
    if (f2 <= 0.0) throw convergence_error("ode_oracle: solution left f > 0");
    const double k2f = fp + 0.5 * h * k1p;
    const double k2p = p.k / f2;
    const double f3 = f + 0.5 * h * k2f;
    if (f3 <= 0.0) throw convergence_error("ode_oracle: solution left f > 0");
    const double k3f = fp + 0.5 * h * k2p;
    const double k3p = p.k / f3;
    const double f4 = f + h * k3f;
    if (f4 <= 0.0) throw convergence_error("ode_oracle: solution left f > 0");
    const double k4f = fp + h * k3p;
    const double k4p = p.k / f4;

    f += h / 6.0 * (k1f + 2.0 * k2f + 2.0 * k3f + k4f);
    fp += h / 6.0 * (k1p + 2.0 * k2p + 2.0 * k3p + k4p);
    if (f <= 0.0) throw convergence_error("ode_oracle: solution left f > 0");

    const std::uint64_t j = i + 1;
    if (j % record_every == 0 || j == n_steps) {
      out.push_back({t + h, f, fp});
    }
  }
  return out;
}

} // namespace emdenflow::continuous
