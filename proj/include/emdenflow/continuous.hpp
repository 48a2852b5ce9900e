#pragma once

#include <cstdint>
#include <vector>

namespace emdenflow::continuous {

/// Data of the initial value problem f'' = k/f, f(0) = y, f'(0) = w.
struct ModelParams {
  double k;  ///< > 0
  double y;  ///< > 0
  double w;  ///< >= 0

  ModelParams(double k_, double y_, double w_);

  /// W^2 = w^2 / (2k)
  double w_scaled_sq() const { return w * w / (2.0 * k); }
};

/// Constants (a, b, c) mapping the normalized solution onto f(t) = c * f0(a + b t).
struct TransformConstants {
  double a;  ///< >= 0
  double b;  ///< > 0
  double c;  ///< > 0
};

/// Solve integral_0^U exp(u^2) du = x / sqrt(2) for U >= 0.
/// Safeguarded Newton inside the bracket [0, 1 + sqrt(ln(1 + z^2))], z = x sqrt(2).
double solve_U(double x, double tol = 1e-13);

/// Normalized solution f0(x) = exp(U(x)^2); f0(0) = 1, increasing, convex.
double f0(double x);

TransformConstants transform_constants(const ModelParams& p);

/// f(t) = c * f0(a + b t)
double f_eval(double t, const ModelParams& p);

/// First integral form: f'(t) = sqrt(w^2 + 2k ln(f(t)/y)); returns w exactly at t = 0.
double f_prime(double t, const ModelParams& p);

/// g(t) = t sqrt(2k ln t) for t >= 1 (0 at t = 1).
double g_eval(double t, double k);

/// g'(t) = sqrt(2k ln t + 2k + k/(2 ln t)) for t > 1.
double g_prime(double t, double k);

/// Leading asymptotic term of f; identical to g_eval, restricted to t > e.
double asymptotic_f(double t, double k);

/// Leading asymptotic term of f0: z sqrt(ln z) with z = x sqrt(2), for z > e.
double asymptotic_f0(double x);

struct OdePoint {
  double t;
  double f;
  double fp;
};

/// Classical fourth order one-step integration of f'' = k/f from (y, w).
/// Requires n_steps >= 1000 so that h <= 1e-3 * t_end. Brute force
/// reference used by the verification suites; records every
/// record_every-th step plus the final point.
std::vector<OdePoint> ode_oracle(const ModelParams& p, double t_end,
                                 std::uint64_t n_steps,
                                 std::uint64_t record_every = 1);

} // namespace emdenflow::continuous
