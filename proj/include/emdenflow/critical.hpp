#pragma once

#include <optional>
#include <utility>

namespace emdenflow::critical {

enum class Regime { above_critical, below_critical };

/// Everything the gap analysis produces for one coefficient k.
struct CriticalReport {
  double k;
  double w;         ///< matched initial slope
  double t0;        ///< maximizer of F(., k)
  double F_at_t0;
  Regime regime;
  std::optional<double> t1;  ///< present iff below critical
  std::optional<double> t2;
  double lower_ratio_bound;  ///< NaN when above critical
  double upper_ratio_bound;  ///< NaN when above critical
};

/// psi(t) = 2k + k/(2 ln t) - k ln(2k ln t), strictly decreasing on t > 1.
double psi(double t, double k);

/// Unique t > 1 with psi(t) = w^2, solved in log-t coordinates.
double solve_t0(double k, double w);

/// Signed gap functional
///   F(t,k) = -t sqrt(k/2) exp(W^2) + integral_W^{sqrt(W^2+ln g(t))} exp(v^2) dv
/// with W = w / sqrt(2k). Requires W^2 + ln g(t) >= 0 (below that point
/// f > g holds outright and F is not real-valued). F <= 0 iff f(t) >= g(t).
double F_of(double t, double k, double w);

/// Same quantity through the two-endpoint form that carries f(t) explicitly;
/// used to cross-check F_of on the common domain.
double F_of_alt(double t, double k, double w);

/// sqrt(psi(t) + 2k ln g(t)); equals g_prime(t, k), kept as the second route.
double g_prime_from_psi(double t, double k);

/// Critical coefficient: unique root of k -> F(t0(k), k) on [bracket_lo, bracket_hi].
/// The objective is strictly decreasing in k; the bracket signs are checked
/// at runtime and a failure is reported as convergence_error.
double solve_kc(double tol = 1e-10, double bracket_lo = 0.5, double bracket_hi = 2.0);

/// Crossing points 1 < t1 < t0(k) < t2 of f and g for a below-critical k.
/// Throws std::domain_error when F(t0(k), k) <= 0 (i.e. k >= k_c).
std::pair<double, double> crossings(double k);

/// Crossings x1 < x2 of the normalized ratio f0(x) / g(x;1).
std::pair<double, double> normalized_crossings();

struct RatioExtrema {
  double x_min;
  double min_ratio;
  double x_max_estimate;   ///< grid-resolved (the ratio is extremely flat there)
  double max_ratio_estimate;
};

/// Minimum of f0/g(.;1) on [x1, x2] by golden section, and the sweep maximum
/// over [x2, 1e6] on a log grid.
RatioExtrema ratio_extrema_normalized();

struct NormalizedUpperBound {
  double alpha2;       ///< fixed point scale: g(x2;1) = (x2^(a^2)-1)/a
  double g_x2_inv;     ///< 1 / g(x2;1)
  double sweep_max;    ///< max of f0/g over [x2, 1e6]
  double bound;        ///< the constant 1.12
  bool ok;             ///< sweep_max <= alpha2 + g_x2_inv <= bound
};

NormalizedUpperBound normalized_ratio_upper_bound();

/// Closed-form lower bound (1/2) (ln sqrt(2/k))^(-1/2) on [t1, t2] and the
/// constant upper bound 1.21 beyond t2, for 0 < k < k_c. When verify_sweep
/// is set the bounds are checked against f/g on [t1, t2] and [t2, 10 t2].
std::pair<double, double> ratio_bounds(double k, bool verify_sweep = true);

/// Full per-k report; below critical it includes crossings and ratio bounds.
CriticalReport critical_report(double k);

} // namespace emdenflow::critical
