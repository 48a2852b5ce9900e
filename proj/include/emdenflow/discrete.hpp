#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace emdenflow::discrete {

/// Materialized run of V_{j+1} = 2 V_j - V_{j-1} + k / V_j, V_0 = 1, V_1 = 1+k.
struct RecursionTrace {
  double k;
  std::vector<double> values;             ///< V_0 .. V_n
  std::vector<double> first_differences;  ///< V_{j+1} - V_j, j = 0 .. n-1
  std::uint64_t n;
};

RecursionTrace recursion_trace(double k, std::uint64_t n);

/// W_j = j sqrt(2k ln j); W_1 = 0. Identical to g_eval(j, k).
double w_sequence(std::uint64_t j, double k);

/// Constant-memory iteration of the recursion; visit(j, V_j) for j = 0..n_max.
/// The update is carried as (V_j, V_j - V_{j-1}): algebraically the same
/// second difference, but the rounding error of V does not feed back into
/// the increment, which keeps long runs (j ~ 1e8) at sqrt(n)-ulp drift where
/// the literal 2V_j - V_{j-1} + k/V_j form drifts secularly.
template <class Visit>
void stream_recursion(double k, std::uint64_t n_max, Visit&& visit) {
  double v = 1.0 + k;
  double d = k;  // V_1 - V_0
  visit(std::uint64_t{0}, 1.0);
  if (n_max == 0) return;
  visit(std::uint64_t{1}, v);
  for (std::uint64_t j = 1; j < n_max; ++j) {
    d += k / v;
    v += d;
    visit(j + 1, v);
  }
}

/// Outcome of the per-step growth checks, plus the empirical estimators for
/// the difference-floor constant and the onset index they induce. The
/// estimators are implementation choices, not quantities fixed by theory.
struct PropertyReport {
  bool ok;
  std::uint64_t first_violation_index;  ///< meaningful only when !ok
  std::string violated;                 ///< name of the first failed check
  double c_hat;                         ///< min_j [(V_{j+1}-V_j)^2 - 2k ln V_j]
  double ln_n0;                         ///< ln of min{n : psi(n) <= c_hat - 1}
};

/// Checks, for every index of the trace: V_j >= 1 + jk, the exact
/// telescoping identity V_{j+1}-V_j = k sum_{i<=j} 1/V_i (to 1e-10 relative),
/// the difference bound V_{j+1}-V_j <= k + ln(1+jk), the relative-difference
/// bound, and the cumulative growth envelope.
PropertyReport check_properties(const RecursionTrace& trace);

/// [ln V_{j+1} - ln V_{j-1}] / [(V_{j+1} - V_{j-1}) / V_j], for 2 <= j <= n-1.
double log_identity_quotient(const RecursionTrace& trace, std::uint64_t j);

/// Scan of V_j against W_j up to n_max. first_at_or_above is the first
/// j >= 2 with V_j >= W_j (always 2: V_2 > W_2 for every k > 0); the
/// persistent onset is the start of the final V >= W run when that run
/// reaches n_max, verified by a second pass.
struct CrossingScan {
  std::optional<std::uint64_t> persistent_onset;
  std::uint64_t first_at_or_above;
  std::uint64_t first_below;  ///< 0 when V never dips below W
  std::uint64_t last_below;   ///< 0 when V never dips below W
  bool persistence_verified;
};

CrossingScan crossing_scan(double k, std::uint64_t n_max);

/// The onset index of the persistent V >= W regime, absent when the scan
/// ends with V below W.
std::optional<std::uint64_t> crossing_detect(double k, std::uint64_t n_max);

/// Sampled ratios V_j / W_j at j = 10^e. trend_ok requires |ratio - 1|
/// non-increasing across the samples and inside the envelope
/// C / sqrt(2k ln j), with C twice the largest scaled deviation seen over
/// the first sampled decade.
struct ConvergenceDiagnostic {
  double k;
  std::vector<std::uint64_t> sample_indices;
  std::vector<double> ratios;
  bool trend_ok;
  double envelope_c;
};

ConvergenceDiagnostic convergence_diagnostic(double k, const std::vector<unsigned>& exponents);

/// min over j <= n of (V_{j+1} - V_j)^2 - 2k ln V_j (streaming).
double difference_floor(double k, std::uint64_t n);

/// ln of the smallest n with psi(n) <= c_hat - 1.
double log_n0_estimate(double k, double c_hat);

} // namespace emdenflow::discrete
