#include "emdenflow/discrete.hpp"

#include <cmath>
#include <stdexcept>

#include "detail/rootfind.hpp"
#include "emdenflow/continuous.hpp"
#include "emdenflow/errors.hpp"

namespace emdenflow::discrete {

namespace {

constexpr std::uint64_t kTraceGuard = 100000000;  // 1e8

void check_k(double k, const char* who) {
  if (!(k > 0.0) || !std::isfinite(k)) {
    throw std::domain_error(std::string(who) + ": k must be finite and > 0");
  }
}

double psi_logt(double L, double k) {
  return 2.0 * k + k / (2.0 * L) - k * std::log(2.0 * k * L);
}

} // namespace

RecursionTrace recursion_trace(double k, std::uint64_t n) {
  check_k(k, "recursion_trace");
  if (n < 1 || n > kTraceGuard) {
    throw std::invalid_argument("recursion_trace: need 1 <= n <= 1e8");
  }
  RecursionTrace tr;
  tr.k = k;
  tr.n = n;
  tr.values.resize(n + 1);
  tr.first_differences.resize(n);
  tr.values[0] = 1.0;
  tr.values[1] = 1.0 + k;
  tr.first_differences[0] = k;
  double d = k;
  for (std::uint64_t j = 1; j < n; ++j) {
    d += k / tr.values[j];
    tr.values[j + 1] = tr.values[j] + d;
    tr.first_differences[j] = d;
  }
  return tr;
}

double w_sequence(std::uint64_t j, double k) {
  check_k(k, "w_sequence");
  if (j < 1) throw std::domain_error("w_sequence: j must be >= 1");
  if (j == 1) return 0.0;
  return continuous::g_eval(static_cast<double>(j), k);
}

PropertyReport check_properties(const RecursionTrace& trace) {
  const double k = trace.k;
  PropertyReport rep;
  rep.ok = true;
  rep.first_violation_index = 0;
  rep.c_hat = trace.first_differences[0] * trace.first_differences[0];  // j = 0: d0^2, ln V0 = 0

  auto fail = [&rep](std::uint64_t j, const char* what) {
    if (rep.ok) {
      rep.ok = false;
      rep.first_violation_index = j;
      rep.violated = what;
    }
  };

  double sum_inv = 0.0;       // k * sum_{i<=j} 1/V_i (compensated)
  double sum_inv_comp = 0.0;
  double growth = 1.0;        // 1 + sum_{i<j} (k + ln(1+ik))
  for (std::uint64_t j = 0; j <= trace.n; ++j) {
    const double vj = trace.values[j];
    const double jk = static_cast<double>(j) * k;

    if (vj < (1.0 + jk) * (1.0 - 1e-14)) fail(j, "V_j >= 1 + jk");
    if (j > 0 && vj > growth * (1.0 + 1e-14)) fail(j, "V_j <= 1 + sum(k + ln(1+ik))");
    growth += k + std::log1p(jk);

    if (j < trace.n) {
      const double add = k / vj;
      const double t = sum_inv + add;
      sum_inv_comp += (sum_inv - t) + add;
      sum_inv = t;

      const double dj = trace.first_differences[j];
      const double telescoped = sum_inv + sum_inv_comp;
      if (std::abs(dj - telescoped) > 1e-10 * telescoped) {
        fail(j, "V_{j+1}-V_j = k sum 1/V_i");
      }
      const double bound = k + std::log1p(jk);
      if (dj > bound * (1.0 + 1e-12)) fail(j, "V_{j+1}-V_j <= k + ln(1+jk)");
      if (dj / vj > bound / (1.0 + jk) * (1.0 + 1e-12)) {
        fail(j, "(V_{j+1}-V_j)/V_j <= (k+ln(1+jk))/(1+jk)");
      }
      const double floor_term = dj * dj - 2.0 * k * std::log(vj);
      if (floor_term < rep.c_hat) rep.c_hat = floor_term;
    }
  }
  rep.ln_n0 = log_n0_estimate(k, rep.c_hat);
  return rep;
}

double log_identity_quotient(const RecursionTrace& trace, std::uint64_t j) {
  if (j < 2 || j + 1 > trace.n) {
    throw std::out_of_range("log_identity_quotient: need 2 <= j <= n-1");
  }
  const double num = std::log(trace.values[j + 1] / trace.values[j - 1]);
  const double den = (trace.values[j + 1] - trace.values[j - 1]) / trace.values[j];
  return num / den;
}

CrossingScan crossing_scan(double k, std::uint64_t n_max) {
  check_k(k, "crossing_scan");
  if (n_max < 2 || n_max > kTraceGuard) {
    throw std::invalid_argument("crossing_scan: need 2 <= n_max <= 1e8");
  }
  CrossingScan scan;
  scan.first_at_or_above = 0;
  scan.first_below = 0;
  scan.last_below = 0;
  scan.persistence_verified = false;

  stream_recursion(k, n_max, [&](std::uint64_t j, double v) {
    if (j < 2) return;
    const double w = w_sequence(j, k);
    if (v >= w) {
      if (scan.first_at_or_above == 0) scan.first_at_or_above = j;
    } else {
      if (scan.first_below == 0) scan.first_below = j;
      scan.last_below = j;
    }
  });

  if (scan.last_below == n_max) {
    scan.persistent_onset.reset();
    return scan;
  }
  const std::uint64_t onset = scan.last_below == 0 ? 2 : scan.last_below + 1;
  scan.persistent_onset = onset;

  // independent second pass over (onset, n_max]
  bool persists = true;
  stream_recursion(k, n_max, [&](std::uint64_t j, double v) {
    if (j <= onset) return;
    if (persists && v < w_sequence(j, k)) persists = false;
  });
  scan.persistence_verified = persists;
  return scan;
}

std::optional<std::uint64_t> crossing_detect(double k, std::uint64_t n_max) {
  return crossing_scan(k, n_max).persistent_onset;
}

ConvergenceDiagnostic convergence_diagnostic(double k, const std::vector<unsigned>& exponents) {
  check_k(k, "convergence_diagnostic");
  if (exponents.empty()) {
    throw std::invalid_argument("convergence_diagnostic: need at least one exponent");
  }
  for (std::size_t i = 0; i < exponents.size(); ++i) {
    if (exponents[i] < 1 || exponents[i] > 8) {
      throw std::invalid_argument("convergence_diagnostic: exponents must lie in [1, 8]");
    }
    if (i > 0 && exponents[i] <= exponents[i - 1]) {
      throw std::invalid_argument("convergence_diagnostic: exponents must be ascending");
    }
  }

  ConvergenceDiagnostic diag;
  diag.k = k;
  std::uint64_t n_max = 1;
  for (unsigned e = 0; e < exponents.back(); ++e) n_max *= 10;
  std::uint64_t d_lo = 1;
  for (unsigned e = 0; e < exponents.front(); ++e) d_lo *= 10;
  const std::uint64_t d_hi = d_lo * 10;

  std::size_t next = 0;
  std::uint64_t next_j = d_lo;
  double max_scaled_first_decade = 0.0;

  stream_recursion(k, n_max, [&](std::uint64_t j, double v) {
    if (j < 2) return;
    if (j >= d_lo && j <= d_hi) {
      const double scale = std::sqrt(2.0 * k * std::log(static_cast<double>(j)));
      const double dev = std::abs(v / w_sequence(j, k) - 1.0) * scale;
      if (dev > max_scaled_first_decade) max_scaled_first_decade = dev;
    }
    if (next < exponents.size() && j == next_j) {
      diag.sample_indices.push_back(j);
      diag.ratios.push_back(v / w_sequence(j, k));
      ++next;
      if (next < exponents.size()) {
        next_j = 1;
        for (unsigned e = 0; e < exponents[next]; ++e) next_j *= 10;
      }
    }
  });

  diag.envelope_c = 2.0 * max_scaled_first_decade;
  bool ok = true;
  for (std::size_t i = 0; i < diag.ratios.size(); ++i) {
    const double dev = std::abs(diag.ratios[i] - 1.0);
    if (i > 0 && dev > std::abs(diag.ratios[i - 1] - 1.0)) ok = false;
    const double jd = static_cast<double>(diag.sample_indices[i]);
    if (dev > diag.envelope_c / std::sqrt(2.0 * k * std::log(jd))) ok = false;
  }
  diag.trend_ok = ok;
  return diag;
}

double difference_floor(double k, std::uint64_t n) {
  check_k(k, "difference_floor");
  if (n < 1 || n > kTraceGuard) {
    throw std::invalid_argument("difference_floor: need 1 <= n <= 1e8");
  }
  double floor_val = k * k;  // j = 0 term: d0 = k, ln V0 = 0
  double v = 1.0 + k;
  double d = k;
  for (std::uint64_t j = 1; j < n; ++j) {
    d += k / v;
    const double val = d * d - 2.0 * k * std::log(v);
    if (val < floor_val) floor_val = val;
    v += d;
  }
  return floor_val;
}

double log_n0_estimate(double k, double c_hat) {
  check_k(k, "log_n0_estimate");
  const double target = c_hat - 1.0;
  auto h = [k, target](double L) { return psi_logt(L, k) - target; };
  double lo = 1e-300, hi = 1.0;
  // psi decreases in L without lower bound, so a sign change always appears
  while (h(hi) > 0.0) hi *= 2.0;
  return detail::bisect(h, lo, hi);
}

} // namespace emdenflow::discrete
