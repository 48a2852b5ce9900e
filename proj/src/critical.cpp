#include "emdenflow/critical.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "detail/rootfind.hpp"
#include "emdenflow/continuous.hpp"
#include "emdenflow/errors.hpp"
#include "emdenflow/quadrature.hpp"
#include "emdenflow/shooting.hpp"

namespace emdenflow::critical {

namespace {

constexpr double kLogTLimit = 708.0;  // exp(L) representable
constexpr double kRatioSweepEnd = 1e6;

double psi_of_logt(double L, double k) {
  return 2.0 * k + k / (2.0 * L) - k * std::log(2.0 * k * L);
}

// log t at which g(t) = c (g is strictly increasing on t > 1), bisected in L.
double logt_where_g_equals(double k, double c) {
  const double target = std::log(c);
  auto h = [k, target](double L) {
    return L + 0.5 * std::log(2.0 * k * L) - target;
  };
  double lo = 1e-300, hi = 1.0;
  while (h(hi) < 0.0) {
    hi *= 2.0;
    if (hi > kLogTLimit) throw std::overflow_error("g level out of double range");
  }
  return detail::bisect(h, lo, hi);
}

double w_of(double k) { return shooting::solve_w(k).w; }

// F evaluated directly from log t; caller guarantees W^2 + ln g >= 0.
double F_from_logt(double L, double k, double W) {
  const double t = std::exp(L);
  const double g = t * std::sqrt(2.0 * k * L);
  const double beta2 = W * W + std::log(g);
  const double beta = std::sqrt(beta2);
  return std::exp(W * W) *
         (g * quad::dawson(beta) - quad::dawson(W) - t * std::sqrt(0.5 * k));
}

struct NormalizedGeometry {
  double x1, x2;
};

// Crossings of f0 against g(.;1): roots of F(., 1) with w = 0.
NormalizedGeometry normalized_geometry() {
  const double k = 1.0;
  // start just past the point where ln g >= 0
  const double Ls = logt_where_g_equals(k, 1.0) * (1.0 + 1e-12) + 1e-14;
  auto Fl = [k](double L) { return F_from_logt(L, k, 0.0); };

  // w = 0: psi(t0) = 0
  double Lhi = 1.0;
  while (psi_of_logt(Lhi, k) > 0.0) Lhi *= 2.0;
  const double L0 = detail::bisect([k](double L) { return psi_of_logt(L, k); },
                                   1e-6, Lhi);

  const double Lx1 = detail::bisect(Fl, Ls, L0);
  double Lfar = L0 + std::numbers::ln2;
  while (Fl(Lfar) > 0.0) {
    Lfar += std::numbers::ln2;
    if (Lfar > kLogTLimit) throw convergence_error("normalized crossing bracket failed");
  }
  const double Lx2 = detail::bisect(Fl, L0, Lfar);
  return NormalizedGeometry{std::exp(Lx1), std::exp(Lx2)};
}

double normalized_ratio(double x) {
  return continuous::f0(x) / continuous::g_eval(x, 1.0);
}

} // namespace

double psi(double t, double k) {
  if (!(k > 0.0)) throw std::domain_error("psi: k must be > 0");
  if (!(t > 1.0)) throw std::domain_error("psi: t must be > 1");
  return psi_of_logt(std::log(t), k);
}

double solve_t0(double k, double w) {
  if (!(k > 0.0)) throw std::domain_error("solve_t0: k must be > 0");
  if (!(w > 0.0)) throw std::domain_error("solve_t0: w must be > 0");
  const double w2 = w * w;

  auto h = [k, w2](double L) { return psi_of_logt(L, k) - w2; };
  double lo = 1e-300;
  double hi = 1.0;
  int budget = 0;
  while (h(hi) > 0.0) {
    hi *= 2.0;
    if (hi > kLogTLimit) {
      throw std::overflow_error("solve_t0: t0 exceeds double range");
    }
    if (++budget > 100) throw convergence_error("solve_t0: bracket expansion failed");
  }
  const double ftol = 1e-12 * std::max(1.0, w2);
  const double L = detail::newton_bisect(
      h,
      [k](double L_) { return -k / (2.0 * L_ * L_) - k / L_; },
      lo, hi, 0.5 * hi, ftol, "solve_t0");
  return std::exp(L);
}

double F_of(double t, double k, double w) {
  if (!(k > 0.0)) throw std::domain_error("F_of: k must be > 0");
  if (!(t >= 1.0)) throw std::domain_error("F_of: t must be >= 1");
  if (!(w >= 0.0)) throw std::domain_error("F_of: w must be >= 0");
  const double W = w / std::sqrt(2.0 * k);
  const double g = continuous::g_eval(t, k);
  if (g <= 0.0 || W * W + std::log(g) < 0.0) {
    throw std::domain_error("F_of: requires W^2 + ln g(t) >= 0 (f > g holds below)");
  }
  return F_from_logt(std::log(t), k, W);
}

double F_of_alt(double t, double k, double w) {
  if (!(k > 0.0)) throw std::domain_error("F_of_alt: k must be > 0");
  if (!(t >= 1.0)) throw std::domain_error("F_of_alt: t must be >= 1");
  const double W = w / std::sqrt(2.0 * k);
  const double W2 = W * W;
  const double g = continuous::g_eval(t, k);
  if (g <= 0.0 || W2 + std::log(g) < 0.0) {
    throw std::domain_error("F_of_alt: requires W^2 + ln g(t) >= 0");
  }
  const double f = continuous::f_eval(t, continuous::ModelParams(k, 1.0, w));
  const double alpha = std::sqrt(W2 + std::log(f));
  const double beta = std::sqrt(W2 + std::log(g));
  return std::exp(W2) *
         (g * quad::dawson(beta) - f * quad::dawson(alpha));
}

double g_prime_from_psi(double t, double k) {
  const double g = continuous::g_eval(t, k);
  return std::sqrt(psi(t, k) + 2.0 * k * std::log(g));
}

double solve_kc(double tol, double bracket_lo, double bracket_hi) {
  if (!(tol > 0.0)) throw std::domain_error("solve_kc: tol must be positive");
  auto objective = [](double k) {
    const double w = w_of(k);
    return F_of(solve_t0(k, w), k, w);
  };
  if (!(objective(bracket_lo) > 0.0) || !(objective(bracket_hi) < 0.0)) {
    throw convergence_error("solve_kc: bracket sign check failed");
  }
  double lo = bracket_lo, hi = bracket_hi;
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    if (objective(mid) > 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

std::pair<double, double> crossings(double k) {
  if (!(k > 0.0)) throw std::domain_error("crossings: k must be > 0");
  const double w = w_of(k);
  const double W = w / std::sqrt(2.0 * k);
  const double t0 = solve_t0(k, w);
  const double L0 = std::log(t0);
  if (!(F_from_logt(L0, k, W) > 0.0)) {
    throw std::domain_error("crossings: k is at or above the critical coefficient");
  }

  auto Fl = [k, W](double L) { return F_from_logt(L, k, W); };
  // F is negative once g(t) drops to exp(-W^2) and below that point f > g.
  const double Ls = logt_where_g_equals(k, std::exp(-W * W)) * (1.0 + 1e-12) + 1e-14;
  const double L1 = detail::bisect(Fl, Ls, L0);

  double Lfar = L0 + std::numbers::ln2;
  int budget = 0;
  while (Fl(Lfar) > 0.0) {
    Lfar += std::numbers::ln2;
    if (Lfar > kLogTLimit) throw std::overflow_error("crossings: t2 exceeds double range");
    if (++budget > 2000) throw convergence_error("crossings: far bracket failed");
  }
  const double L2 = detail::bisect(Fl, L0, Lfar);
  return {std::exp(L1), std::exp(L2)};
}

std::pair<double, double> normalized_crossings() {
  const NormalizedGeometry geo = normalized_geometry();
  return {geo.x1, geo.x2};
}

RatioExtrema ratio_extrema_normalized() {
  const NormalizedGeometry geo = normalized_geometry();
  RatioExtrema out;
  out.x_min = detail::golden_min(normalized_ratio, geo.x1, geo.x2, 1e-9 * geo.x2);
  out.min_ratio = normalized_ratio(out.x_min);

  // The maximum beyond x2 sits on an extremely flat plateau; a log grid
  // resolves the value well and the location only coarsely.
  const int n = 2000;
  const double ratio_step = std::pow(kRatioSweepEnd / geo.x2, 1.0 / n);
  double x = geo.x2;
  double best_x = x, best_r = 0.0;
  for (int i = 0; i <= n; ++i) {
    const double r = normalized_ratio(x);
    if (r > best_r) {
      best_r = r;
      best_x = x;
    }
    x *= ratio_step;
  }
  out.x_max_estimate = best_x;
  out.max_ratio_estimate = best_r;
  return out;
}

NormalizedUpperBound normalized_ratio_upper_bound() {
  const NormalizedGeometry geo = normalized_geometry();
  const double gx2 = continuous::g_eval(geo.x2, 1.0);

  auto h = [&](double a) { return (std::pow(geo.x2, a * a) - 1.0) / a - gx2; };
  const double alpha2 = detail::bisect(h, 1.01, 1.5);

  const int n = 600;
  const double step = std::pow(kRatioSweepEnd / geo.x2, 1.0 / n);
  double x = geo.x2;
  double sweep_max = 0.0;
  for (int i = 0; i <= n; ++i) {
    sweep_max = std::max(sweep_max, normalized_ratio(x));
    x *= step;
  }

  NormalizedUpperBound out;
  out.alpha2 = alpha2;
  out.g_x2_inv = 1.0 / gx2;
  out.sweep_max = sweep_max;
  out.bound = 1.12;
  out.ok = sweep_max <= alpha2 + out.g_x2_inv && alpha2 + out.g_x2_inv <= out.bound;
  return out;
}

std::pair<double, double> ratio_bounds(double k, bool verify_sweep) {
  if (!(k > 0.0)) throw std::domain_error("ratio_bounds: k must be > 0");
  const double lower = 0.5 / std::sqrt(std::log(std::sqrt(2.0 / k)));
  const double upper = 1.21;

  const auto [t1, t2] = crossings(k);  // also validates k < k_c
  if (verify_sweep) {
    const continuous::ModelParams p(k, 1.0, w_of(k));
    const int n = 200;
    const double step1 = std::pow(t2 / t1, 1.0 / n);
    double t = t1;
    for (int i = 0; i <= n; ++i) {
      const double ratio = continuous::f_eval(t, p) / continuous::g_eval(t, k);
      if (ratio < lower * (1.0 - 1e-9)) {
        throw convergence_error("ratio_bounds: lower bound violated on [t1, t2]");
      }
      t *= step1;
    }
    const double step2 = std::pow(10.0, 1.0 / n);
    t = t2;
    for (int i = 0; i <= n; ++i) {
      const double ratio = continuous::f_eval(t, p) / continuous::g_eval(t, k);
      if (ratio > upper * (1.0 + 1e-9)) {
        throw convergence_error("ratio_bounds: upper bound violated on [t2, 10 t2]");
      }
      t *= step2;
    }
  }
  return {lower, upper};
}

CriticalReport critical_report(double k) {
  CriticalReport rep;
  rep.k = k;
  rep.w = w_of(k);
  rep.t0 = solve_t0(k, rep.w);
  rep.F_at_t0 = F_of(rep.t0, k, rep.w);
  rep.regime = rep.F_at_t0 > 0.0 ? Regime::below_critical : Regime::above_critical;
  if (rep.regime == Regime::below_critical) {
    const auto [t1, t2] = crossings(k);
    rep.t1 = t1;
    rep.t2 = t2;
    const auto [lo, up] = ratio_bounds(k, false);
    rep.lower_ratio_bound = lo;
    rep.upper_ratio_bound = up;
  } else {
    rep.lower_ratio_bound = std::numeric_limits<double>::quiet_NaN();
    rep.upper_ratio_bound = std::numeric_limits<double>::quiet_NaN();
  }
  return rep;
}

} // namespace emdenflow::critical
