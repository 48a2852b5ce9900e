#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "emdenflow/continuous.hpp"
#include "emdenflow/errors.hpp"
#include "emdenflow/quadrature.hpp"
#include "support/test_oracles.hpp"

using namespace emdenflow::continuous;
namespace quad = emdenflow::quad;

namespace {
double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }
}

TEST_CASE("ModelParams validation") {
  CHECK_THROWS_AS(ModelParams(0.0, 1.0, 0.0), std::domain_error);
  CHECK_THROWS_AS(ModelParams(1.0, 0.0, 0.0), std::domain_error);
  CHECK_THROWS_AS(ModelParams(1.0, 1.0, -0.1), std::domain_error);
  const ModelParams p(2.0, 1.0, 1.0);
  CHECK(p.w_scaled_sq() == doctest::Approx(0.25).epsilon(1e-15));
}

TEST_CASE("solve_U basics") {
  CHECK(solve_U(0.0) == 0.0);
  // root of I(U) = 1, i.e. x = sqrt(2); frozen from a bisection oracle
  CHECK(rel(solve_U(std::numbers::sqrt2), 0.79517215573464623) < 1e-10);
  CHECK_THROWS_AS(solve_U(-1.0), std::domain_error);
  CHECK_THROWS_AS(solve_U(1e300), std::overflow_error);
  // enormous but admissible arguments stay inside the guarded bracket
  const double u = solve_U(1e299);
  CHECK(u > 26.0);
  CHECK(u < 26.45);
}

TEST_CASE("implicit residual over a wide grid") {
  double x = 1e-3;
  while (x <= 1e3) {
    const double u = solve_U(x);
    const double resid = std::abs(quad::exp_sq_integral(u) - x / std::numbers::sqrt2);
    CHECK(resid <= 1e-10 * std::max(1.0, x));
    x *= 1.7;
  }
}

TEST_CASE("asymptotic regime of U") {
  // U = sqrt(ln z) (1 + O(ln ln z / ln z)); the scaled residual stays bounded
  for (double x : {1e2, 1e3, 1e4, 1e5, 1e6}) {
    const double z = x * std::numbers::sqrt2;
    const double u = solve_U(x);
    const double scaled = (u / std::sqrt(std::log(z)) - 1.0) * std::log(z) /
                          std::log(std::log(z));
    CHECK(scaled > 0.0);
    CHECK(scaled < 0.3);
  }
}

TEST_CASE("f0 values") {
  CHECK(f0(0.0) == 1.0);
  CHECK(rel(f0(std::numbers::sqrt2), 1.8819317149249107) < 1e-10);
  CHECK(rel(f0(2.0), 2.6222789937739627) < 1e-10);
  // depth of the dip below the asymptote at its flat minimum
  CHECK(std::abs(f0(5.7889) / g_eval(5.7889, 1.0) - 0.8829) < 1e-3);
}

TEST_CASE("f0 is increasing and convex") {
  double prev = f0(0.0);
  double prev_d = f0(0.2) - prev;
  for (double x = 0.4; x <= 30.0; x += 0.2) {
    const double cur = f0(x);
    const double d = cur - prev;
    CHECK(d > 0.0);
    CHECK(d >= prev_d * (1.0 - 1e-12));
    prev = cur;
    prev_d = d;
  }
}

TEST_CASE("transform constants") {
  const auto tc0 = transform_constants(ModelParams(1.0, 1.0, 0.0));
  CHECK(tc0.a == 0.0);
  CHECK(tc0.b == 1.0);
  CHECK(tc0.c == 1.0);

  for (const auto& [k, y, w] :
       std::vector<std::array<double, 3>>{{1.0, 1.0, 0.5}, {0.3, 2.0, 0.1},
                                          {2.5, 0.7, 1.4}, {1.0384, 1.0, 0.6218}}) {
    const auto tc = transform_constants(ModelParams(k, y, w));
    CHECK(rel(tc.b * tc.c, std::sqrt(k)) < 1e-14);
  }

  // a = sqrt(2) I(w / sqrt(2k)) at the critical pair, frozen from the oracle
  const auto tc = transform_constants(ModelParams(1.0384, 1.0, 0.6218));
  CHECK(rel(tc.a, 0.65027311761414386) < 1e-12);
}

TEST_CASE("f_eval initial condition and matched boundary value") {
  for (const auto& [k, y, w] :
       std::vector<std::array<double, 3>>{{1.0, 1.0, 0.0}, {0.5, 2.0, 0.3},
                                          {2.0, 0.5, 1.0}}) {
    const ModelParams p(k, y, w);
    CHECK(rel(f_eval(0.0, p), y) < 1e-12);
  }
  // w tuned so that f(1) = 1 + k; frozen from the implicit-solution oracle
  const ModelParams pc(1.0384, 1.0, 0.6218);
  CHECK(rel(f_eval(1.0, pc), 2.0384098425179) < 1e-9);
  CHECK(std::abs(f_eval(1.0, pc) - 2.0384) < 1e-4);
}

TEST_CASE("f_eval matches the one-step integrator") {
  const ModelParams p(1.0, 1.0, 0.0);
  const auto pts = ode_oracle(p, 2.0, 20000, 2000);
  for (const auto& pt : pts) {
    CHECK(rel(f_eval(pt.t, p), pt.f) < 1e-8);
  }
  CHECK(rel(f_eval(2.0, p), 2.6222789937739627) < 1e-10);
}

TEST_CASE("f_prime forms") {
  const ModelParams p(1.0, 1.0, 0.0);
  CHECK(f_prime(0.0, p) == 0.0);
  const ModelParams pw(1.0, 1.0, 0.75);
  CHECK(f_prime(0.0, pw) == 0.75);

  // against a centered difference of f_eval
  const double fd = test_oracle::central_diff(
      [&p](double t) { return f_eval(t, p); }, 2.0, 1e-5);
  CHECK(std::abs(f_prime(2.0, p) - fd) < 1e-6 * fd);

  // first-integral value at the matched critical pair
  const ModelParams pc(1.0384, 1.0, 0.6218);
  const double expect = std::sqrt(0.6218 * 0.6218 + 2.0 * 1.0384 * std::log(2.0384));
  CHECK(std::abs(f_prime(1.0, pc) - expect) < 1e-4);
}

TEST_CASE("first integral identity on a grid") {
  const ModelParams p(0.7, 1.3, 0.4);
  for (double t = 0.3; t <= 25.0; t += 0.7) {
    const double lhs = f_prime(t, p);
    const double rhs =
        std::sqrt(p.w * p.w + 2.0 * p.k * std::log(f_eval(t, p) / p.y));
    CHECK(rel(lhs, rhs) < 1e-9);
  }
}

TEST_CASE("ode residual via second differences") {
  const ModelParams p(1.0, 1.0, 0.0);
  for (double t = 0.5; t <= 10.0; t += 0.9) {
    const double h = 1e-4 * std::max(1.0, t);
    const double fpp =
        (f_eval(t + h, p) - 2.0 * f_eval(t, p) + f_eval(t - h, p)) / (h * h);
    CHECK(std::abs(f_eval(t, p) * fpp - p.k) < 1e-5);
  }
}

TEST_CASE("alternative integral representation with general y") {
  // The substitution v = sqrt(W^2 + ln(s/y)) over s in [y, f(t)] starts at
  // v = W; the y = 1 special case is where the two-sided endpoint form with
  // sqrt(W^2 - ln y) coincides with it.
  for (const auto& [k, y, w] :
       std::vector<std::array<double, 3>>{{1.0, 0.5, 0.3}, {0.5, 1.0, 0.2},
                                          {2.0, 2.0, 2.5}}) {
    const ModelParams p(k, y, w);
    const double W2 = p.w_scaled_sq();
    for (double t : {0.5, 2.0, 8.0}) {
      const double ft = f_eval(t, p);
      const double lhs = quad::exp_sq_integral_between(
          std::sqrt(W2), std::sqrt(W2 + std::log(ft / y)));
      const double rhs = t / y * std::sqrt(0.5 * k) * std::exp(W2);
      CHECK(rel(lhs, rhs) < 1e-9);
    }
  }
}

TEST_CASE("g_eval") {
  CHECK(g_eval(1.0, 1.0) == 0.0);
  CHECK(rel(g_eval(10.0, 1.0), 21.459660262893472) < 1e-13);
  CHECK_THROWS_AS(g_eval(0.9, 1.0), std::domain_error);
  // g(1/sqrt(k)) = sqrt(-ln k) for k < 1
  for (double k : {0.01, 0.04}) {
    CHECK(rel(g_eval(1.0 / std::sqrt(k), k), std::sqrt(-std::log(k))) < 1e-12);
  }
  // strictly increasing past 1
  double prev = 0.0;
  for (double t = 1.0; t <= 50.0; t += 0.5) {
    const double cur = g_eval(t, 0.3);
    CHECK(cur >= prev);
    prev = cur;
  }
}

TEST_CASE("g_prime closed form") {
  CHECK(rel(g_prime(std::numbers::e, 1.0), std::sqrt(4.5)) < 1e-14);
  CHECK(rel(g_prime(std::numbers::e, 0.3), std::sqrt(4.5 * 0.3)) < 1e-14);
  CHECK(rel(g_prime(10.0, 1.0), 2.6119566280740033) < 1e-13);
  CHECK_THROWS_AS(g_prime(1.0, 1.0), std::domain_error);

  const double fd = test_oracle::central_diff(
      [](double t) { return g_eval(t, 1.0); }, 10.0, 1e-6);
  CHECK(std::abs(g_prime(10.0, 1.0) - fd) < 1e-6);

  // g'(t) / sqrt(2k ln t) -> 1 from above
  double prev = 1e9;
  for (double t : {1e2, 1e4, 1e8, 1e12}) {
    const double r = g_prime(t, 1.0) / std::sqrt(2.0 * std::log(t));
    CHECK(r > 1.0);
    CHECK(r < prev);
    prev = r;
  }
}

TEST_CASE("asymptotic forms") {
  CHECK_THROWS_AS(asymptotic_f(2.0, 1.0), std::domain_error);
  CHECK_THROWS_AS(asymptotic_f0(1.0), std::domain_error);
  for (double t : {3.0, 10.0, 250.0}) {
    CHECK(asymptotic_f(t, 0.7) == g_eval(t, 0.7));
  }

  // ratio f0 / asymptotic leading term across decades, frozen from the oracle
  const double expected[] = {-0.051902758, -0.01218222, 0.001500518,
                             0.0070806591, 0.0096590029};
  const double xs[] = {1e2, 1e3, 1e4, 1e5, 1e6};
  for (int i = 0; i < 5; ++i) {
    const double r = f0(xs[i]) / asymptotic_f0(xs[i]) - 1.0;
    CHECK(std::abs(r - expected[i]) < 1e-6);
  }
  // net approach toward 1 across the sweep
  CHECK(std::abs(f0(1e6) / asymptotic_f0(1e6) - 1.0) <
        std::abs(f0(1e2) / asymptotic_f0(1e2) - 1.0));
}

TEST_CASE("ode_oracle linear limit and preconditions") {
  const ModelParams p(1e-14, 1.0, 0.5);
  const auto pts = ode_oracle(p, 4.0, 4000, 1000);
  for (const auto& pt : pts) {
    CHECK(rel(pt.f, 1.0 + 0.5 * pt.t) < 1e-12);
  }
  CHECK_THROWS_AS(ode_oracle(ModelParams(1.0, 1.0, 0.0), 1.0, 999),
                  std::invalid_argument);
}

TEST_CASE("ode_oracle hits the matched boundary value at the critical pair") {
  const ModelParams p(1.0384, 1.0, 0.6218);
  const auto pts = ode_oracle(p, 1.0, 10000);
  CHECK(std::abs(pts.back().f - 2.0384) < 1e-4);
}
