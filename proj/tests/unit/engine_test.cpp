#include <doctest.h>

#include <cmath>

#include "prsplit/engine.hpp"
#include "prsplit/rng.hpp"
#include "support/test_support.hpp"

using namespace prsplit;

TEST_CASE("single step closed forms") {
  ProblemPair pair = testing::linear_pair(1.0, 1.0, 1);
  RunConfig config;
  config.theta = 3.0;

  Vector x(1);
  x << 1.0;
  const StepResult r = step(pair, config, x);
  CHECK(r.u(0) == 0.5);
  CHECK(r.v(0) == 0.0);
  CHECK(r.x_next(0) == -0.5);

  // Fixed point: stepping from the known solution does not move.
  Vector zero = Vector::Zero(1);
  const StepResult fixed = step(pair, config, zero);
  CHECK(fixed.x_next(0) == 0.0);

  // Zero operators at theta = 1: resolvents are the identity, no movement.
  ProblemPair zeros(make_linear_operator(0.0, 2), make_linear_operator(0.0, 2),
                    1.0);
  RunConfig dr;
  dr.theta = 1.0;
  Vector x2(2);
  x2 << 0.7, -1.3;
  const StepResult still = step(zeros, dr, x2);
  CHECK((still.x_next - x2).norm() == 0.0);
}

TEST_CASE("scaled step matches the unscaled step under rescaling") {
  ProblemPair pair = testing::linear_pair(1.0, 1.0, 1);
  ScaledPair scaled(pair);
  RunConfig config;
  config.theta = 3.0;

  Vector xbar(1);
  xbar << 0.5;  // x = 1 scaled by 1/(1+beta)
  const StepResult r = step_scaled(scaled, config, xbar);
  CHECK(r.x_next(0) == -0.25);

  CHECK(step_scaled(scaled, config, Vector::Zero(1)).x_next(0) == 0.0);

  // Random fixtures: (1+beta) * scaled iterates track the unscaled run, and
  // the step difference equals theta (v - u) from the scaled quantities.
  SplitRng rng(23, 0);
  for (int trial = 0; trial < 12; ++trial) {
    const double a = 0.3 + 2.0 * rng.uniform();
    const double b = 0.3 + 2.0 * rng.uniform();
    const double beta = std::min(a, b);
    ProblemPair p = testing::linear_pair(a, b, 3);
    ScaledPair sp(p);
    RunConfig c;
    c.theta = 2.0 + beta + 0.4 * std::min(beta, 1.0 / beta);

    Vector x(3), xb(3);
    for (int i = 0; i < 3; ++i) x[i] = 4.0 * (rng.uniform() - 0.5);
    xb = x / (1.0 + beta);
    for (int k = 0; k < 100; ++k) {
      const StepResult su = step(p, c, x);
      const StepResult ss = step_scaled(sp, c, xb);
      CHECK((su.x_next - x - c.theta * (ss.v - ss.u)).norm() <= 1e-12);
      CHECK((su.x_next - (1.0 + beta) * ss.x_next).norm() <= 1e-10);
      x = su.x_next;
      xb = ss.x_next;
    }
  }
}

TEST_CASE("run follows the closed-form linear recursion") {
  ProblemPair pair = testing::linear_pair(1.0, 1.0, 1);
  RunConfig config;
  config.theta = 3.0;
  config.record_trace = true;

  Vector x0(1);
  x0 << 1.0;
  const RunResult result = run(pair, config, x0);
  CHECK(result.terminated == Termination::kConverged);
  CHECK(std::abs(result.final_x(0)) < 1e-4);

  // x_k = (-1/2)^k x0, so every trace entry halves and flips sign.
  double expected = 1.0;
  for (const auto& entry : result.trace) {
    expected *= -0.5;
    CHECK(entry.x(0) == doctest::Approx(expected).epsilon(1e-14));
  }
  // Residuals shrink geometrically, hence nonincreasing.
  for (std::size_t i = 1; i < result.trace.size(); ++i)
    CHECK(result.trace[i].residual <= result.trace[i - 1].residual + 1e-12);

  // Starting at the solution converges in one iteration.
  const RunResult at_solution = run(pair, config, Vector::Zero(1));
  CHECK(at_solution.terminated == Termination::kConverged);
  CHECK(at_solution.iterates_used == 1);
}

TEST_CASE("relaxation beyond the admissible range stalls on the fixture") {
  // For A(u) = B(u) = u the per-step factor is 1 - theta/2; the iteration
  // diverges once theta passes 2 + beta + min(beta, 1/beta) = 4.
  ProblemPair pair = testing::linear_pair(1.0, 1.0, 1);
  RunConfig config;
  config.theta = theta_probe(1.0);
  CHECK(config.theta == doctest::Approx(4.05));
  config.max_iters = 200;
  Vector x0(1);
  x0 << 1.0;
  const RunResult result = run(pair, config, x0);
  CHECK(result.terminated == Termination::kMaxItersExceeded);
  CHECK(result.iterates_used == 200);
}

TEST_CASE("numerical failures carry the iteration index") {
  auto calls = std::make_shared<int>(0);
  ResolventOracle bad(1, [calls](const Vector& x) -> Vector {
    Vector y = x;
    if (++*calls > 3) y(0) = std::numeric_limits<double>::quiet_NaN();
    return y;
  });
  ProblemPair pair(make_linear_operator(1.0, 1), bad, 1.0);
  RunConfig config;
  config.theta = 3.0;
  config.max_iters = 50;
  Vector x0(1);
  x0 << 1.0;
  try {
    run(pair, config, x0);
    CHECK(false);
  } catch (const NumericalFailure& e) {
    CHECK(e.iteration() >= 1);
  }
}

TEST_CASE("trace without a known solution leaves star-dependent fields empty") {
  ProblemPair pair(make_linear_operator(1.0, 2), make_linear_operator(2.0, 2),
                   1.0);
  RunConfig config;
  config.theta = 2.5;
  config.record_trace = true;
  config.max_iters = 20;
  config.tol = 1e-12;
  Vector x0(2);
  x0 << 1.0, -2.0;
  const RunResult result = run(pair, config, x0);
  REQUIRE(!result.trace.empty());
  for (const auto& entry : result.trace) {
    CHECK(entry.alpha.size() == 0);
    CHECK(std::isnan(entry.slack_a));
    CHECK(std::isnan(entry.slack_b));
    CHECK(std::isnan(entry.slack_rate));
    CHECK(std::isnan(entry.min_abs_dev));
    CHECK(std::isfinite(entry.gamma));
    CHECK(std::isfinite(entry.residual));
  }
}

TEST_CASE("config validation and parameter helpers") {
  RunConfig config;
  config.theta = 0.0;
  CHECK_THROWS_AS(config.validate(), InvalidArgument);
  config.theta = 2.0;
  config.tol = 0.0;
  CHECK_THROWS_AS(config.validate(), InvalidArgument);
  config.tol = 1e-5;
  config.max_iters = 0;
  CHECK_THROWS_AS(config.validate(), InvalidArgument);

  CHECK(theta_upper(0.5) == 3.0);
  CHECK(theta_mid(2.0) == 4.25);
  CHECK(RunConfig{.theta = 3.3}.epsilon_for(1.0) ==
        doctest::Approx(0.3).epsilon(1e-15));
}
