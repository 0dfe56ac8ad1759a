#include <doctest.h>

#include <cmath>
#include <sstream>

#include "prsplit/engine.hpp"
#include "prsplit/lasso.hpp"
#include "prsplit/oracles.hpp"
#include "prsplit/rng.hpp"
#include "support/test_support.hpp"

using namespace prsplit;

namespace {

SparseRowMajor sparse_identity(Eigen::Index n) {
  SparseRowMajor c(n, n);
  for (Eigen::Index i = 0; i < n; ++i) c.insert(i, i) = 1.0;
  c.makeCompressed();
  return c;
}

SparseRowMajor sparse_from_dense(const Eigen::MatrixXd& d) {
  SparseRowMajor c(d.rows(), d.cols());
  for (Eigen::Index i = 0; i < d.rows(); ++i)
    for (Eigen::Index j = 0; j < d.cols(); ++j)
      if (d(i, j) != 0.0) c.insert(i, j) = d(i, j);
  c.makeCompressed();
  return c;
}

}  // namespace

TEST_CASE("generation matches the sparsity model and is deterministic") {
  const GenSpec spec{300, 200, BMode::kGaussian, 99};
  const LassoInstance inst = LassoInstance::generate(spec);
  const double density =
      static_cast<double>(inst.c().nonZeros()) / (300.0 * 200.0);
  CHECK(std::abs(density - 1.0 / 21.0) <= 0.015);
  for (Eigen::Index j = 0; j < inst.n(); ++j) {
    CHECK(inst.weights()[j] > 0.0);
    CHECK(inst.weights()[j] < 1.0);
  }
  CHECK(inst.rhs().norm() > 0.0);
  CHECK(inst.beta() == inst.alpha() / 2.0);
  CHECK(inst.alpha() <= inst.kappa());

  const LassoInstance again = LassoInstance::generate(spec);
  CHECK(inst.alpha() == again.alpha());
  CHECK(inst.kappa() == again.kappa());
  CHECK(inst.weights() == again.weights());
  CHECK(inst.rhs() == again.rhs());
  REQUIRE(inst.c().nonZeros() == again.c().nonZeros());
  CHECK(Eigen::Map<const Vector>(inst.c().valuePtr(), inst.c().nonZeros()) ==
        Eigen::Map<const Vector>(again.c().valuePtr(), again.c().nonZeros()));

  const LassoInstance zero_b =
      LassoInstance::generate({300, 200, BMode::kZero, 99});
  CHECK(zero_b.rhs().isZero(0.0));
  // C and W streams do not depend on the b mode.
  CHECK(zero_b.weights() == inst.weights());
  CHECK(zero_b.alpha() == inst.alpha());

  const LassoInstance tiny = LassoInstance::generate({1, 1, BMode::kZero, 3});
  const double c00 = tiny.c().nonZeros() > 0 ? tiny.c().coeff(0, 0) : 0.0;
  CHECK(tiny.alpha() == doctest::Approx(c00 * c00).epsilon(1e-12));
}

TEST_CASE("eigen bounds against closed forms and the Jacobi oracle") {
  CHECK(eigen_bounds(sparse_identity(2)) ==
        std::pair<double, double>{1.0, 1.0});

  Eigen::MatrixXd diag = Eigen::MatrixXd::Zero(2, 2);
  diag(0, 0) = 1.0;
  diag(1, 1) = 2.0;
  const auto [lo, hi] = eigen_bounds(sparse_from_dense(diag));
  CHECK(lo == doctest::Approx(1.0));
  CHECK(hi == doctest::Approx(4.0));

  SplitRng rng(31, 0);
  for (int trial = 0; trial < 25; ++trial) {
    Eigen::MatrixXd d(5, 3);
    for (int i = 0; i < 5; ++i)
      for (int j = 0; j < 3; ++j) d(i, j) = rng.gaussian();
    const auto [a, k] = eigen_bounds(sparse_from_dense(d));
    const auto oracle =
        testing::jacobi_eigenvalues(d.transpose() * d);
    CHECK(std::abs(a - oracle.front()) <= 1e-8);
    CHECK(std::abs(k - oracle.back()) <= 1e-8);
  }
}

TEST_CASE("resolvent of the quadratic block") {
  // C = I, b = (3, 0): alpha = 1, system 1.5 I, so J_A(0) = (2, 0).
  Vector b(2);
  b << 3.0, 0.0;
  const LassoInstance inst = LassoInstance::from_data(
      sparse_identity(2), Vector::Ones(2), b, 0, BMode::kGaussian);
  CHECK(inst.alpha() == doctest::Approx(1.0));
  const Vector u = inst.resolvent_a(Vector::Zero(2));
  CHECK(u(0) == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(u(1) == 0.0);

  // b = 0: the origin is a fixed point of both resolvents, exactly.
  const LassoInstance zero = LassoInstance::from_data(
      sparse_identity(2), Vector::Ones(2), Vector::Zero(2), 0, BMode::kZero);
  CHECK(zero.resolvent_a(Vector::Zero(2)).norm() == 0.0);
  CHECK(zero.resolvent_b(Vector::Zero(2)).norm() == 0.0);

  // Defining equation u + A(u) = x on random instances.
  auto random = testing::acceptable_instance(200, 35, BMode::kGaussian, 44);
  SplitRng rng(8, 1);
  for (int trial = 0; trial < 100; ++trial) {
    Vector x(35);
    for (int i = 0; i < 35; ++i) x[i] = 6.0 * (rng.uniform() - 0.5);
    const Vector ju = random->resolvent_a(x);
    CHECK((ju + random->apply_a(ju) - x).norm() <= 1e-10 * (1.0 + x.norm()));
  }
}

TEST_CASE("resolvent of the threshold block") {
  Vector b = Vector::Zero(2);
  const LassoInstance inst = LassoInstance::from_data(
      sparse_identity(2), Vector::Ones(2), b, 0, BMode::kZero);
  REQUIRE(inst.alpha() == doctest::Approx(1.0));

  Vector x(2);
  x << 3.0, -0.5;
  const Vector v = inst.resolvent_b(x);
  CHECK(v(0) == doctest::Approx(4.0 / 3.0).epsilon(1e-15));
  CHECK(v(1) == 0.0);

  CHECK(inst.resolvent_b(Vector::Zero(2)).isZero(0.0));
  Vector small(2);
  small << 0.9, -0.99;  // below the unit weights
  CHECK(inst.resolvent_b(small).isZero(0.0));
}

TEST_CASE("threshold resolvent agrees with the 1-D prox oracle") {
  SplitRng rng(71, 0);
  for (int batch = 0; batch < 5; ++batch) {
    const Eigen::Index n = 20;
    Eigen::MatrixXd diag = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
      diag(i, i) = 0.4 + 1.6 * rng.uniform();
    Vector w(n);
    for (Eigen::Index i = 0; i < n; ++i) w[i] = rng.uniform_open();
    const LassoInstance inst = LassoInstance::from_data(
        sparse_from_dense(diag), w, Vector::Zero(n), 0, BMode::kZero);
    Vector x(n);
    for (Eigen::Index i = 0; i < n; ++i) x[i] = 8.0 * (rng.uniform() - 0.5);
    const Vector v = inst.resolvent_b(x);
    for (Eigen::Index i = 0; i < n; ++i) {
      const double oracle = prox_1d_oracle(x[i], w[i], inst.alpha() / 2.0);
      CHECK(std::abs(v[i] - oracle) <= 1e-8);
    }
  }
}

TEST_CASE("optimality residual") {
  Vector b(2);
  b << 3.0, 0.0;
  const LassoInstance inst = LassoInstance::from_data(
      sparse_identity(2), Vector::Ones(2), b, 0, BMode::kGaussian);
  Vector u(2);
  u << 2.0, 0.0;
  CHECK(inst.optimality_residual(u) == 0.0);

  const LassoInstance zero = LassoInstance::from_data(
      sparse_identity(2), Vector::Ones(2), Vector::Zero(2), 0, BMode::kZero);
  CHECK(zero.optimality_residual(Vector::Zero(2)) == 0.0);

  // End-to-end: a converged run's threshold-block output is optimal to 1e-3.
  auto random = testing::acceptable_instance(200, 40, BMode::kGaussian, 12);
  RunConfig config;
  config.theta = 2.0 + random->beta();
  const RunResult result =
      run(make_problem_pair(random), config, Vector::Ones(40));
  REQUIRE(result.terminated == Termination::kConverged);
  CHECK(random->optimality_residual(result.final_v) <= 1e-3);
}

TEST_CASE("serialization round-trips bit-exactly") {
  for (const GenSpec spec : {GenSpec{25, 18, BMode::kGaussian, 2024},
                             GenSpec{60, 9, BMode::kZero, 1},
                             GenSpec{300, 200, BMode::kGaussian, 7}}) {
    const LassoInstance inst = LassoInstance::generate(spec);
    std::ostringstream first;
    save_instance(inst, first);

    std::istringstream input(first.str());
    const LassoInstance loaded = load_instance(input);
    CHECK(loaded.m() == inst.m());
    CHECK(loaded.n() == inst.n());
    CHECK(loaded.seed() == inst.seed());
    CHECK(loaded.b_mode() == inst.b_mode());
    CHECK(loaded.alpha() == inst.alpha());
    CHECK(loaded.kappa() == inst.kappa());
    CHECK(loaded.weights() == inst.weights());
    CHECK(loaded.rhs() == inst.rhs());
    REQUIRE(loaded.c().nonZeros() == inst.c().nonZeros());
    CHECK(Eigen::Map<const Vector>(loaded.c().valuePtr(),
                                   loaded.c().nonZeros()) ==
          Eigen::Map<const Vector>(inst.c().valuePtr(), inst.c().nonZeros()));

    std::ostringstream second;
    save_instance(loaded, second);
    CHECK(first.str() == second.str());

    // A loaded instance behaves identically.
    Vector x = Vector::Ones(inst.n());
    CHECK((loaded.resolvent_a(x) - inst.resolvent_a(x)).norm() == 0.0);
    CHECK((loaded.resolvent_b(x) - inst.resolvent_b(x)).norm() == 0.0);
  }

  std::istringstream garbage("not-an-instance\n");
  CHECK_THROWS_AS(load_instance(garbage), InvalidArgument);
}

TEST_CASE("problem pair wrapper") {
  auto zero = std::make_shared<const LassoInstance>(LassoInstance::from_data(
      sparse_identity(2), Vector::Ones(2), Vector::Zero(2), 0, BMode::kZero));
  const ProblemPair pair = make_problem_pair(zero);
  CHECK(pair.beta() == doctest::Approx(0.5));
  REQUIRE(pair.known_solution().has_value());
  CHECK(pair.known_solution()->x_star.isZero(0.0));
  REQUIRE(pair.lipschitz_a().has_value());
  CHECK(*pair.lipschitz_a() == doctest::Approx(0.5));

  // A non-acceptable instance (zero matrix) cannot form a pair.
  SparseRowMajor empty(2, 2);
  auto flat = std::make_shared<const LassoInstance>(LassoInstance::from_data(
      empty, Vector::Ones(2), Vector::Zero(2), 0, BMode::kZero));
  CHECK_FALSE(flat->acceptable());
  CHECK_THROWS_AS(make_problem_pair(flat), InvalidArgument);
}

TEST_CASE("conjugate-gradient fallback matches the dense path") {
  const GenSpec spec{40, 30, BMode::kGaussian, 77};
  const LassoInstance dense = LassoInstance::generate(spec);
  const LassoInstance cg = LassoInstance::from_data(
      dense.c(), dense.weights(), dense.rhs(), spec.seed, spec.b_mode,
      SolveMode::kConjugateGradient);
  SplitRng rng(6, 6);
  for (int trial = 0; trial < 20; ++trial) {
    Vector x(30);
    for (int i = 0; i < 30; ++i) x[i] = 4.0 * (rng.uniform() - 0.5);
    CHECK((dense.resolvent_a(x) - cg.resolvent_a(x)).norm() <=
          1e-10 * (1.0 + x.norm()));
  }
}
