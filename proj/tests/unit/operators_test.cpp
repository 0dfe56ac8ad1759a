#include <doctest.h>

#include "prsplit/lasso.hpp"
#include "prsplit/operators.hpp"
#include "prsplit/rng.hpp"
#include "support/test_support.hpp"

using namespace prsplit;

namespace {

Vector random_vector(SplitRng& rng, Eigen::Index n, double scale = 2.0) {
  Vector v(n);
  for (Eigen::Index i = 0; i < n; ++i) v[i] = scale * (rng.uniform() - 0.5);
  return v;
}

}  // namespace

TEST_CASE("linear resolvent closed forms") {
  auto j0 = make_linear_operator(0.0, 2);
  Vector x(2);
  x << 5.0, -2.0;
  CHECK(j0(x) == x);

  auto j1 = make_linear_operator(1.0, 1);
  Vector y(1);
  y << 4.0;
  CHECK(j1(y)(0) == 2.0);

  auto j3 = make_linear_operator(3.0, 2);
  Vector z(2);
  z << 8.0, 8.0;
  CHECK(j3(z)(0) == 2.0);
  CHECK(j3(z)(1) == 2.0);

  CHECK_THROWS_AS(make_linear_operator(-0.5, 2), InvalidArgument);
  CHECK_THROWS_AS(j1(x), InvalidArgument);  // dimension mismatch
}

TEST_CASE("resolvents are deterministic and firmly nonexpansive") {
  SplitRng rng(11, 0);
  auto inst = testing::acceptable_instance(200, 25, BMode::kGaussian, 11);

  for (int trial = 0; trial < 50; ++trial) {
    const Vector x = random_vector(rng, 25, 4.0);
    const Vector y = random_vector(rng, 25, 4.0);
    CHECK((inst->resolvent_a(x) - inst->resolvent_a(x)).norm() == 0.0);

    for (auto resolvent : {&LassoInstance::resolvent_a,
                           &LassoInstance::resolvent_b}) {
      const Vector jx = (*inst.*resolvent)(x);
      const Vector jy = (*inst.*resolvent)(y);
      const double lhs = (jx - jy).squaredNorm();
      const double rhs = (jx - jy).dot(x - y);
      CHECK(lhs <= rhs + 1e-12);
    }
  }
}

TEST_CASE("scaled resolvents delegate to the base oracle") {
  // A(u) = u with beta = 1: the shifted/scaled resolvent at xbar equals
  // J_A(2 xbar).
  ProblemPair pair = testing::linear_pair(1.0, 1.0, 1);
  ScaledPair scaled(pair);
  Vector xbar(1);
  xbar << 1.0;
  CHECK(scaled.resolvent_a(xbar)(0) == 1.0);

  Vector zero = Vector::Zero(1);
  CHECK(scaled.resolvent_a(zero)(0) == 0.0);
  CHECK(scaled.resolvent_b(zero)(0) == 0.0);

  ProblemPair pair3 = testing::linear_pair(3.0, 3.0, 1, 1.0);
  ScaledPair scaled3(pair3);
  Vector two(1);
  two << 2.0;
  CHECK(scaled3.resolvent_a(two)(0) == 1.0);
  Vector minus_two(1);
  minus_two << -2.0;
  CHECK(scaled3.resolvent_b(minus_two)(0) == -1.0);

  // B(u) = u, beta = 1, ybar = 1 -> J_B(2) = 1.
  Vector one(1);
  one << 1.0;
  CHECK(scaled.resolvent_b(one)(0) == 1.0);

  // Scale identity on random fixtures.
  SplitRng rng(3, 1);
  for (int trial = 0; trial < 20; ++trial) {
    const double a = 0.2 + 3.0 * rng.uniform();
    const double beta = 0.1 + rng.uniform();
    ProblemPair p = testing::linear_pair(a, a, 4, beta);
    ScaledPair sp(p);
    const Vector xb = random_vector(rng, 4, 6.0);
    const Vector direct = p.resolvent_a()((1.0 + beta) * xb);
    CHECK((sp.resolvent_a(xb) - direct).norm() <= 1e-14);
  }
}

TEST_CASE("problem pair validation") {
  CHECK_THROWS_AS(ProblemPair(make_linear_operator(1.0, 2),
                              make_linear_operator(1.0, 2), 0.0),
                  InvalidArgument);
  CHECK_THROWS_AS(ProblemPair(make_linear_operator(1.0, 2),
                              make_linear_operator(1.0, 3), 1.0),
                  InvalidArgument);

  // Known solution must satisfy J_A(x*) = u*.
  Vector good = Vector::Zero(2);
  Vector bad = Vector::Ones(2);
  CHECK_NOTHROW(ProblemPair(make_linear_operator(1.0, 2),
                            make_linear_operator(1.0, 2), 1.0, std::nullopt,
                            std::nullopt, KnownSolution{good, good}));
  CHECK_THROWS_AS(ProblemPair(make_linear_operator(1.0, 2),
                              make_linear_operator(1.0, 2), 1.0, std::nullopt,
                              std::nullopt, KnownSolution{bad, good}),
                  InvalidArgument);
}

TEST_CASE("shifted lasso operators are strongly monotone with modulus beta") {
  auto inst = testing::acceptable_instance(200, 30, BMode::kGaussian, 5);
  const double beta = inst->beta();
  SplitRng rng(17, 4);

  for (int trial = 0; trial < 40; ++trial) {
    const Vector u = random_vector(rng, 30, 4.0);
    const Vector v = random_vector(rng, 30, 4.0);
    // A directly.
    const double gap_a = (inst->apply_a(u) - inst->apply_a(v)).dot(u - v) -
                         beta * (u - v).squaredNorm();
    CHECK(gap_a >= -1e-10);
    // B through prox-derived graph elements: x - J_B(x) in B(J_B(x)).
    const Vector ju = inst->resolvent_b(u);
    const Vector jv = inst->resolvent_b(v);
    const double gap_b = ((u - ju) - (v - jv)).dot(ju - jv) -
                         beta * (ju - jv).squaredNorm();
    CHECK(gap_b >= -1e-10);
  }
}
