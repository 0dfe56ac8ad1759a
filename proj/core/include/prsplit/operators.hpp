#pragma once

#include <Eigen/Core>
#include <functional>
#include <optional>
#include <utility>

#include "prsplit/errors.hpp"

namespace prsplit {

using Vector = Eigen::VectorXd;

/// A maximal monotone operator represented purely through its resolvent
/// J = (I + T)^{-1} at unit step.  The map must be deterministic; for
/// monotone T it is single-valued and firmly nonexpansive.
class ResolventOracle {
 public:
  using Map = std::function<Vector(const Vector&)>;

  ResolventOracle(Eigen::Index dimension, Map map)
      : dimension_(dimension), map_(std::move(map)) {
    if (dimension_ <= 0) throw InvalidArgument("oracle dimension must be positive");
    if (!map_) throw InvalidArgument("oracle map must be callable");
  }

  Eigen::Index dimension() const { return dimension_; }

  Vector operator()(const Vector& x) const {
    if (x.size() != dimension_)
      throw InvalidArgument("resolvent input has wrong dimension");
    return map_(x);
  }

 private:
  Eigen::Index dimension_;
  Map map_;
};

/// Resolvent of the linear operator T(u) = a*u, i.e. J(x) = x / (1 + a).
/// The operator is a-strongly monotone; used as a closed-form test fixture.
ResolventOracle make_linear_operator(double a, Eigen::Index n);

struct KnownSolution {
  Vector u_star;  // solution of 0 in (A + B)(u)
  Vector x_star;  // fixed point of the iteration, J_A(x_star) = u_star
};

/// The operator pair (A, B) of a strongly monotone inclusion, entered via
/// resolvents, together with the shared strong-monotonicity modulus.
class ProblemPair {
 public:
  ProblemPair(ResolventOracle resolvent_a, ResolventOracle resolvent_b,
              double beta,
              std::optional<double> lipschitz_a = std::nullopt,
              std::optional<double> lipschitz_b = std::nullopt,
              std::optional<KnownSolution> known_solution = std::nullopt);

  const ResolventOracle& resolvent_a() const { return resolvent_a_; }
  const ResolventOracle& resolvent_b() const { return resolvent_b_; }
  double beta() const { return beta_; }
  Eigen::Index dimension() const { return resolvent_a_.dimension(); }
  const std::optional<double>& lipschitz_a() const { return lipschitz_a_; }
  const std::optional<double>& lipschitz_b() const { return lipschitz_b_; }
  const std::optional<KnownSolution>& known_solution() const {
    return known_solution_;
  }

 private:
  ResolventOracle resolvent_a_;
  ResolventOracle resolvent_b_;
  double beta_;
  std::optional<double> lipschitz_a_;
  std::optional<double> lipschitz_b_;
  std::optional<KnownSolution> known_solution_;
};

/// Shift/scale view of a pair: resolvents of (A - beta*I)/(1 + beta) and
/// (B - beta*I)/(1 + beta).
///
/// Both are evaluated by delegation to the base resolvents.  For any T and
/// u = J_{(T - beta I)/(1+beta)}(x), the defining inclusion
///   x - u in (T(u) - beta u) / (1 + beta)
/// rescales to (1+beta) x in u + T(u), i.e. u = J_T((1+beta) x).  There is
/// never a second oracle for the shifted operators.
class ScaledPair {
 public:
  explicit ScaledPair(ProblemPair base) : base_(std::move(base)) {}

  /// J of the shifted/scaled A at the scaled point.
  Vector resolvent_a(const Vector& scaled_x) const {
    return base_.resolvent_a()((1.0 + base_.beta()) * scaled_x);
  }

  /// J of the shifted/scaled B at an already-formed scaled argument.
  Vector resolvent_b(const Vector& scaled_y) const {
    return base_.resolvent_b()((1.0 + base_.beta()) * scaled_y);
  }

  const ProblemPair& base() const { return base_; }
  double beta() const { return base_.beta(); }

 private:
  ProblemPair base_;
};

}  // namespace prsplit
