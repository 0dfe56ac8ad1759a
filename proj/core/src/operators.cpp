#include "prsplit/operators.hpp"

namespace prsplit {

ResolventOracle make_linear_operator(double a, Eigen::Index n) {
  if (a < 0.0)
    throw InvalidArgument("linear operator modulus must be nonnegative");
  const double scale = 1.0 / (1.0 + a);
  return ResolventOracle(n, [scale](const Vector& x) -> Vector {
    return scale * x;
  });
}

ProblemPair::ProblemPair(ResolventOracle resolvent_a, ResolventOracle resolvent_b,
                         double beta, std::optional<double> lipschitz_a,
                         std::optional<double> lipschitz_b,
                         std::optional<KnownSolution> known_solution)
    : resolvent_a_(std::move(resolvent_a)),
      resolvent_b_(std::move(resolvent_b)),
      beta_(beta),
      lipschitz_a_(lipschitz_a),
      lipschitz_b_(lipschitz_b),
      known_solution_(std::move(known_solution)) {
  if (!(beta_ > 0.0))
    throw InvalidArgument("strong-monotonicity modulus beta must be positive");
  if (resolvent_a_.dimension() != resolvent_b_.dimension())
    throw InvalidArgument("operator pair dimensions differ");
  if (lipschitz_a_ && *lipschitz_a_ < 0.0)
    throw InvalidArgument("Lipschitz constant for A must be nonnegative");
  if (lipschitz_b_ && *lipschitz_b_ < 0.0)
    throw InvalidArgument("Lipschitz constant for B must be nonnegative");
  if (known_solution_) {
    const auto& ks = *known_solution_;
    if (ks.u_star.size() != dimension() || ks.x_star.size() != dimension())
      throw InvalidArgument("known solution has wrong dimension");
    const double err = (resolvent_a_(ks.x_star) - ks.u_star).norm();
    if (!(err <= 1e-8 * (1.0 + ks.x_star.norm())))
      throw InvalidArgument(
          "known solution is inconsistent: J_A(x_star) != u_star");
  }
}

}  // namespace prsplit
