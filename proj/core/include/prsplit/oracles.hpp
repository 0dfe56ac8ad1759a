#pragma once

#include <cstdint>

namespace prsplit {

/// Golden-section minimizer of 0.5 (1+s) v^2 - x v + w |v| over
/// [-|x|, |x|], accurate to about 1e-10.  Independent reference for the
/// closed-form weighted soft-threshold resolvent (s plays the role of the
/// quadratic shift alpha/2).
double prox_1d_oracle(double x, double w, double s);

struct GridMaxResult {
  double max_value;
  double arg_x;
  double arg_y;
};

/// Brute-force maximum of
///   (1-beta)/(1+beta) x^2 + (3 beta - eps - 2)/(2+beta+eps) x y
///   + 2 (1+beta)(eps-beta)/(2+beta+eps)^2 y^2
/// over the grid [-limit, limit]^2 restricted to the cone x y >= x^2.
/// The maximum is zero at the origin for 0 < eps < min(beta, 1/beta); the
/// grid scan corroborates the sign numerically.
GridMaxResult grid_max_coupling_form(double beta, double eps,
                                     double grid_step, double limit = 10.0);

struct GammaBoundCheck {
  double grid_max;
  double bound;
  bool holds;  // grid_max <= bound + 1e-9
};

/// Grid maximum of -x^2 + x y over x >= 0 and y^2 <= L^2/(1+beta)^2 - 1 + 2y,
/// checked against the bound 0.25 (1 + L/(1+beta))^2.  Certifies the gamma
/// cap used when the single-valued block is L-Lipschitz.
GammaBoundCheck gamma_bound_grid_a(double beta, double lipschitz,
                                   double grid_step, double limit = 20.0);

/// Grid maximum of
///   -y^2 + 4/(1+beta) y + 2 x y + (L^2/(1+beta)^2 - 1) x^2 - 4/(1+beta)^2
/// over x, y >= 0, checked against zero.  Requires L < 1 + beta; certifies
/// gamma <= 0 when the multivalued block is L-Lipschitz.
GammaBoundCheck gamma_bound_grid_b(double beta, double lipschitz,
                                   double grid_step, double limit = 20.0);

struct LinearPairSolution {
  double u_star;
  double x_star;
};

/// Brute-force scan for the root of (a + b) u over [-10, 10]; ground truth
/// (0, 0) for the 1-D linear fixtures A(u) = a u, B(u) = b u.
LinearPairSolution linear_pair_bruteforce(double a, double b);

}  // namespace prsplit
