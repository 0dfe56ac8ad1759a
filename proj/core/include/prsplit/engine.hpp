#pragma once

#include <Eigen/Core>
#include <vector>

#include "prsplit/diagnostics.hpp"
#include "prsplit/operators.hpp"

namespace prsplit {

enum class Termination { kConverged, kMaxItersExceeded };

/// Parameters of one relaxed splitting run.
struct RunConfig {
  double theta = 2.0;
  double tol = 1e-5;       // stop when |x_k - x_{k-1}| <= tol
  long max_iters = 1000;
  bool record_trace = false;

  /// The offset of theta past 2 + beta; negative below that point.
  double epsilon_for(double beta) const { return theta - (2.0 + beta); }

  void validate() const;
};

struct StepResult {
  Vector x_next;
  Vector u;  // J_A at the step's starting point
  Vector v;  // J_B(2u - x) at the step's starting point
};

/// One iteration of x <- x + theta (J_B(2 J_A(x) - x) - J_A(x)).
StepResult step(const ProblemPair& pair, const RunConfig& config,
                const Vector& x_prev);

/// One iteration of the shift/scaled form,
/// xbar <- xbar + theta/(1+beta) (Jb0((2/(1+beta)) u - xbar) - u) with
/// u = Ja0(xbar).  Kept for cross-validation against `step`.
StepResult step_scaled(const ScaledPair& scaled, const RunConfig& config,
                       const Vector& scaled_x_prev);

struct RunResult {
  long iterates_used = 0;
  Termination terminated = Termination::kMaxItersExceeded;
  Vector final_x;
  Vector final_u;  // J_A(final_x)
  Vector final_v;  // J_B(2 final_u - final_x); carries the prox's exact zeros
  std::vector<IterateTrace> trace;  // entries k = 1..iterates_used if recorded
};

/// Runs the unscaled iteration from x0 until the residual stopping rule or
/// the iteration cap fires.  With record_trace set, every completed step
/// appends an IterateTrace; fixed-point-dependent fields are filled only
/// when the pair carries a known solution.
RunResult run(const ProblemPair& pair, const RunConfig& config,
              const Vector& x0);

/// Largest relaxation below the known nonconvergence threshold:
/// 2 + beta + min(beta, 1/beta).
double theta_upper(double beta);

/// Midpoint setting 2 + beta + 0.5 min(beta, 1/beta).
double theta_mid(double beta);

/// Probe just past the nonconvergence threshold: theta_upper + 0.05.
double theta_probe(double beta);

}  // namespace prsplit
