#include "prsplit/engine.hpp"

#include <algorithm>
#include <cmath>

#include "prsplit/errors.hpp"

namespace prsplit {

namespace {

void require_finite(const Vector& value, const char* what, long iteration) {
  if (!value.allFinite())
    throw NumericalFailure(std::string("non-finite ") + what, iteration);
}

}  // namespace

void RunConfig::validate() const {
  if (!(theta > 0.0)) throw InvalidArgument("theta must be positive");
  if (!(tol > 0.0)) throw InvalidArgument("tol must be positive");
  if (max_iters < 1) throw InvalidArgument("max_iters must be at least 1");
}

StepResult step(const ProblemPair& pair, const RunConfig& config,
                const Vector& x_prev) {
  config.validate();
  if (x_prev.size() != pair.dimension())
    throw InvalidArgument("step: iterate has wrong dimension");
  StepResult r;
  r.u = pair.resolvent_a()(x_prev);
  require_finite(r.u, "A-resolvent output", 0);
  r.v = pair.resolvent_b()(2.0 * r.u - x_prev);
  require_finite(r.v, "B-resolvent output", 0);
  r.x_next = x_prev + config.theta * (r.v - r.u);
  require_finite(r.x_next, "iterate", 0);
  return r;
}

StepResult step_scaled(const ScaledPair& scaled, const RunConfig& config,
                       const Vector& scaled_x_prev) {
  config.validate();
  const double beta = scaled.beta();
  if (scaled_x_prev.size() != scaled.base().dimension())
    throw InvalidArgument("step_scaled: iterate has wrong dimension");
  StepResult r;
  r.u = scaled.resolvent_a(scaled_x_prev);
  require_finite(r.u, "A-resolvent output", 0);
  r.v = scaled.resolvent_b((2.0 / (1.0 + beta)) * r.u - scaled_x_prev);
  require_finite(r.v, "B-resolvent output", 0);
  r.x_next = scaled_x_prev + config.theta / (1.0 + beta) * (r.v - r.u);
  require_finite(r.x_next, "iterate", 0);
  return r;
}

RunResult run(const ProblemPair& pair, const RunConfig& config,
              const Vector& x0) {
  config.validate();
  if (x0.size() != pair.dimension())
    throw InvalidArgument("run: x0 has wrong dimension");
  if (!x0.allFinite()) throw InvalidArgument("run: x0 must be finite");

  const double beta = pair.beta();
  const double theta = config.theta;
  const double eps = config.epsilon_for(beta);
  const double inv_scale = 1.0 / (1.0 + beta);

  const bool have_star = pair.known_solution().has_value();
  Vector scaled_x_star;
  if (have_star) scaled_x_star = inv_scale * pair.known_solution()->x_star;

  RunResult result;
  if (config.record_trace)
    result.trace.reserve(static_cast<std::size_t>(config.max_iters));

  Vector x = x0;
  // Resolvent outputs at the current iterate; the next step reuses them, so
  // each loop turn costs a single resolvent pair.
  Vector u = pair.resolvent_a()(x);
  require_finite(u, "A-resolvent output", 0);
  Vector v = pair.resolvent_b()(2.0 * u - x);
  require_finite(v, "B-resolvent output", 0);

  double prev_dist2 = 0.0;
  if (have_star) prev_dist2 = (inv_scale * x - scaled_x_star).squaredNorm();

  for (long k = 1; k <= config.max_iters; ++k) {
    Vector x_next = x + theta * (v - u);
    require_finite(x_next, "iterate", k);
    const double residual = (x_next - x).norm();

    Vector u_next = pair.resolvent_a()(x_next);
    require_finite(u_next, "A-resolvent output", k);
    Vector v_next = pair.resolvent_b()(2.0 * u_next - x_next);
    require_finite(v_next, "B-resolvent output", k);

    double curr_dist2 = 0.0;
    Vector scaled_x_next = inv_scale * x_next;
    if (have_star) curr_dist2 = (scaled_x_next - scaled_x_star).squaredNorm();

    if (config.record_trace) {
      IterateTrace entry;
      entry.k = k;
      entry.x = x_next;
      entry.scaled_x = scaled_x_next;
      entry.u = u_next;
      entry.v = v_next;
      entry.w = (2.0 * inv_scale) * u_next - entry.scaled_x - v_next;
      GammaDecomposition d = decompose_gamma(u_next, v_next);
      entry.gamma = d.gamma;
      entry.tau = d.tau;
      entry.z_unit = std::move(d.z_unit);
      entry.degenerate_decomposition = d.degenerate;
      entry.residual = residual;
      if (have_star) {
        entry.alpha =
            compute_alpha(inv_scale * x, entry.scaled_x, scaled_x_star);
        entry.slack_a = slack_monotone_a(entry.scaled_x, u_next, scaled_x_star);
        entry.slack_b =
            slack_monotone_b(entry.scaled_x, u_next, v_next, scaled_x_star, beta);
        entry.slack_rate =
            slack_rate_inequality(prev_dist2, curr_dist2, u, v, beta, eps, theta);
        entry.min_abs_dev =
            (entry.scaled_x - scaled_x_star).cwiseAbs().minCoeff();
      }
      result.trace.push_back(std::move(entry));
    }

    x = std::move(x_next);
    u = std::move(u_next);
    v = std::move(v_next);
    prev_dist2 = curr_dist2;

    if (residual <= config.tol) {
      result.iterates_used = k;
      result.terminated = Termination::kConverged;
      result.final_x = std::move(x);
      result.final_u = std::move(u);
      result.final_v = std::move(v);
      return result;
    }
  }

  result.iterates_used = config.max_iters;
  result.terminated = Termination::kMaxItersExceeded;
  result.final_x = std::move(x);
  result.final_u = std::move(u);
  result.final_v = std::move(v);
  return result;
}

double theta_upper(double beta) {
  if (!(beta > 0.0)) throw InvalidArgument("beta must be positive");
  return 2.0 + beta + std::min(beta, 1.0 / beta);
}

double theta_mid(double beta) {
  if (!(beta > 0.0)) throw InvalidArgument("beta must be positive");
  return 2.0 + beta + 0.5 * std::min(beta, 1.0 / beta);
}

double theta_probe(double beta) { return theta_upper(beta) + 0.05; }

}  // namespace prsplit
