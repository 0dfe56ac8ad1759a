#pragma once

#include <Eigen/Core>
#include <limits>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "prsplit/operators.hpp"

namespace prsplit {

/// Per-iteration record of one completed step k (k >= 1).
///
/// `x` is the governing iterate x_k, `scaled_x` its scaled companion
/// x_k / (1+beta).  `u` and `v` are the resolvent outputs evaluated at x_k:
/// u = J_A(x_k), v = J_B(2u - x_k); they coincide with the shifted/scaled
/// resolvent outputs at scaled_x, so all scaled-analysis quantities are
/// formed from them directly.  `w` is the element of the shifted/scaled
/// B-graph at v: w = (2/(1+beta)) u - scaled_x - v.
///
/// Fields that need the fixed point (alpha, slacks, min_abs_dev) are NaN /
/// empty if the run had no known solution.
struct IterateTrace {
  long k = 0;
  Vector x;
  Vector scaled_x;
  Vector u;
  Vector v;
  Vector w;
  /// Componentwise ratio (scaled_x_k - xs) / (scaled_x_{k-1} - xs);
  /// +inf encodes a vanished denominator.  Empty when xs is unknown.
  Vector alpha;
  double gamma = 0.0;
  double tau = 0.0;
  /// Unit vector of the decomposition v = -gamma u + tau z; empty when
  /// tau == 0 (collinear case).
  Vector z_unit;
  /// True when u == 0 exactly, where the gamma formula is vacuous and the
  /// convention gamma = 0, tau = |v| applies.
  bool degenerate_decomposition = false;
  double residual = 0.0;  // |x_k - x_{k-1}|
  double slack_a = std::numeric_limits<double>::quiet_NaN();
  double slack_b = std::numeric_limits<double>::quiet_NaN();
  double slack_rate = std::numeric_limits<double>::quiet_NaN();
  double min_abs_dev = std::numeric_limits<double>::quiet_NaN();
};

struct AssumptionReport {
  bool satisfied = true;
  /// (iteration k, coordinate i) of the first exact hit, if any.
  std::optional<std::pair<long, Eigen::Index>> first_violation;
  double min_abs_deviation = std::numeric_limits<double>::infinity();
};

struct RateCertificate {
  /// Max of gamma_k over the trailing half of the trace; finite-run proxy
  /// for the limit superior.
  double gamma_bar = 0.0;
  /// min_{k0 <= i <= k} |x_i - x_{i-1}| * sqrt(k) at the final k.
  double pointwise_stat = 0.0;
  /// Geometric-mean per-step contraction of |x_k - x_star| over the
  /// trailing half; NaN when x_star is unknown, 0 on degenerate traces.
  double rlinear_ratio = std::numeric_limits<double>::quiet_NaN();
  /// (sqrt(beta) - sqrt(eps)) / (sqrt(beta) + sqrt(eps)) for eps > 0,
  /// +inf otherwise.
  double theoretical_gamma_bound = std::numeric_limits<double>::infinity();
};

struct GammaDecomposition {
  double gamma = 0.0;
  double tau = 0.0;
  Vector z_unit;  // empty when tau == 0
  bool degenerate = false;
};

/// Componentwise step ratio against the scaled fixed point.  A zero
/// denominator maps to +inf regardless of the numerator.
Vector compute_alpha(const Vector& scaled_x_prev, const Vector& scaled_x_next,
                     const Vector& scaled_x_star);

/// Splits v into -gamma*u plus an orthogonal remainder tau*z with |z| = 1.
/// For u != 0, gamma = -<u, v> / |u|^2.  For u == 0 the decomposition is
/// vacuous; the convention gamma = 0, tau = |v| is used and flagged.
GammaDecomposition decompose_gamma(const Vector& u, const Vector& v);

/// <scaled_x - xs, u> - |u|^2; nonnegative for monotone A.
double slack_monotone_a(const Vector& scaled_x, const Vector& u,
                        const Vector& scaled_x_star);

/// (2/(1+beta)) <u, v> - |v|^2 - <scaled_x - xs, v>; nonnegative for
/// monotone B.
double slack_monotone_b(const Vector& scaled_x, const Vector& u,
                        const Vector& v, const Vector& scaled_x_star,
                        double beta);

/// ((1+beta)^2/theta) (d_{k-1} - d_k) - 4 beta <u,v> - (beta-eps)|u-v|^2,
/// where d are squared scaled distances to the fixed point and (u, v) are
/// the previous step's resolvent outputs.  Nonnegative whenever
/// 0 <= eps < min(beta, 1/beta).
double slack_rate_inequality(double prev_scaled_dist2, double curr_scaled_dist2,
                             const Vector& u_prev, const Vector& v_prev,
                             double beta, double eps, double theta);

/// max(L/(1+beta) + 1, 2/(1+beta)).
double lipschitz_envelope(double lipschitz, double beta);

enum class LipschitzSide { kA, kB };

/// Lbar (|u| + |v|) - |scaled_x - xs|; nonnegative when the named operator
/// really is Lipschitz with the given constant.  The bound has the same
/// form for both sides; the tag records which operator the claim is about.
double lipschitz_slack(const IterateTrace& entry, double lipschitz,
                       LipschitzSide side, const Vector& scaled_x_star,
                       double beta);

/// Exact floating-point scan of the recorded iterates for a coordinate that
/// hits the scaled fixed point.  The initial point is not part of the trace
/// and is not tested.
AssumptionReport check_assumption(std::span<const IterateTrace> trace,
                                  const Vector& scaled_x_star);

/// Summary rate statistics over a recorded trace.  `x_star` (unscaled) is
/// needed only for the contraction ratio.  `k0` is clamped into the trace
/// range.
RateCertificate rate_statistics(std::span<const IterateTrace> trace,
                                const std::optional<Vector>& x_star, long k0,
                                double beta, double eps);

/// Threshold (sqrt(beta)-sqrt(eps))/(sqrt(beta)+sqrt(eps)) for eps > 0,
/// +inf otherwise.
double theoretical_gamma_bound(double beta, double eps);

/// The rate constant min{M1 (beta-eps), f(g)(1-M1)(beta-eps) /
/// (8 (beta+eps) max(g,1))} with f(g) = -2(beta+eps) g + (beta-eps)(1+g^2),
/// evaluated at the empirical gamma_bar surrogate g.
double rate_constant(double beta, double eps, double gamma_bar, double m1);

/// Trajectory k -> min_{k0 <= i <= k} residual_i * sqrt(k) over the trace.
std::vector<double> pointwise_stat_trajectory(std::span<const IterateTrace> trace,
                                              long k0);

}  // namespace prsplit
