#include "prsplit/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "prsplit/errors.hpp"

namespace prsplit {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

Vector compute_alpha(const Vector& scaled_x_prev, const Vector& scaled_x_next,
                     const Vector& scaled_x_star) {
  if (scaled_x_prev.size() != scaled_x_next.size() ||
      scaled_x_prev.size() != scaled_x_star.size())
    throw InvalidArgument("compute_alpha: dimension mismatch");
  Vector alpha(scaled_x_prev.size());
  for (Eigen::Index i = 0; i < alpha.size(); ++i) {
    const double den = scaled_x_prev[i] - scaled_x_star[i];
    if (den == 0.0) {
      alpha[i] = kInf;
    } else {
      alpha[i] = (scaled_x_next[i] - scaled_x_star[i]) / den;
    }
  }
  return alpha;
}

GammaDecomposition decompose_gamma(const Vector& u, const Vector& v) {
  GammaDecomposition d;
  const double un2 = u.squaredNorm();
  if (un2 == 0.0) {
    d.gamma = 0.0;
    d.tau = v.norm();
    d.degenerate = true;
    if (d.tau > 0.0) d.z_unit = v / d.tau;
    return d;
  }
  d.gamma = -u.dot(v) / un2;
  Vector r = v + d.gamma * u;
  d.tau = r.norm();
  if (d.tau > 0.0) d.z_unit = r / d.tau;
  return d;
}

double slack_monotone_a(const Vector& scaled_x, const Vector& u,
                        const Vector& scaled_x_star) {
  return (scaled_x - scaled_x_star).dot(u) - u.squaredNorm();
}

double slack_monotone_b(const Vector& scaled_x, const Vector& u,
                        const Vector& v, const Vector& scaled_x_star,
                        double beta) {
  return (2.0 / (1.0 + beta)) * u.dot(v) - v.squaredNorm() -
         (scaled_x - scaled_x_star).dot(v);
}

double slack_rate_inequality(double prev_scaled_dist2, double curr_scaled_dist2,
                             const Vector& u_prev, const Vector& v_prev,
                             double beta, double eps, double theta) {
  const double lhs = 4.0 * beta * u_prev.dot(v_prev) +
                     (beta - eps) * (u_prev - v_prev).squaredNorm();
  const double rhs = (1.0 + beta) * (1.0 + beta) / theta *
                     (prev_scaled_dist2 - curr_scaled_dist2);
  return rhs - lhs;
}

double lipschitz_envelope(double lipschitz, double beta) {
  return std::max(lipschitz / (1.0 + beta) + 1.0, 2.0 / (1.0 + beta));
}

double lipschitz_slack(const IterateTrace& entry, double lipschitz,
                       LipschitzSide /*side*/, const Vector& scaled_x_star,
                       double beta) {
  if (lipschitz < 0.0)
    throw InvalidArgument("lipschitz_slack: constant must be nonnegative");
  // The envelope bound has the same closed form whichever operator carries
  // the Lipschitz property; the side tag only documents the claim.
  const double lbar = lipschitz_envelope(lipschitz, beta);
  return lbar * (entry.u.norm() + entry.v.norm()) -
         (entry.scaled_x - scaled_x_star).norm();
}

AssumptionReport check_assumption(std::span<const IterateTrace> trace,
                                  const Vector& scaled_x_star) {
  AssumptionReport report;
  for (const auto& entry : trace) {
    if (entry.scaled_x.size() != scaled_x_star.size())
      throw InvalidArgument("check_assumption: dimension mismatch");
    for (Eigen::Index i = 0; i < scaled_x_star.size(); ++i) {
      const double dev = std::abs(entry.scaled_x[i] - scaled_x_star[i]);
      report.min_abs_deviation = std::min(report.min_abs_deviation, dev);
      if (entry.scaled_x[i] == scaled_x_star[i] && report.satisfied) {
        report.satisfied = false;
        report.first_violation = {entry.k, i};
      }
    }
  }
  return report;
}

double theoretical_gamma_bound(double beta, double eps) {
  if (eps > 0.0)
    return (std::sqrt(beta) - std::sqrt(eps)) / (std::sqrt(beta) + std::sqrt(eps));
  return kInf;
}

double rate_constant(double beta, double eps, double gamma_bar, double m1) {
  if (!(m1 > 0.0 && m1 < 1.0))
    throw InvalidArgument("rate_constant: m1 must lie in (0, 1)");
  const double f = -2.0 * (beta + eps) * gamma_bar +
                   (beta - eps) * (1.0 + gamma_bar * gamma_bar);
  const double first = m1 * (beta - eps);
  const double second = f * (1.0 - m1) * (beta - eps) /
                        (8.0 * (beta + eps) * std::max(gamma_bar, 1.0));
  return std::min(first, second);
}

RateCertificate rate_statistics(std::span<const IterateTrace> trace,
                                const std::optional<Vector>& x_star, long k0,
                                double beta, double eps) {
  RateCertificate cert;
  cert.theoretical_gamma_bound = theoretical_gamma_bound(beta, eps);
  if (trace.empty()) return cert;

  const std::size_t n = trace.size();
  const std::size_t tail_start = n / 2;

  cert.gamma_bar = -kInf;
  for (std::size_t i = tail_start; i < n; ++i)
    cert.gamma_bar = std::max(cert.gamma_bar, trace[i].gamma);
  cert.gamma_bar += 0.0;  // normalize -0

  const long last_k = trace.back().k;
  const long k0_eff = std::clamp<long>(k0, trace.front().k, last_k);
  double min_res = kInf;
  for (const auto& entry : trace)
    if (entry.k >= k0_eff) min_res = std::min(min_res, entry.residual);
  cert.pointwise_stat = min_res * std::sqrt(static_cast<double>(last_k));

  bool all_zero = true;
  for (const auto& entry : trace)
    if (entry.residual != 0.0) all_zero = false;

  if (x_star) {
    if (all_zero) {
      cert.rlinear_ratio = 0.0;
      return cert;
    }
    double log_sum = 0.0;
    long count = 0;
    for (std::size_t i = std::max<std::size_t>(tail_start, 1); i < n; ++i) {
      const double prev = (trace[i - 1].x - *x_star).norm();
      const double curr = (trace[i].x - *x_star).norm();
      if (prev == 0.0) continue;
      if (curr == 0.0) {
        cert.rlinear_ratio = 0.0;
        return cert;
      }
      log_sum += std::log(curr / prev);
      ++count;
    }
    cert.rlinear_ratio = count > 0 ? std::exp(log_sum / count) : 0.0;
  }
  return cert;
}

std::vector<double> pointwise_stat_trajectory(std::span<const IterateTrace> trace,
                                              long k0) {
  std::vector<double> stats;
  stats.reserve(trace.size());
  double min_res = kInf;
  for (const auto& entry : trace) {
    if (entry.k >= k0) min_res = std::min(min_res, entry.residual);
    const double m = (min_res == kInf) ? entry.residual : min_res;
    stats.push_back(m * std::sqrt(static_cast<double>(entry.k)));
  }
  return stats;
}

}  // namespace prsplit
