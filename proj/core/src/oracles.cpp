#include "prsplit/oracles.hpp"

#include <cmath>
#include <limits>

#include "prsplit/errors.hpp"

namespace prsplit {

namespace {

constexpr double kGoldenRatioConjugate = 0.6180339887498949;

long half_points(double limit, double step) {
  return static_cast<long>(std::llround(limit / step));
}

}  // namespace

double prox_1d_oracle(double x, double w, double s) {
  if (w < 0.0) throw InvalidArgument("prox_1d_oracle: w must be nonnegative");
  if (!(s > -1.0)) throw InvalidArgument("prox_1d_oracle: s must exceed -1");
  if (x == 0.0) return 0.0;

  // Extended precision keeps the comparison noise floor (~sqrt(eps) of the
  // function scale) well below the requested minimizer tolerance.
  const auto objective = [&](double v) -> long double {
    const long double vl = v;
    return 0.5L * (1.0L + static_cast<long double>(s)) * vl * vl -
           static_cast<long double>(x) * vl +
           static_cast<long double>(w) * (vl < 0.0L ? -vl : vl);
  };

  double lo = -std::abs(x);
  double hi = std::abs(x);
  double m1 = hi - kGoldenRatioConjugate * (hi - lo);
  double m2 = lo + kGoldenRatioConjugate * (hi - lo);
  long double f1 = objective(m1);
  long double f2 = objective(m2);
  while (hi - lo > 1e-11) {
    if (f1 <= f2) {
      hi = m2;
      m2 = m1;
      f2 = f1;
      m1 = hi - kGoldenRatioConjugate * (hi - lo);
      f1 = objective(m1);
    } else {
      lo = m1;
      m1 = m2;
      f1 = f2;
      m2 = lo + kGoldenRatioConjugate * (hi - lo);
      f2 = objective(m2);
    }
  }
  return 0.5 * (lo + hi);
}

GridMaxResult grid_max_coupling_form(double beta, double eps, double grid_step,
                                     double limit) {
  if (!(beta > 0.0))
    throw InvalidArgument("grid_max_coupling_form: beta must be positive");
  if (!(eps > 0.0 && eps < std::min(beta, 1.0 / beta)))
    throw InvalidArgument(
        "grid_max_coupling_form: need 0 < eps < min(beta, 1/beta)");
  if (!(grid_step > 0.0))
    throw InvalidArgument("grid_max_coupling_form: step must be positive");

  const double denom = 2.0 + beta + eps;
  const double ca = (1.0 - beta) / (1.0 + beta);
  const double cb = (3.0 * beta - eps - 2.0) / denom;
  const double cc = 2.0 * (1.0 + beta) * (eps - beta) / (denom * denom);

  const long half = half_points(limit, grid_step);
  GridMaxResult best{-std::numeric_limits<double>::infinity(), 0.0, 0.0};
  for (long i = -half; i <= half; ++i) {
    const double x = static_cast<double>(i) * grid_step;
    const double xx = x * x;
    for (long j = -half; j <= half; ++j) {
      const double y = static_cast<double>(j) * grid_step;
      if (x * y < xx) continue;
      const double value = ca * xx + cb * x * y + cc * y * y;
      if (value > best.max_value) best = {value, x, y};
    }
  }
  return best;
}

GammaBoundCheck gamma_bound_grid_a(double beta, double lipschitz,
                                   double grid_step, double limit) {
  if (!(beta > 0.0) || lipschitz < 0.0 || !(grid_step > 0.0))
    throw InvalidArgument("gamma_bound_grid_a: bad parameters");
  const double ratio = lipschitz / (1.0 + beta);
  const double cap = ratio * ratio - 1.0;
  const long points = half_points(limit, grid_step);

  double max_value = -std::numeric_limits<double>::infinity();
  for (long j = 0; j <= points; ++j) {
    const double y = static_cast<double>(j) * grid_step;
    if (y * y > cap + 2.0 * y) continue;
    for (long i = 0; i <= points; ++i) {
      const double x = static_cast<double>(i) * grid_step;
      max_value = std::max(max_value, -x * x + x * y);
    }
  }
  const double bound = 0.25 * (1.0 + ratio) * (1.0 + ratio);
  return {max_value, bound, max_value <= bound + 1e-9};
}

GammaBoundCheck gamma_bound_grid_b(double beta, double lipschitz,
                                   double grid_step, double limit) {
  if (!(beta > 0.0) || lipschitz < 0.0 || !(grid_step > 0.0))
    throw InvalidArgument("gamma_bound_grid_b: bad parameters");
  if (!(lipschitz < 1.0 + beta))
    throw InvalidArgument("gamma_bound_grid_b: requires L < 1 + beta");
  const double ratio = lipschitz / (1.0 + beta);
  const double cx = ratio * ratio - 1.0;
  const double offset = 4.0 / ((1.0 + beta) * (1.0 + beta));
  const long points = half_points(limit, grid_step);

  double max_value = -std::numeric_limits<double>::infinity();
  for (long j = 0; j <= points; ++j) {
    const double y = static_cast<double>(j) * grid_step;
    for (long i = 0; i <= points; ++i) {
      const double x = static_cast<double>(i) * grid_step;
      const double value = -y * y + 4.0 / (1.0 + beta) * y + 2.0 * x * y +
                           cx * x * x - offset;
      max_value = std::max(max_value, value);
    }
  }
  return {max_value, 0.0, max_value <= 1e-9};
}

LinearPairSolution linear_pair_bruteforce(double a, double b) {
  if (!(a > 0.0) || !(b > 0.0))
    throw InvalidArgument("linear_pair_bruteforce: moduli must be positive");
  const double step = 1e-3;
  const long half = half_points(10.0, step);
  double best_u = 0.0;
  double best_mag = std::numeric_limits<double>::infinity();
  for (long i = -half; i <= half; ++i) {
    const double u = static_cast<double>(i) * step;
    const double mag = std::abs((a + b) * u);
    if (mag < best_mag) {
      best_mag = mag;
      best_u = u;
    }
  }
  return {best_u, best_u + a * best_u};
}

}  // namespace prsplit
