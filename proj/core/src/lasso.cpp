#include "prsplit/lasso.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "prsplit/errors.hpp"
#include "prsplit/rng.hpp"

namespace prsplit {

namespace {

constexpr double kNonzeroProbability = 1.0 / 21.0;
constexpr Eigen::Index kDenseSolveMaxDim = 1024;
constexpr double kSolveTol = 1e-12;

Eigen::MatrixXd dense_gram(const SparseRowMajor& c) {
  Eigen::SparseMatrix<double> cc = c;
  Eigen::SparseMatrix<double> gram =
      (Eigen::SparseMatrix<double>(cc.transpose()) * cc).pruned();
  return Eigen::MatrixXd(gram);
}

std::string format_hex(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%a", v);
  return buf;
}

double parse_hex(const std::string& token) {
  const char* begin = token.c_str();
  char* end = nullptr;
  const double v = std::strtod(begin, &end);
  if (end == begin || *end != '\0')
    throw InvalidArgument("instance file: bad float token '" + token + "'");
  return v;
}

}  // namespace

double weighted_soft_threshold(double x, double w) {
  const double mag = std::abs(x) - w;
  if (mag <= 0.0) return 0.0;
  return x > 0.0 ? mag : -mag;
}

std::pair<double, double> eigen_bounds(const SparseRowMajor& c) {
  if (!Eigen::MatrixXd(c).allFinite())
    throw InvalidArgument("eigen_bounds: matrix must be finite");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(
      dense_gram(c), Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success)
    throw SpectralFailure("eigenvalue iteration failed to converge");
  const auto& ev = solver.eigenvalues();
  return {ev(0), ev(ev.size() - 1)};
}

LassoInstance LassoInstance::generate(const GenSpec& spec) {
  if (spec.m < 1 || spec.n < 1)
    throw InvalidArgument("generate: dimensions must be positive");

  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(static_cast<std::size_t>(
      static_cast<double>(spec.m) * static_cast<double>(spec.n) *
          kNonzeroProbability * 1.3 +
      16.0));
  SplitRng entry_rng(spec.seed, 0);
  for (Eigen::Index i = 0; i < spec.m; ++i) {
    for (Eigen::Index j = 0; j < spec.n; ++j) {
      if (entry_rng.uniform() < kNonzeroProbability) {
        triplets.emplace_back(static_cast<int>(i), static_cast<int>(j),
                              entry_rng.gaussian());
      }
    }
  }
  SparseRowMajor c(spec.m, spec.n);
  c.setFromTriplets(triplets.begin(), triplets.end());
  c.makeCompressed();

  SplitRng weight_rng(spec.seed, 1);
  Vector w(spec.n);
  for (Eigen::Index j = 0; j < spec.n; ++j) w[j] = weight_rng.uniform_open();

  Vector b = Vector::Zero(spec.m);
  if (spec.b_mode == BMode::kGaussian) {
    SplitRng b_rng(spec.seed, 2);
    for (Eigen::Index i = 0; i < spec.m; ++i) b[i] = b_rng.gaussian();
  }

  return from_data(std::move(c), std::move(w), std::move(b), spec.seed,
                   spec.b_mode);
}

LassoInstance LassoInstance::from_data(SparseRowMajor c, Vector w, Vector b,
                                       std::uint64_t seed, BMode b_mode,
                                       SolveMode solve_mode) {
  if (w.size() != c.cols() || b.size() != c.rows())
    throw InvalidArgument("from_data: inconsistent dimensions");
  for (Eigen::Index j = 0; j < w.size(); ++j)
    if (!(w[j] > 0.0)) throw InvalidArgument("weights must be positive");

  LassoInstance inst;
  inst.c_ = std::move(c);
  inst.c_.makeCompressed();
  inst.w_ = std::move(w);
  inst.b_ = std::move(b);
  inst.seed_ = seed;
  inst.b_mode_ = b_mode;
  auto bounds = eigen_bounds(inst.c_);
  inst.alpha_ = bounds.first;
  inst.kappa_ = bounds.second;
  inst.ctb_ = inst.c_.transpose() * inst.b_;
  inst.prepare_solver(solve_mode);
  return inst;
}

void LassoInstance::prepare_solver(SolveMode mode) {
  use_dense_ = mode == SolveMode::kDenseCholesky ||
               (mode == SolveMode::kAuto && n() <= kDenseSolveMaxDim);
  if (!use_dense_) return;
  system_ = dense_gram(c_);
  system_.diagonal().array() += 1.0 - alpha_ / 2.0;
  llt_.compute(system_);
  if (llt_.info() != Eigen::Success)
    throw NumericalFailure("Cholesky factorization failed", 0);
}

Vector LassoInstance::apply_system(const Vector& u) const {
  return (1.0 - alpha_ / 2.0) * u + c_.transpose() * (c_ * u);
}

Vector LassoInstance::solve_system(const Vector& rhs) const {
  if (use_dense_) {
    Vector u = llt_.solve(rhs);
    // One or two refinement passes keep the defining-equation residual at
    // the contracted tolerance even for ill-scaled inputs.
    for (int pass = 0; pass < 3; ++pass) {
      Vector r = rhs - apply_system(u);
      if (r.norm() <= kSolveTol * (1.0 + rhs.norm())) return u;
      u += llt_.solve(r);
    }
    Vector r = rhs - apply_system(u);
    if (r.norm() <= kSolveTol * (1.0 + rhs.norm())) return u;
    throw NumericalFailure("dense solve failed to reach tolerance", 0);
  }

  // Matrix-free conjugate gradients on the SPD system.
  Vector u = Vector::Zero(n());
  Vector r = rhs;
  Vector p = r;
  double rr = r.squaredNorm();
  const double target = kSolveTol * (1.0 + rhs.norm());
  const long budget = 10 * static_cast<long>(n()) + 50;
  for (long it = 0; it < budget; ++it) {
    if (std::sqrt(rr) <= target) return u;
    Vector ap = apply_system(p);
    const double pap = p.dot(ap);
    if (!(pap > 0.0))
      throw NumericalFailure("conjugate-gradient breakdown", 0);
    const double step = rr / pap;
    u += step * p;
    r -= step * ap;
    const double rr_next = r.squaredNorm();
    p = r + (rr_next / rr) * p;
    rr = rr_next;
  }
  if (std::sqrt(rr) <= target) return u;
  throw NumericalFailure("conjugate gradients failed to reach tolerance", 0);
}

Vector LassoInstance::resolvent_a(const Vector& x) const {
  if (x.size() != n()) throw InvalidArgument("resolvent_a: wrong dimension");
  return solve_system(x + ctb_);
}

Vector LassoInstance::resolvent_b(const Vector& x) const {
  if (x.size() != n()) throw InvalidArgument("resolvent_b: wrong dimension");
  const double shrink = 1.0 / (1.0 + alpha_ / 2.0);
  Vector v(n());
  for (Eigen::Index i = 0; i < n(); ++i)
    v[i] = weighted_soft_threshold(x[i], w_[i]) * shrink;
  return v;
}

Vector LassoInstance::gradient_f(const Vector& u) const {
  return c_.transpose() * (c_ * u) - ctb_;
}

Vector LassoInstance::apply_a(const Vector& u) const {
  return gradient_f(u) - (alpha_ / 2.0) * u;
}

double LassoInstance::optimality_residual(const Vector& u) const {
  if (u.size() != n())
    throw InvalidArgument("optimality_residual: wrong dimension");
  const Vector g = gradient_f(u);
  double worst = 0.0;
  for (Eigen::Index i = 0; i < n(); ++i) {
    double r;
    if (u[i] == 0.0) {
      r = std::max(std::abs(g[i]) - w_[i], 0.0);
    } else {
      r = std::abs(g[i] + (u[i] > 0.0 ? w_[i] : -w_[i]));
    }
    worst = std::max(worst, r);
  }
  return worst;
}

ProblemPair make_problem_pair(std::shared_ptr<const LassoInstance> instance) {
  if (!instance) throw InvalidArgument("make_problem_pair: null instance");
  if (!instance->acceptable())
    throw InvalidArgument(
        "make_problem_pair: instance is not acceptable (alpha <= 0)");
  const Eigen::Index n = instance->n();
  ResolventOracle a(n, [instance](const Vector& x) {
    return instance->resolvent_a(x);
  });
  ResolventOracle b(n, [instance](const Vector& x) {
    return instance->resolvent_b(x);
  });
  std::optional<KnownSolution> known;
  if (instance->b_mode() == BMode::kZero && instance->rhs().isZero(0.0))
    known = KnownSolution{Vector::Zero(n), Vector::Zero(n)};
  return ProblemPair(std::move(a), std::move(b), instance->beta(),
                     instance->lipschitz_a(), std::nullopt, std::move(known));
}

void save_instance(const LassoInstance& instance, std::ostream& out) {
  out << "prsplit-lasso-v1\n";
  out << "m " << instance.m() << "\n";
  out << "n " << instance.n() << "\n";
  out << "seed " << instance.seed() << "\n";
  out << "b_mode "
      << (instance.b_mode() == BMode::kGaussian ? "gaussian" : "zero") << "\n";
  out << "alpha " << format_hex(instance.alpha()) << "\n";
  out << "kappa " << format_hex(instance.kappa()) << "\n";
  out << "nnz " << instance.c().nonZeros() << "\n";
  const auto& c = instance.c();
  for (Eigen::Index i = 0; i < c.outerSize(); ++i) {
    for (SparseRowMajor::InnerIterator it(c, i); it; ++it) {
      out << it.row() << " " << it.col() << " " << format_hex(it.value())
          << "\n";
    }
  }
  out << "W\n";
  for (Eigen::Index j = 0; j < instance.n(); ++j)
    out << format_hex(instance.weights()[j]) << "\n";
  out << "b\n";
  for (Eigen::Index i = 0; i < instance.m(); ++i)
    out << format_hex(instance.rhs()[i]) << "\n";
  out << "end\n";
}

namespace {

std::string next_line(std::istream& in) {
  std::string line;
  if (!std::getline(in, line))
    throw InvalidArgument("instance file: unexpected end of input");
  return line;
}

std::string expect_field(std::istream& in, const std::string& key) {
  std::istringstream ls(next_line(in));
  std::string name, value;
  ls >> name >> value;
  if (name != key)
    throw InvalidArgument("instance file: expected field '" + key + "'");
  return value;
}

}  // namespace

LassoInstance load_instance(std::istream& in) {
  if (next_line(in) != "prsplit-lasso-v1")
    throw InvalidArgument("instance file: bad magic line");
  const Eigen::Index m = std::stoll(expect_field(in, "m"));
  const Eigen::Index n = std::stoll(expect_field(in, "n"));
  const std::uint64_t seed = std::stoull(expect_field(in, "seed"));
  const std::string mode_token = expect_field(in, "b_mode");
  BMode mode;
  if (mode_token == "gaussian") {
    mode = BMode::kGaussian;
  } else if (mode_token == "zero") {
    mode = BMode::kZero;
  } else {
    throw InvalidArgument("instance file: bad b_mode '" + mode_token + "'");
  }
  const double alpha = parse_hex(expect_field(in, "alpha"));
  const double kappa = parse_hex(expect_field(in, "kappa"));
  const long nnz = std::stol(expect_field(in, "nnz"));

  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(static_cast<std::size_t>(nnz));
  for (long t = 0; t < nnz; ++t) {
    std::istringstream ls(next_line(in));
    Eigen::Index i = -1, j = -1;
    std::string value;
    ls >> i >> j >> value;
    if (i < 0 || i >= m || j < 0 || j >= n)
      throw InvalidArgument("instance file: triplet out of range");
    triplets.emplace_back(static_cast<int>(i), static_cast<int>(j),
                          parse_hex(value));
  }
  SparseRowMajor c(m, n);
  c.setFromTriplets(triplets.begin(), triplets.end());

  if (next_line(in) != "W")
    throw InvalidArgument("instance file: expected W section");
  Vector w(n);
  for (Eigen::Index j = 0; j < n; ++j) w[j] = parse_hex(next_line(in));
  if (next_line(in) != "b")
    throw InvalidArgument("instance file: expected b section");
  Vector b(m);
  for (Eigen::Index i = 0; i < m; ++i) b[i] = parse_hex(next_line(in));
  if (next_line(in) != "end")
    throw InvalidArgument("instance file: missing end marker");

  LassoInstance inst =
      LassoInstance::from_data(std::move(c), std::move(w), std::move(b), seed,
                               mode);
  // Keep the stored spectral bounds so every float field round-trips
  // bit-exactly; from_data recomputes them, which may differ in the last
  // ulp across BLAS backends.
  inst.alpha_ = alpha;
  inst.kappa_ = kappa;
  inst.prepare_solver(SolveMode::kAuto);
  return inst;
}

}  // namespace prsplit
