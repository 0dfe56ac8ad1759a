#pragma once

#include <Eigen/Cholesky>
#include <Eigen/Core>
#include <Eigen/SparseCore>
#include <cstdint>
#include <iosfwd>
#include <memory>
#include <utility>

#include "prsplit/operators.hpp"

namespace prsplit {

using SparseRowMajor = Eigen::SparseMatrix<double, Eigen::RowMajor>;

enum class BMode { kGaussian, kZero };

struct GenSpec {
  Eigen::Index m = 0;
  Eigen::Index n = 0;
  BMode b_mode = BMode::kGaussian;
  std::uint64_t seed = 0;
};

/// How the resolvent of the quadratic block is applied.
enum class SolveMode { kAuto, kDenseCholesky, kConjugateGradient };

/// sign(x) * max(|x| - w, 0).
double weighted_soft_threshold(double x, double w);

/// One random weighted-Lasso instance: minimize 0.5 |Cu - b|^2 + |W u|_1
/// with sparse C, positive diagonal weights W and spectral bounds
/// alpha = lambda_min(C^T C), kappa = lambda_max(C^T C).  The operator pair
/// is A = grad f - (alpha/2) I and B = d|W.|_1 + (alpha/2) I, both strongly
/// monotone with modulus beta = alpha/2 when alpha > 0.
///
/// Instances are immutable after construction; the linear-solve state is
/// prepared up front, so resolvent evaluations are const and safe to call
/// concurrently.
class LassoInstance {
 public:
  /// Draws C (entries nonzero with probability 1/21, values standard
  /// normal), W uniform on (0,1) and b per the mode.  Deterministic in the
  /// seed.  An alpha = 0 draw yields a valid but non-acceptable instance.
  static LassoInstance generate(const GenSpec& spec);

  /// Builds an instance from explicit data (also used by the loader).
  static LassoInstance from_data(SparseRowMajor c, Vector w, Vector b,
                                 std::uint64_t seed, BMode b_mode,
                                 SolveMode solve_mode = SolveMode::kAuto);

  Eigen::Index m() const { return c_.rows(); }
  Eigen::Index n() const { return c_.cols(); }
  const SparseRowMajor& c() const { return c_; }
  const Vector& weights() const { return w_; }
  const Vector& rhs() const { return b_; }
  double alpha() const { return alpha_; }
  double kappa() const { return kappa_; }
  double beta() const { return alpha_ / 2.0; }
  std::uint64_t seed() const { return seed_; }
  BMode b_mode() const { return b_mode_; }
  bool acceptable() const { return alpha_ > 0.0; }
  /// Lipschitz constant of the shifted gradient block, kappa - alpha/2.
  double lipschitz_a() const { return kappa_ - alpha_ / 2.0; }

  /// J_A(x): solves ((1 - alpha/2) I + C^T C) u = x + C^T b to residual
  /// <= 1e-12 (1 + |x|).
  Vector resolvent_a(const Vector& x) const;

  /// J_B(x): componentwise weighted soft threshold then shrink by
  /// 1 + alpha/2.
  Vector resolvent_b(const Vector& x) const;

  /// grad f(u) = C^T (C u - b).
  Vector gradient_f(const Vector& u) const;

  /// A(u) = grad f(u) - (alpha/2) u, the shifted single-valued operator.
  Vector apply_a(const Vector& u) const;

  /// Distance of 0 from grad f(u) + d|W.|_1(u) in the max norm: at zero
  /// coordinates the distance of -grad f(u)_i from [-w_i, w_i], elsewhere
  /// |grad f(u)_i + w_i sign(u_i)|.
  double optimality_residual(const Vector& u) const;

 private:
  friend LassoInstance load_instance(std::istream& in);

  LassoInstance() = default;
  void prepare_solver(SolveMode mode);
  Vector solve_system(const Vector& rhs) const;
  Vector apply_system(const Vector& u) const;

  SparseRowMajor c_;
  Vector w_;
  Vector b_;
  Vector ctb_;
  double alpha_ = 0.0;
  double kappa_ = 0.0;
  std::uint64_t seed_ = 0;
  BMode b_mode_ = BMode::kGaussian;
  bool use_dense_ = true;
  Eigen::MatrixXd system_;              // (1 - alpha/2) I + C^T C, dense path
  Eigen::LLT<Eigen::MatrixXd> llt_;     // its factorization
};

/// Extreme eigenvalues (min, max) of the Gram matrix C^T C.
std::pair<double, double> eigen_bounds(const SparseRowMajor& c);

/// Wraps an acceptable instance as a ProblemPair with beta = alpha/2, the
/// Lipschitz constant of the shifted gradient block, and (for b = 0) the
/// known solution u* = x* = 0.
ProblemPair make_problem_pair(std::shared_ptr<const LassoInstance> instance);

/// Text serialization with hexadecimal floats; round-trips bit-exactly.
void save_instance(const LassoInstance& instance, std::ostream& out);
LassoInstance load_instance(std::istream& in);

}  // namespace prsplit
