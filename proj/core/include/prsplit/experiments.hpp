#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <vector>

#include "prsplit/diagnostics.hpp"
#include "prsplit/engine.hpp"
#include "prsplit/lasso.hpp"

namespace prsplit {

enum class X0Kind { kOnes, kZeroMinusOnes, kFile };

struct X0Choice {
  X0Kind kind = X0Kind::kOnes;
  std::filesystem::path file;
};

Vector make_x0(const X0Choice& choice, Eigen::Index n);

// ---------------------------------------------------------------------------
// Relaxation sweep on one instance.

struct SweepOptions {
  GenSpec gen{300, 200, BMode::kGaussian, 0};
  int grid_points = 60;
  /// When nonempty, overrides the default evenly spaced grid.  Every value
  /// must lie in (0, 2+beta+min(beta,1/beta)]; checked once the instance
  /// (and hence beta) is known.
  std::vector<double> custom_grid;
  double tol = 1e-5;
  long max_iters = 1000;
  X0Choice x0;
  int retry_budget = 10;  // regenerations allowed for non-acceptable draws
};

struct SweepRow {
  double theta = 0.0;
  long iterations = 0;
  Termination terminated = Termination::kMaxItersExceeded;
  bool probe = false;  // the flagged extra row past the admissible range
};

struct SweepResult {
  std::vector<SweepRow> rows;  // grid rows ascending in theta, probe row last
  double beta = 0.0;
  double argmin_theta = 0.0;  // theta of the fewest-iterations grid row
  std::uint64_t instance_seed = 0;
};

/// One run per grid point (grid_points values evenly spaced from 1 to
/// 2+beta+min(beta,1/beta)) on a fixed acceptable instance, plus the probe
/// row 0.05 past the range.  Throws NonAcceptableInstances once the retry
/// budget is exhausted.
SweepResult run_sweep(const SweepOptions& options);

/// Schema: theta,iterations,terminated,probe
void write_sweep_csv(std::ostream& out, const SweepResult& result);
void write_sweep_svg(std::ostream& out, const SweepResult& result);

// ---------------------------------------------------------------------------
// Assumption-validation table.

struct ScenarioSpec {
  Eigen::Index size = 200;  // square instances, n = m
  X0Kind x0 = X0Kind::kOnes;
};

struct Table1Options {
  long trials = 100;
  long iters = 800;
  std::uint64_t seed = 0;
  /// Empty means the four canonical scenarios (200/400 x ones/zero-minus-ones).
  std::vector<ScenarioSpec> scenarios;
};

struct ScenarioResult {
  ScenarioSpec scenario;
  long trials = 0;
  long acceptable = 0;             // alpha > 0 draws
  long assumption_satisfied = 0;   // acceptable runs with no exact hit
  std::vector<std::uint64_t> violation_seeds;
  double min_abs_deviation = std::numeric_limits<double>::infinity();
  double min_slack = std::numeric_limits<double>::infinity();
};

struct TableOneResult {
  std::vector<ScenarioResult> scenarios;
};

/// For each scenario draws `trials` instances with b = 0, runs
/// theta = 2+beta+0.5 min(beta,1/beta) for `iters` iterations on the
/// acceptable ones, and scans every iterate coordinate for exact hits of
/// the fixed point.
TableOneResult run_table1(const Table1Options& options);

/// Schema: scenario,m,n,x0,trials,acceptable,assumption_satisfied,
///         min_abs_dev,min_slack,violation_seeds
void write_table1_csv(std::ostream& out, const TableOneResult& result);

// ---------------------------------------------------------------------------
// Rate diagnostics on one instance.

struct RatesOptions {
  GenSpec gen{300, 200, BMode::kZero, 0};
  std::optional<double> theta;     // default 2 + beta
  long k0 = 0;                     // 0 means ceil(max_iters / 10)
  double m1 = 0.5;
  double tol = 1e-5;
  long max_iters = 1000;
  X0Choice x0;
  std::optional<Vector> x_star;    // required when b != 0
  int retry_budget = 10;
};

struct RatesOutput {
  RateCertificate certificate;
  double m_constant = 0.0;  // rate constant at the empirical gamma_bar
  double theta = 0.0;
  double beta = 0.0;
  double epsilon = 0.0;
  long k0 = 0;
  std::uint64_t instance_seed = 0;
  double lipschitz_a = 0.0;
  RunResult run;  // trace recorded
  std::vector<double> pointwise;  // stat trajectory per iteration
};

/// Runs one instance with trace recording and assembles the rate
/// certificate.  Throws UnsupportedDiagnostic when no fixed point is known
/// (b != 0 and no x_star override).
RatesOutput run_rates(const RatesOptions& options);

/// Schema: k,min_residual,pointwise_stat
void write_pointwise_csv(std::ostream& out, const RatesOutput& output);

}  // namespace prsplit
