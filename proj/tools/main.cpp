#include <CLI11.hpp>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include "prsplit/engine.hpp"
#include "prsplit/errors.hpp"
#include "prsplit/experiments.hpp"
#include "prsplit/lasso.hpp"
#include "prsplit/oracles.hpp"
#include "prsplit/report.hpp"
#include "prsplit/rng.hpp"

namespace {

namespace fs = std::filesystem;
using namespace prsplit;

struct CommonFlags {
  std::uint64_t seed = 42;
  long m = 300;
  long n = 200;
  double tol = 1e-5;
  long max_iters = 1000;
  std::string x0 = "ones";
  std::string b_mode = "gaussian";
  std::string out_dir = ".";
  bool svg = false;
};

void add_common(CLI::App* cmd, CommonFlags& flags) {
  cmd->add_option("--seed", flags.seed, "RNG seed");
  cmd->add_option("--m", flags.m, "rows of the data matrix");
  cmd->add_option("--n", flags.n, "columns of the data matrix");
  cmd->add_option("--tol", flags.tol, "stopping threshold on |x_k - x_{k-1}|");
  cmd->add_option("--max-iters", flags.max_iters, "iteration cap");
  cmd->add_option("--x0", flags.x0,
                  "initial iterate: ones, zero-minus-ones, or a file path");
  cmd->add_option("--b", flags.b_mode, "right-hand side mode: gaussian or zero");
  cmd->add_option("--out", flags.out_dir, "output directory");
  cmd->add_flag("--svg", flags.svg, "also emit an SVG line chart");
}

X0Choice parse_x0(const std::string& token) {
  if (token == "ones") return {X0Kind::kOnes, {}};
  if (token == "zero-minus-ones") return {X0Kind::kZeroMinusOnes, {}};
  return {X0Kind::kFile, fs::path(token)};
}

BMode parse_b_mode(const std::string& token) {
  if (token == "gaussian") return BMode::kGaussian;
  if (token == "zero") return BMode::kZero;
  throw InvalidArgument("--b must be 'gaussian' or 'zero'");
}

std::ofstream open_output(const fs::path& dir, const std::string& name) {
  fs::create_directories(dir);
  std::ofstream out(dir / name, std::ios::binary);
  if (!out) throw Error("cannot open output file " + (dir / name).string());
  return out;
}

int cmd_sweep(const CommonFlags& flags, int grid_points, double theta) {
  SweepOptions options;
  options.gen = {flags.m, flags.n, parse_b_mode(flags.b_mode), flags.seed};
  options.grid_points = grid_points;
  if (theta > 0.0) options.custom_grid = {theta};
  options.tol = flags.tol;
  options.max_iters = flags.max_iters;
  options.x0 = parse_x0(flags.x0);

  const SweepResult result = run_sweep(options);

  auto csv = open_output(flags.out_dir, "sweep.csv");
  write_sweep_csv(csv, result);
  if (flags.svg) {
    auto svg = open_output(flags.out_dir, "sweep.svg");
    write_sweep_svg(svg, result);
  }

  std::printf("instance seed %llu, beta = %.6g\n",
              static_cast<unsigned long long>(result.instance_seed),
              result.beta);
  std::printf("grid rows: %zu, argmin theta = %.6g (2+beta = %.6g)\n",
              result.rows.size() - 1, result.argmin_theta, 2.0 + result.beta);
  const SweepRow& probe = result.rows.back();
  std::printf("probe theta = %.6g -> %s after %ld iterations\n", probe.theta,
              probe.terminated == Termination::kConverged ? "Converged"
                                                          : "MaxItersExceeded",
              probe.iterations);
  std::printf("wrote %s\n", (fs::path(flags.out_dir) / "sweep.csv").c_str());
  return 0;
}

int cmd_table1(const CommonFlags& flags, long trials, long iters) {
  Table1Options options;
  options.trials = trials;
  options.iters = iters;
  options.seed = flags.seed;

  const TableOneResult result = run_table1(options);

  auto csv = open_output(flags.out_dir, "table1.csv");
  write_table1_csv(csv, result);

  for (std::size_t s = 0; s < result.scenarios.size(); ++s) {
    const ScenarioResult& row = result.scenarios[s];
    std::printf(
        "scenario %zu (n=m=%ld, x0=%s): acceptable %ld/%ld, assumption "
        "satisfied %ld, min |x_k - x*| = %.3g\n",
        s + 1, static_cast<long>(row.scenario.size),
        row.scenario.x0 == X0Kind::kOnes ? "ones" : "zero-minus-ones",
        row.acceptable, row.trials, row.assumption_satisfied,
        row.min_abs_deviation);
  }
  std::printf("wrote %s\n", (fs::path(flags.out_dir) / "table1.csv").c_str());
  return 0;
}

int cmd_rates(const CommonFlags& flags, double theta, long k0, double m1,
              const std::string& xstar_file) {
  RatesOptions options;
  options.gen = {flags.m, flags.n, parse_b_mode(flags.b_mode), flags.seed};
  if (theta > 0.0) options.theta = theta;
  options.k0 = k0;
  options.m1 = m1;
  options.tol = flags.tol;
  options.max_iters = flags.max_iters;
  options.x0 = parse_x0(flags.x0);
  if (!xstar_file.empty()) {
    options.x_star = make_x0({X0Kind::kFile, fs::path(xstar_file)}, flags.n);
  }

  const RatesOutput output = run_rates(options);

  auto trace_csv = open_output(flags.out_dir, "trace.csv");
  write_trace_csv(trace_csv, output.run.trace);
  auto pw_csv = open_output(flags.out_dir, "pointwise.csv");
  write_pointwise_csv(pw_csv, output);
  if (flags.svg) {
    std::vector<double> ks, res;
    for (const auto& entry : output.run.trace) {
      ks.push_back(static_cast<double>(entry.k));
      res.push_back(entry.residual);
    }
    auto svg = open_output(flags.out_dir, "rates.svg");
    write_svg_line_chart(svg, ks, res,
                         {"step residual vs iteration", "k", "|x_k - x_{k-1}|"});
  }

  std::printf("instance seed %llu, beta = %.6g, theta = %.6g (epsilon = %.3g)\n",
              static_cast<unsigned long long>(output.instance_seed),
              output.beta, output.theta, output.epsilon);
  std::printf("%s after %ld iterations\n",
              output.run.terminated == Termination::kConverged
                  ? "Converged"
                  : "MaxItersExceeded",
              output.run.iterates_used);
  const RateCertificate& cert = output.certificate;
  std::printf("empirical gamma_bar (trailing-half max) = %.6g\n",
              cert.gamma_bar);
  std::printf("theoretical gamma threshold             = %.6g\n",
              cert.theoretical_gamma_bound);
  std::printf("rate constant M (M1 = %.3g)             = %.6g\n", m1,
              output.m_constant);
  std::printf("pointwise stat min-res * sqrt(k) at end = %.6g\n",
              cert.pointwise_stat);
  std::printf("trailing-half contraction ratio         = %.6g\n",
              cert.rlinear_ratio);
  const double lips = output.lipschitz_a;
  // The sufficient condition caps the threshold quotient at 1 (its value
  // when epsilon reaches 0).
  const double lips_cap =
      2.0 * std::sqrt(2.0 * (1.0 + output.beta)) *
          std::sqrt(std::min(cert.theoretical_gamma_bound, 1.0)) -
      (1.0 + output.beta);
  std::printf("Lipschitz constant of the gradient block = %.6g (sufficient "
              "cap for the gamma condition: %.6g)\n",
              lips, lips_cap);
  std::printf("wrote %s and %s\n",
              (fs::path(flags.out_dir) / "trace.csv").c_str(),
              (fs::path(flags.out_dir) / "pointwise.csv").c_str());
  return 0;
}

int cmd_verify_props(std::uint64_t seed, double grid_step) {
  int failures = 0;
  const auto report = [&](const char* name, bool pass, double value,
                          double bound) {
    std::printf("%-58s %s (max %.3e, bound %.3e)\n", name,
                pass ? "PASS" : "FAIL", value, bound);
    if (!pass) ++failures;
  };

  // Cone-restricted quadratic form: maximum 0 at the origin.
  for (const auto& [beta, eps] : {std::pair{1.0, 0.5}, {0.1896, 0.09}}) {
    const GridMaxResult r = grid_max_coupling_form(beta, eps, grid_step);
    const bool pass = r.max_value <= 1e-9 &&
                      std::abs(r.arg_x) <= 2 * grid_step &&
                      std::abs(r.arg_y) <= 2 * grid_step;
    char name[96];
    std::snprintf(name, sizeof(name),
                  "cone quadratic form (beta=%.4g, eps=%.4g)", beta, eps);
    report(name, pass, r.max_value, 0.0);
  }

  // Gamma cap when the single-valued block is Lipschitz.
  {
    const GammaBoundCheck r = gamma_bound_grid_a(1.0, 1.0, grid_step);
    report("gamma cap, Lipschitz gradient block (beta=1, L=1)", r.holds,
           r.grid_max, r.bound);
  }
  // Gamma sign when the multivalued block is Lipschitz.
  for (double lips : {1.9, 0.0}) {
    const GammaBoundCheck r = gamma_bound_grid_b(1.0, lips, grid_step);
    char name[96];
    std::snprintf(name, sizeof(name),
                  "gamma nonpositivity, Lipschitz prox block (beta=1, L=%.2g)",
                  lips);
    report(name, r.holds, r.grid_max, r.bound);
  }

  // 1-D prox oracle against the closed-form threshold.
  {
    SplitRng rng(seed, 7);
    double worst = 0.0;
    for (int i = 0; i < 10000; ++i) {
      const double x = 8.0 * (rng.uniform() - 0.5);
      const double w = rng.uniform();
      const double s = 2.0 * rng.uniform();
      const double oracle = prox_1d_oracle(x, w, s);
      const double closed = weighted_soft_threshold(x, w) / (1.0 + s);
      worst = std::max(worst, std::abs(oracle - closed));
    }
    report("1-D prox oracle vs closed-form threshold (1e4 draws)",
           worst <= 1e-8, worst, 1e-8);
  }

  // Brute-force root of the 1-D linear pair.
  {
    const LinearPairSolution s1 = linear_pair_bruteforce(1.0, 1.0);
    const LinearPairSolution s2 = linear_pair_bruteforce(2.0, 3.0);
    const double worst =
        std::max({std::abs(s1.u_star), std::abs(s1.x_star),
                  std::abs(s2.u_star), std::abs(s2.x_star)});
    report("1-D linear pair brute-force root", worst <= 1e-12, worst, 0.0);
  }

  return failures == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Relaxed Peaceman-Rachford splitting for strongly monotone "
      "inclusions: solver, per-iteration diagnostics and weighted-Lasso "
      "experiments"};
  app.require_subcommand(1);

  CommonFlags sweep_flags, table_flags, rates_flags;
  int grid_points = 60;
  long trials = 100, iters = 800;
  double theta = -1.0, sweep_theta = -1.0, m1 = 0.5;
  long k0 = 0;
  std::string xstar_file;
  std::uint64_t props_seed = 42;
  double props_step = 0.01;

  CLI::App* sweep = app.add_subcommand(
      "sweep", "iteration counts across a grid of relaxation parameters");
  add_common(sweep, sweep_flags);
  sweep->add_option("--grid-points", grid_points, "number of theta values");
  sweep->add_option("--theta", sweep_theta,
                    "run a single relaxation value instead of the grid");

  CLI::App* table1 = app.add_subcommand(
      "table1", "assumption validation over random square instances");
  add_common(table1, table_flags);
  table1->add_option("--trials", trials, "instances per scenario");
  table1->add_option("--iters", iters, "iterations per run");

  CLI::App* rates = app.add_subcommand(
      "rates", "trace export and rate certificate for one instance");
  add_common(rates, rates_flags);
  rates_flags.b_mode = "zero";
  rates->add_option("--theta", theta, "relaxation parameter (default 2+beta)");
  rates->add_option("--k0", k0, "burn-in index (default max_iters/10)");
  rates->add_option("--m1", m1, "split weight in the rate constant, in (0,1)");
  rates->add_option("--xstar", xstar_file,
                    "file with the fixed point when b != 0");

  CLI::App* props = app.add_subcommand(
      "verify-props", "grid corroboration of the small optimization facts");
  props->add_option("--seed", props_seed, "RNG seed for sampled draws");
  props->add_option("--grid-step", props_step, "grid resolution");

  CLI11_PARSE(app, argc, argv);

  try {
    if (sweep->parsed()) return cmd_sweep(sweep_flags, grid_points, sweep_theta);
    if (table1->parsed()) return cmd_table1(table_flags, trials, iters);
    if (rates->parsed())
      return cmd_rates(rates_flags, theta, k0, m1, xstar_file);
    if (props->parsed()) return cmd_verify_props(props_seed, props_step);
  } catch (const NonAcceptableInstances& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const NumericalFailure& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
