#include "prsplit/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <limits>
#include <memory>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

#include "prsplit/errors.hpp"
#include "prsplit/report.hpp"
#include "prsplit/rng.hpp"

namespace prsplit {

namespace {

constexpr double kNeverStopTol = std::numeric_limits<double>::denorm_min();

void parallel_for(long count, const std::function<void(long)>& body) {
  if (count <= 0) return;
  long workers = static_cast<long>(std::thread::hardware_concurrency());
  workers = std::clamp<long>(workers, 1, std::min<long>(count, 16));
  if (workers == 1) {
    for (long i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<long> next{0};
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::mutex error_mutex;
  for (long w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (;;) {
        const long i = next.fetch_add(1);
        if (i >= count || failed.load()) return;
        try {
          body(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!error) error = std::current_exception();
          failed.store(true);
          return;
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

std::shared_ptr<const LassoInstance> generate_acceptable(GenSpec spec,
                                                         int retry_budget) {
  for (int attempt = 0; attempt <= retry_budget; ++attempt) {
    auto inst = std::make_shared<const LassoInstance>(
        LassoInstance::generate(spec));
    if (inst->acceptable()) return inst;
    spec.seed += 1;
  }
  throw NonAcceptableInstances(
      "no acceptable instance within the retry budget");
}

const char* termination_name(Termination t) {
  return t == Termination::kConverged ? "Converged" : "MaxItersExceeded";
}

const char* x0_name(X0Kind kind) {
  switch (kind) {
    case X0Kind::kOnes: return "ones";
    case X0Kind::kZeroMinusOnes: return "zero-minus-ones";
    case X0Kind::kFile: return "file";
  }
  return "?";
}

}  // namespace

Vector make_x0(const X0Choice& choice, Eigen::Index n) {
  switch (choice.kind) {
    case X0Kind::kOnes:
      return Vector::Ones(n);
    case X0Kind::kZeroMinusOnes: {
      Vector x = -Vector::Ones(n);
      x[0] = 0.0;
      return x;
    }
    case X0Kind::kFile: {
      std::ifstream in(choice.file);
      if (!in) throw InvalidArgument("cannot open x0 file");
      std::vector<double> values;
      std::string token;
      while (in >> token) {
        char* end = nullptr;
        const double v = std::strtod(token.c_str(), &end);
        if (end == token.c_str() || *end != '\0')
          throw InvalidArgument("x0 file: bad float token '" + token + "'");
        values.push_back(v);
      }
      if (static_cast<Eigen::Index>(values.size()) != n)
        throw InvalidArgument("x0 file has wrong length");
      return Eigen::Map<Vector>(values.data(), n);
    }
  }
  throw InvalidArgument("unknown x0 choice");
}

SweepResult run_sweep(const SweepOptions& options) {
  if (options.custom_grid.empty() && options.grid_points < 1)
    throw InvalidArgument("sweep: need at least one grid point");
  auto instance = generate_acceptable(options.gen, options.retry_budget);
  const double beta = instance->beta();
  const ProblemPair pair = make_problem_pair(instance);
  const Vector x0 = make_x0(options.x0, instance->n());

  std::vector<double> grid;
  if (!options.custom_grid.empty()) {
    grid = options.custom_grid;
    std::sort(grid.begin(), grid.end());
    if (!(grid.front() > 0.0) || grid.back() > theta_upper(beta))
      throw InvalidArgument(
          "sweep: grid values must lie in (0, 2+beta+min(beta,1/beta)]");
  } else if (options.grid_points == 1) {
    grid.push_back(1.0);
  } else {
    const double lo = 1.0, hi = theta_upper(beta);
    for (int i = 0; i < options.grid_points; ++i)
      grid.push_back(lo + (hi - lo) * i / (options.grid_points - 1));
  }

  SweepResult result;
  result.beta = beta;
  result.instance_seed = instance->seed();
  result.rows.resize(grid.size() + 1);

  parallel_for(static_cast<long>(grid.size()) + 1, [&](long i) {
    const bool probe = i == static_cast<long>(grid.size());
    const double theta = probe ? theta_probe(beta) : grid[static_cast<std::size_t>(i)];
    RunConfig config;
    config.theta = theta;
    config.tol = options.tol;
    config.max_iters = options.max_iters;
    const RunResult run_result = run(pair, config, x0);
    result.rows[static_cast<std::size_t>(i)] =
        SweepRow{theta, run_result.iterates_used, run_result.terminated, probe};
  });

  const auto grid_end = result.rows.begin() + static_cast<long>(grid.size());
  const auto best = std::min_element(
      result.rows.begin(), grid_end,
      [](const SweepRow& a, const SweepRow& b) { return a.iterations < b.iterations; });
  result.argmin_theta = best->theta;
  return result;
}

void write_sweep_csv(std::ostream& out, const SweepResult& result) {
  out << "theta,iterations,terminated,probe\n";
  for (const auto& row : result.rows) {
    out << format_double(row.theta) << ',' << row.iterations << ','
        << termination_name(row.terminated) << ',' << (row.probe ? 1 : 0)
        << '\n';
  }
}

void write_sweep_svg(std::ostream& out, const SweepResult& result) {
  std::vector<double> xs, ys;
  for (const auto& row : result.rows) {
    if (row.probe) continue;
    xs.push_back(row.theta);
    ys.push_back(static_cast<double>(row.iterations));
  }
  write_svg_line_chart(out, xs, ys,
                       {"iterations to termination vs relaxation", "theta",
                        "iterations"});
}

TableOneResult run_table1(const Table1Options& options) {
  if (options.trials < 0) throw InvalidArgument("table1: trials must be >= 0");
  std::vector<ScenarioSpec> scenarios = options.scenarios;
  if (scenarios.empty()) {
    scenarios = {{200, X0Kind::kOnes},
                 {400, X0Kind::kOnes},
                 {200, X0Kind::kZeroMinusOnes},
                 {400, X0Kind::kZeroMinusOnes}};
  }

  TableOneResult result;
  result.scenarios.resize(scenarios.size());

  for (std::size_t s = 0; s < scenarios.size(); ++s) {
    const ScenarioSpec& scenario = scenarios[s];
    ScenarioResult& out = result.scenarios[s];
    out.scenario = scenario;
    out.trials = options.trials;

    struct TrialOutcome {
      bool acceptable = false;
      bool satisfied = false;
      std::uint64_t seed = 0;
      double min_dev = std::numeric_limits<double>::infinity();
      double min_slack = std::numeric_limits<double>::infinity();
    };
    std::vector<TrialOutcome> outcomes(
        static_cast<std::size_t>(options.trials));

    parallel_for(options.trials, [&](long t) {
      TrialOutcome& outcome = outcomes[static_cast<std::size_t>(t)];
      GenSpec spec;
      spec.m = scenario.size;
      spec.n = scenario.size;
      spec.b_mode = BMode::kZero;
      spec.seed = derive_seed(options.seed, s, static_cast<std::uint64_t>(t));
      outcome.seed = spec.seed;
      auto instance = std::make_shared<const LassoInstance>(
          LassoInstance::generate(spec));
      if (!instance->acceptable()) return;
      outcome.acceptable = true;

      const ProblemPair pair = make_problem_pair(instance);
      RunConfig config;
      config.theta = theta_mid(instance->beta());
      config.tol = kNeverStopTol;  // fixed-iteration protocol
      config.max_iters = options.iters;
      config.record_trace = true;
      const RunResult rr = run(pair, config, make_x0({scenario.x0, {}},
                                                     instance->n()));
      const AssumptionReport report =
          check_assumption(rr.trace, Vector::Zero(instance->n()));
      outcome.satisfied = report.satisfied;
      outcome.min_dev = report.min_abs_deviation;
      for (const auto& entry : rr.trace) {
        outcome.min_slack = std::min({outcome.min_slack, entry.slack_a,
                                      entry.slack_b, entry.slack_rate});
      }
    });

    for (const auto& outcome : outcomes) {
      if (!outcome.acceptable) continue;
      ++out.acceptable;
      if (outcome.satisfied) {
        ++out.assumption_satisfied;
      } else {
        out.violation_seeds.push_back(outcome.seed);
      }
      out.min_abs_deviation = std::min(out.min_abs_deviation, outcome.min_dev);
      out.min_slack = std::min(out.min_slack, outcome.min_slack);
    }
  }
  return result;
}

void write_table1_csv(std::ostream& out, const TableOneResult& result) {
  out << "scenario,m,n,x0,trials,acceptable,assumption_satisfied,min_abs_dev,"
         "min_slack,violation_seeds\n";
  for (std::size_t s = 0; s < result.scenarios.size(); ++s) {
    const ScenarioResult& row = result.scenarios[s];
    out << s + 1 << ',' << row.scenario.size << ',' << row.scenario.size << ','
        << x0_name(row.scenario.x0) << ',' << row.trials << ','
        << row.acceptable << ',' << row.assumption_satisfied << ','
        << format_double(row.min_abs_deviation) << ','
        << format_double(row.min_slack) << ',';
    for (std::size_t i = 0; i < row.violation_seeds.size(); ++i) {
      if (i) out << ';';
      out << row.violation_seeds[i];
    }
    out << '\n';
  }
}

RatesOutput run_rates(const RatesOptions& options) {
  auto instance = generate_acceptable(options.gen, options.retry_budget);
  const double beta = instance->beta();
  const Eigen::Index n = instance->n();

  std::optional<KnownSolution> known;
  if (instance->b_mode() == BMode::kZero && instance->rhs().isZero(0.0)) {
    known = KnownSolution{Vector::Zero(n), Vector::Zero(n)};
  } else if (options.x_star) {
    known = KnownSolution{instance->resolvent_a(*options.x_star),
                          *options.x_star};
  } else {
    throw UnsupportedDiagnostic(
        "rate diagnostics need a known fixed point (use b = 0 or supply "
        "x_star)");
  }

  ResolventOracle a(n, [instance](const Vector& x) {
    return instance->resolvent_a(x);
  });
  ResolventOracle b(n, [instance](const Vector& x) {
    return instance->resolvent_b(x);
  });
  const ProblemPair pair(std::move(a), std::move(b), beta,
                         instance->lipschitz_a(), std::nullopt, known);

  RatesOutput out;
  out.beta = beta;
  out.theta = options.theta.value_or(2.0 + beta);
  out.epsilon = out.theta - (2.0 + beta);
  out.k0 = options.k0 > 0 ? options.k0 : (options.max_iters + 9) / 10;
  out.instance_seed = instance->seed();
  out.lipschitz_a = instance->lipschitz_a();

  RunConfig config;
  config.theta = out.theta;
  config.tol = options.tol;
  config.max_iters = options.max_iters;
  config.record_trace = true;
  out.run = run(pair, config, make_x0(options.x0, n));

  out.certificate = rate_statistics(out.run.trace, known->x_star, out.k0, beta,
                                    out.epsilon);
  out.m_constant = (beta + out.epsilon > 0.0)
                       ? rate_constant(beta, out.epsilon,
                                       out.certificate.gamma_bar, options.m1)
                       : std::numeric_limits<double>::quiet_NaN();
  out.pointwise = pointwise_stat_trajectory(out.run.trace, out.k0);
  return out;
}

void write_pointwise_csv(std::ostream& out, const RatesOutput& output) {
  out << "k,min_residual,pointwise_stat\n";
  double min_res = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < output.run.trace.size(); ++i) {
    const auto& entry = output.run.trace[i];
    if (entry.k >= output.k0) min_res = std::min(min_res, entry.residual);
    const double shown = min_res == std::numeric_limits<double>::infinity()
                             ? entry.residual
                             : min_res;
    out << entry.k << ',' << format_double(shown) << ','
        << format_double(output.pointwise[i]) << '\n';
  }
}

}  // namespace prsplit
