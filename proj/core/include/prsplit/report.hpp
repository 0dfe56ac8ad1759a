#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "prsplit/diagnostics.hpp"

namespace prsplit {

/// Shortest round-trip decimal form of a double; deterministic for a given
/// value, so CSV emission is byte-stable across runs.
std::string format_double(double value);

/// Fixed trace schema:
/// k,residual,gamma,tau,slack_A,slack_B,slack_rate,min_abs_dev
void write_trace_csv(std::ostream& out, std::span<const IterateTrace> trace);

struct ChartLabels {
  std::string title;
  std::string x_label;
  std::string y_label;
};

/// Standalone SVG line chart (axes, ticks, one polyline); plain text, no
/// plotting dependency.
void write_svg_line_chart(std::ostream& out, std::span<const double> xs,
                          std::span<const double> ys,
                          const ChartLabels& labels);

}  // namespace prsplit
