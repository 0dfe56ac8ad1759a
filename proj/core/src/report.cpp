#include "prsplit/report.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <ostream>

namespace prsplit {

std::string format_double(double value) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

void write_trace_csv(std::ostream& out, std::span<const IterateTrace> trace) {
  out << "k,residual,gamma,tau,slack_A,slack_B,slack_rate,min_abs_dev\n";
  for (const auto& entry : trace) {
    out << entry.k << ',' << format_double(entry.residual) << ','
        << format_double(entry.gamma) << ',' << format_double(entry.tau) << ','
        << format_double(entry.slack_a) << ',' << format_double(entry.slack_b)
        << ',' << format_double(entry.slack_rate) << ','
        << format_double(entry.min_abs_dev) << '\n';
  }
}

namespace {

struct Scale {
  double lo, hi;
  double pixel_lo, pixel_hi;

  double operator()(double v) const {
    const double t = hi == lo ? 0.5 : (v - lo) / (hi - lo);
    return pixel_lo + t * (pixel_hi - pixel_lo);
  }
};

std::string format_tick(double v) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof(buf), v,
                           std::chars_format::general, 6);
  return std::string(buf, res.ptr);
}

}  // namespace

void write_svg_line_chart(std::ostream& out, std::span<const double> xs,
                          std::span<const double> ys,
                          const ChartLabels& labels) {
  const int width = 720, height = 480;
  const double left = 72, right = 24, top = 40, bottom = 56;

  double x_lo = std::numeric_limits<double>::infinity(), x_hi = -x_lo;
  double y_lo = x_lo, y_hi = -x_lo;
  for (double v : xs) {
    x_lo = std::min(x_lo, v);
    x_hi = std::max(x_hi, v);
  }
  for (double v : ys) {
    y_lo = std::min(y_lo, v);
    y_hi = std::max(y_hi, v);
  }
  if (xs.empty()) x_lo = 0, x_hi = 1;
  if (ys.empty()) y_lo = 0, y_hi = 1;
  if (y_lo == y_hi) {
    y_lo -= 1;
    y_hi += 1;
  }

  const Scale sx{x_lo, x_hi, left, width - right};
  const Scale sy{y_lo, y_hi, height - bottom, top};

  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width
      << "\" height=\"" << height << "\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<text x=\"" << width / 2 << "\" y=\"24\" text-anchor=\"middle\" "
         "font-size=\"16\">"
      << labels.title << "</text>\n";

  // Axes.
  out << "<line x1=\"" << left << "\" y1=\"" << height - bottom << "\" x2=\""
      << width - right << "\" y2=\"" << height - bottom
      << "\" stroke=\"black\"/>\n";
  out << "<line x1=\"" << left << "\" y1=\"" << top << "\" x2=\"" << left
      << "\" y2=\"" << height - bottom << "\" stroke=\"black\"/>\n";

  const int ticks = 6;
  for (int t = 0; t <= ticks; ++t) {
    const double fx = x_lo + (x_hi - x_lo) * t / ticks;
    const double px = sx(fx);
    out << "<line x1=\"" << px << "\" y1=\"" << height - bottom << "\" x2=\""
        << px << "\" y2=\"" << height - bottom + 5 << "\" stroke=\"black\"/>\n";
    out << "<text x=\"" << px << "\" y=\"" << height - bottom + 18
        << "\" text-anchor=\"middle\" font-size=\"11\">" << format_tick(fx)
        << "</text>\n";
    const double fy = y_lo + (y_hi - y_lo) * t / ticks;
    const double py = sy(fy);
    out << "<line x1=\"" << left - 5 << "\" y1=\"" << py << "\" x2=\"" << left
        << "\" y2=\"" << py << "\" stroke=\"black\"/>\n";
    out << "<text x=\"" << left - 8 << "\" y=\"" << py + 4
        << "\" text-anchor=\"end\" font-size=\"11\">" << format_tick(fy)
        << "</text>\n";
  }

  out << "<text x=\"" << (left + width - right) / 2 << "\" y=\""
      << height - 12 << "\" text-anchor=\"middle\" font-size=\"13\">"
      << labels.x_label << "</text>\n";
  out << "<text x=\"18\" y=\"" << (top + height - bottom) / 2
      << "\" text-anchor=\"middle\" font-size=\"13\" transform=\"rotate(-90 18 "
      << (top + height - bottom) / 2 << ")\">" << labels.y_label
      << "</text>\n";

  out << "<polyline fill=\"none\" stroke=\"#1f6fb2\" stroke-width=\"1.5\" "
         "points=\"";
  const std::size_t count = std::min(xs.size(), ys.size());
  for (std::size_t i = 0; i < count; ++i) {
    if (i) out << ' ';
    out << sx(xs[i]) << ',' << sy(ys[i]);
  }
  out << "\"/>\n</svg>\n";
}

}  // namespace prsplit
