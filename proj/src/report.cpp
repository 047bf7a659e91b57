#include "pcm/report.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

namespace pcm {

namespace {

constexpr double kCanvas = 600;
constexpr double kMargin = 30;

const std::array<const char*, 10> kPalette = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
                                              "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::string full(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// Maps the x/y extent of some point sets onto the square canvas, y up.
struct Frame {
  double min_x = 0, min_y = 0, scale = 1;

  static Frame fit(std::initializer_list<const PointSet<double>*> sets) {
    double lo_x = std::numeric_limits<double>::infinity(), lo_y = lo_x;
    double hi_x = -lo_x, hi_y = -lo_x;
    for (const PointSet<double>* s : sets) {
      if (!s) continue;
      for (Index i = 0; i < s->rows(); ++i) {
        lo_x = std::min(lo_x, (*s)(i, 0));
        hi_x = std::max(hi_x, (*s)(i, 0));
        lo_y = std::min(lo_y, (*s)(i, 1));
        hi_y = std::max(hi_y, (*s)(i, 1));
      }
    }
    Frame f;
    const double span = std::max({hi_x - lo_x, hi_y - lo_y, 1e-9});
    f.min_x = lo_x;
    f.min_y = lo_y;
    f.scale = (kCanvas - 2 * kMargin) / span;
    return f;
  }
  double x(double v) const { return kMargin + (v - min_x) * scale; }
  double y(double v) const { return kCanvas - kMargin - (v - min_y) * scale; }
};

std::string triangle(double cx, double cy, double size, const char* fill) {
  std::ostringstream out;
  out << "<polygon points=\"" << num(cx) << ',' << num(cy - size) << ' ' << num(cx - size) << ','
      << num(cy + size * 0.8) << ' ' << num(cx + size) << ',' << num(cy + size * 0.8) << "\" fill=\"" << fill
      << "\" stroke=\"black\" stroke-width=\"1\"/>\n";
  return out.str();
}

std::string svg_open(double width, double height) {
  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(width) << "\" height=\"" << num(height)
      << "\" viewBox=\"0 0 " << num(width) << ' ' << num(height) << "\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  return out.str();
}

}  // namespace

void write_trace_csv(std::ostream& out, const Trace& trace) {
  const Index d = trace.iterations.empty() ? 2 : trace.iterations.front().agent_positions.cols();
  out << "iter,agent_id,x,y";
  if (d == 3) out << ",z";
  out << ",objective,max_displacement\n";
  for (const IterationRecord& rec : trace.iterations) {
    for (Index j = 0; j < rec.agent_positions.rows(); ++j) {
      out << rec.iter << ',' << j;
      for (Index c = 0; c < d; ++c) out << ',' << full(rec.agent_positions(j, c));
      out << ',' << full(rec.objective) << ',' << full(rec.max_displacement) << '\n';
    }
  }
}

void write_objectives_csv(std::ostream& out, const std::vector<ObjectiveSeries>& series) {
  std::size_t length = 0;
  out << "iter";
  for (const ObjectiveSeries& s : series) {
    out << ',' << s.label;
    length = std::max(length, s.values.size());
  }
  out << '\n';
  for (std::size_t k = 0; k < length; ++k) {
    out << k;
    for (const ObjectiveSeries& s : series) {
      out << ',';
      if (k < s.values.size()) out << full(s.values[k]);
    }
    out << '\n';
  }
}

std::string render_state_svg(const Scenario& scenario, const Trace& trace, double rho,
                             const PointSet<double>* reference) {
  const IterationRecord& first = trace.iterations.front();
  const IterationRecord& last = trace.final();
  const Frame frame = Frame::fit({&scenario.pois, &first.agent_positions, &last.agent_positions, reference});
  std::ostringstream out;
  out << svg_open(kCanvas, kCanvas);

  if (std::isfinite(rho)) {
    for (Index j = 0; j < last.agent_positions.rows(); ++j) {
      out << "<circle cx=\"" << num(frame.x(last.agent_positions(j, 0))) << "\" cy=\""
          << num(frame.y(last.agent_positions(j, 1))) << "\" r=\"" << num(rho * frame.scale)
          << "\" fill=\"none\" stroke=\"gray\" stroke-dasharray=\"6,4\"/>\n";
    }
  }
  for (Index i = 0; i < scenario.pois.rows(); ++i) {
    Index owner = 0;
    last.U.values.row(i).maxCoeff(&owner);
    out << "<circle cx=\"" << num(frame.x(scenario.pois(i, 0))) << "\" cy=\"" << num(frame.y(scenario.pois(i, 1)))
        << "\" r=\"4\" fill=\"" << kPalette[static_cast<std::size_t>(owner) % kPalette.size()]
        << "\" stroke=\"black\" stroke-width=\"0.5\"/>\n";
  }
  for (Index j = 0; j < first.agent_positions.rows(); ++j)
    out << triangle(frame.x(first.agent_positions(j, 0)), frame.y(first.agent_positions(j, 1)), 7, "white");
  if (reference) {
    for (Index j = 0; j < reference->rows(); ++j)
      out << triangle(frame.x((*reference)(j, 0)), frame.y((*reference)(j, 1)), 7, "red");
  }
  for (Index j = 0; j < last.agent_positions.rows(); ++j)
    out << triangle(frame.x(last.agent_positions(j, 0)), frame.y(last.agent_positions(j, 1)), 7, "blue");
  out << "</svg>\n";
  return out.str();
}

std::string render_membership_svg(const Scenario& scenario, const IterationRecord& state, Index agent) {
  const Frame frame = Frame::fit({&scenario.pois, &state.agent_positions});
  std::ostringstream out;
  out << svg_open(kCanvas, kCanvas);
  for (Index i = 0; i < scenario.pois.rows(); ++i) {
    const double cx = frame.x(scenario.pois(i, 0));
    const double cy = frame.y(scenario.pois(i, 1));
    const double u = state.U(i, agent);
    if (u == 0) {
      out << "<path d=\"M" << num(cx - 4) << ',' << num(cy - 4) << " L" << num(cx + 4) << ',' << num(cy + 4) << " M"
          << num(cx - 4) << ',' << num(cy + 4) << " L" << num(cx + 4) << ',' << num(cy - 4)
          << "\" stroke=\"black\" stroke-width=\"1.5\"/>\n";
      continue;
    }
    const int red = static_cast<int>(std::lround(255 * u));
    const int blue = 255 - red;
    out << "<circle cx=\"" << num(cx) << "\" cy=\"" << num(cy) << "\" r=\"4\" fill=\"rgb(" << red << ",0," << blue
        << ")\"/>\n";
  }
  out << triangle(frame.x(state.agent_positions(agent, 0)), frame.y(state.agent_positions(agent, 1)), 7, "blue");
  out << "</svg>\n";
  return out.str();
}

std::string render_objectives_svg(const std::vector<ObjectiveSeries>& series) {
  constexpr double width = 720, height = 480, left = 70, right = 150, top = 20, bottom = 50;
  std::size_t length = 1;
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (const ObjectiveSeries& s : series) {
    length = std::max(length, s.values.size());
    for (double v : s.values) lo = std::min(lo, v), hi = std::max(hi, v);
  }
  if (!(hi > lo)) hi = lo + 1;
  const double plot_w = width - left - right;
  const double plot_h = height - top - bottom;
  auto px = [&](double k) { return left + plot_w * k / std::max<double>(1, static_cast<double>(length - 1)); };
  auto py = [&](double v) { return top + plot_h * (1 - (v - lo) / (hi - lo)); };

  std::ostringstream out;
  out << svg_open(width, height);
  out << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << plot_w << "\" height=\"" << plot_h
      << "\" fill=\"none\" stroke=\"black\"/>\n";
  out << "<text x=\"" << left + plot_w / 2 << "\" y=\"" << height - 10
      << "\" text-anchor=\"middle\" font-size=\"13\">iteration</text>\n";
  out << "<text x=\"15\" y=\"" << top + plot_h / 2 << "\" font-size=\"13\" transform=\"rotate(-90 15 "
      << top + plot_h / 2 << ")\" text-anchor=\"middle\">objective J</text>\n";
  for (int t = 0; t <= 4; ++t) {
    const double v = lo + (hi - lo) * t / 4.0;
    out << "<text x=\"" << left - 5 << "\" y=\"" << num(py(v) + 4) << "\" text-anchor=\"end\" font-size=\"10\">"
        << num(v) << "</text>\n";
  }
  out << "<text x=\"" << left << "\" y=\"" << top + plot_h + 15 << "\" font-size=\"10\">0</text>\n";
  out << "<text x=\"" << left + plot_w << "\" y=\"" << top + plot_h + 15 << "\" text-anchor=\"end\" font-size=\"10\">"
      << length - 1 << "</text>\n";

  for (std::size_t s = 0; s < series.size(); ++s) {
    const char* color = kPalette[s % kPalette.size()];
    out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t k = 0; k < series[s].values.size(); ++k)
      out << num(px(static_cast<double>(k))) << ',' << num(py(series[s].values[k])) << ' ';
    out << "\"/>\n";
    const double ly = top + 15 + 18 * static_cast<double>(s);
    out << "<line x1=\"" << width - right + 10 << "\" y1=\"" << ly << "\" x2=\"" << width - right + 35 << "\" y2=\"" << ly
        << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
    out << "<text x=\"" << width - right + 40 << "\" y=\"" << ly + 4 << "\" font-size=\"12\">" << series[s].label
        << "</text>\n";
  }
  out << "</svg>\n";
  return out.str();
}

}  // namespace pcm
