#include <cmath>
#include <cstdio>
#include <sstream>

#include "poletbc/experiment.hpp"

namespace poletbc {

namespace {

double axis(double v, bool log) { return log ? std::log10(v) : v; }

bool drawable(double x, double y, const PlotStyle& s) {
  if (!std::isfinite(x) || !std::isfinite(y)) return false;
  if (s.log_x && !(x > 0)) return false;
  if (s.log_y && !(y > 0)) return false;
  return true;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char ch : s) {
    switch (ch) {
      case '<':
        out += "&lt;";
        break;
      case '>':
        out += "&gt;";
        break;
      case '&':
        out += "&amp;";
        break;
      case '"':
        out += "&quot;";
        break;
      default:
        out += ch;
    }
  }
  return out;
}

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string tick_label(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

// Widens an empty or degenerate range.
void settle(double& lo, double& hi, bool log) {
  if (lo > hi) {
    lo = log ? 1.0 : 0.0;
    hi = log ? 10.0 : 1.0;
  } else if (lo == hi) {
    if (log) {
      lo /= std::sqrt(10.0);
      hi *= std::sqrt(10.0);
    } else {
      const double pad = lo == 0 ? 0.5 : 0.1 * std::abs(lo);
      lo -= pad;
      hi += pad;
    }
  }
}

const char* const kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f"};

}  // namespace

Point PlotFrame::to_pixel(double x, double y) const {
  const double w = style.width - 2.0 * style.margin;
  const double h = style.height - 2.0 * style.margin;
  const double x0 = axis(x_min, style.log_x), x1 = axis(x_max, style.log_x);
  const double y0 = axis(y_min, style.log_y), y1 = axis(y_max, style.log_y);
  const double px = style.margin + (axis(x, style.log_x) - x0) / (x1 - x0) * w;
  const double py = style.height - style.margin - (axis(y, style.log_y) - y0) / (y1 - y0) * h;
  return {px, py};
}

std::string render_svg(const std::vector<PlotSeries>& series, const PlotStyle& style, int* warnings) {
  int skipped = 0;
  PlotFrame f;
  f.style = style;
  f.x_min = f.y_min = INFINITY;
  f.x_max = f.y_max = -INFINITY;
  for (const auto& s : series) {
    for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
      if (!drawable(s.x[i], s.y[i], style)) {
        ++skipped;
        continue;
      }
      f.x_min = std::min(f.x_min, s.x[i]);
      f.x_max = std::max(f.x_max, s.x[i]);
      f.y_min = std::min(f.y_min, s.y[i]);
      f.y_max = std::max(f.y_max, s.y[i]);
    }
  }
  settle(f.x_min, f.x_max, style.log_x);
  settle(f.y_min, f.y_max, style.log_y);
  if (warnings) *warnings = skipped;

  std::ostringstream os;
  const int m = style.margin, W = style.width, H = style.height;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\" viewBox=\"0 0 " << W
     << ' ' << H << "\">\n";
  os << "<rect x=\"0\" y=\"0\" width=\"" << W << "\" height=\"" << H << "\" fill=\"white\"/>\n";
  os << "<g class=\"axes\" stroke=\"black\" fill=\"none\">\n";
  os << "<line x1=\"" << m << "\" y1=\"" << H - m << "\" x2=\"" << W - m << "\" y2=\"" << H - m << "\"/>\n";
  os << "<line x1=\"" << m << "\" y1=\"" << m << "\" x2=\"" << m << "\" y2=\"" << H - m << "\"/>\n";
  os << "</g>\n";

  os << "<g class=\"ticks\" font-family=\"sans-serif\" font-size=\"10\">\n";
  for (const double v : {f.x_min, f.x_max}) {
    const Point p = f.to_pixel(v, f.y_min);
    os << "<text x=\"" << num(p.x()) << "\" y=\"" << H - m + 14 << "\" text-anchor=\"middle\">" << tick_label(v)
       << "</text>\n";
  }
  for (const double v : {f.y_min, f.y_max}) {
    const Point p = f.to_pixel(f.x_min, v);
    os << "<text x=\"" << m - 4 << "\" y=\"" << num(p.y()) << "\" text-anchor=\"end\">" << tick_label(v)
       << "</text>\n";
  }
  os << "</g>\n";

  os << "<g class=\"labels\" font-family=\"sans-serif\" font-size=\"12\">\n";
  os << "<text x=\"" << W / 2 << "\" y=\"" << H - 10 << "\" text-anchor=\"middle\">" << escape(style.x_label)
     << (style.log_x ? " (log)" : "") << "</text>\n";
  os << "<text x=\"14\" y=\"" << H / 2 << "\" text-anchor=\"middle\" transform=\"rotate(-90 14 " << H / 2 << ")\">"
     << escape(style.y_label) << (style.log_y ? " (log)" : "") << "</text>\n";
  if (!style.title.empty()) {
    os << "<text x=\"" << W / 2 << "\" y=\"20\" text-anchor=\"middle\">" << escape(style.title) << "</text>\n";
  }
  os << "</g>\n";

  for (std::size_t k = 0; k < series.size(); ++k) {
    const auto& s = series[k];
    const char* color = kColors[k % (sizeof kColors / sizeof *kColors)];
    os << "<polyline class=\"series\" data-label=\"" << escape(s.label) << "\" fill=\"none\" stroke=\"" << color
       << "\" stroke-width=\"1.5\" points=\"";
    bool first = true;
    for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
      if (!drawable(s.x[i], s.y[i], style)) continue;
      const Point p = f.to_pixel(s.x[i], s.y[i]);
      os << (first ? "" : " ") << num(p.x()) << ',' << num(p.y());
      first = false;
    }
    os << "\"/>\n";
    os << "<text font-family=\"sans-serif\" font-size=\"11\" fill=\"" << color << "\" x=\"" << W - m + 4 << "\" y=\""
       << m + 14 * static_cast<int>(k) << "\">" << escape(s.label) << "</text>\n";
  }
  os << "</svg>\n";
  return os.str();
}

std::vector<PlotSeries> series_from_table(const CsvTable& table, const std::string& prefix) {
  std::vector<PlotSeries> out;
  for (std::size_t c = 1; c < table.columns.size(); ++c) {
    PlotSeries s;
    s.label = prefix.empty() ? table.columns[c] : prefix + ":" + table.columns[c];
    for (const auto& row : table.rows) {
      s.x.push_back(row[0]);
      s.y.push_back(row[c]);
    }
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace poletbc
