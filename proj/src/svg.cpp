#include "levyshrink/svg.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "levyshrink/errors.hpp"

namespace levyshrink::svg {

namespace {

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

std::string tick(double v) {
  std::ostringstream os;
  os.precision(3);
  os << v;
  return os.str();
}

}  // namespace

std::string Plot::render(int width, int height) const {
  double x0 = std::numeric_limits<double>::infinity();
  double x1 = -x0;
  double y0 = x0;
  double y1 = -x0;
  auto extend = [&](double x, double y) {
    if (!std::isfinite(x) || !std::isfinite(y)) return;
    x0 = std::min(x0, x);
    x1 = std::max(x1, x);
    y0 = std::min(y0, y);
    y1 = std::max(y1, y);
  };
  for (const auto& s : series_) {
    for (std::size_t i = 0; i < std::min(s.x.size(), s.y.size()); ++i) extend(s.x[i], s.y[i]);
  }
  for (const auto& iv : intervals_) {
    for (std::size_t i = 0; i < iv.x.size(); ++i) {
      extend(iv.x[i], iv.lo[i]);
      extend(iv.x[i], iv.hi[i]);
    }
  }
  if (!std::isfinite(x0)) {
    x0 = 0.0;
    x1 = 1.0;
    y0 = 0.0;
    y1 = 1.0;
  }
  if (x1 == x0) x1 = x0 + 1.0;
  if (y1 == y0) y1 = y0 + 1.0;

  const double left = 60, right = 20, top = 30, bottom = 50;
  const double pw = width - left - right;
  const double ph = height - top - bottom;
  auto px = [&](double x) { return left + (x - x0) / (x1 - x0) * pw; };
  auto py = [&](double y) { return top + (1.0 - (y - y0) / (y1 - y0)) * ph; };

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
     << "\" font-family=\"sans-serif\" font-size=\"11\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<text x=\"" << width / 2 << "\" y=\"18\" text-anchor=\"middle\" font-size=\"13\">"
     << escape(title_) << "</text>\n";
  os << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << pw << "\" height=\"" << ph
     << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (int i = 0; i <= 4; ++i) {
    const double xv = x0 + (x1 - x0) * i / 4.0;
    const double yv = y0 + (y1 - y0) * i / 4.0;
    os << "<text x=\"" << px(xv) << "\" y=\"" << top + ph + 15 << "\" text-anchor=\"middle\">"
       << tick(xv) << "</text>\n";
    os << "<text x=\"" << left - 5 << "\" y=\"" << py(yv) + 4 << "\" text-anchor=\"end\">"
       << tick(yv) << "</text>\n";
  }
  os << "<text x=\"" << left + pw / 2 << "\" y=\"" << height - 12 << "\" text-anchor=\"middle\">"
     << escape(xlabel_) << "</text>\n";
  os << "<text x=\"14\" y=\"" << top + ph / 2 << "\" text-anchor=\"middle\" transform=\"rotate(-90 14 "
     << top + ph / 2 << ")\">" << escape(ylabel_) << "</text>\n";

  for (const auto& iv : intervals_) {
    for (std::size_t i = 0; i < iv.x.size(); ++i) {
      os << "<line x1=\"" << px(iv.x[i]) << "\" y1=\"" << py(iv.lo[i]) << "\" x2=\"" << px(iv.x[i])
         << "\" y2=\"" << py(iv.hi[i]) << "\" stroke=\"" << iv.color << "\"/>\n";
    }
  }
  int legend = 0;
  for (const auto& s : series_) {
    const std::size_t n = std::min(s.x.size(), s.y.size());
    if (s.line && n > 1) {
      os << "<polyline fill=\"none\" stroke=\"" << s.color << "\""
         << (s.dashed ? " stroke-dasharray=\"5,3\"" : "") << " points=\"";
      for (std::size_t i = 0; i < n; ++i) {
        if (std::isfinite(s.y[i])) os << px(s.x[i]) << ',' << py(s.y[i]) << ' ';
      }
      os << "\"/>\n";
    }
    if (s.markers) {
      for (std::size_t i = 0; i < n; ++i) {
        if (!std::isfinite(s.y[i])) continue;
        os << "<circle cx=\"" << px(s.x[i]) << "\" cy=\"" << py(s.y[i]) << "\" r=\"3\" fill=\""
           << s.color << "\"/>\n";
      }
    }
    if (!s.label.empty()) {
      const double ly = top + 14 + 14 * legend++;
      os << "<line x1=\"" << left + 10 << "\" y1=\"" << ly - 4 << "\" x2=\"" << left + 30
         << "\" y2=\"" << ly - 4 << "\" stroke=\"" << s.color << "\"/>\n";
      os << "<text x=\"" << left + 35 << "\" y=\"" << ly << "\">" << escape(s.label) << "</text>\n";
    }
  }
  os << "</svg>\n";
  return os.str();
}

void Plot::write(const std::filesystem::path& path) const {
  std::ofstream out(path);
  if (!out) throw PreconditionError("cannot write " + path.string());
  out << render();
}

}  // namespace levyshrink::svg
