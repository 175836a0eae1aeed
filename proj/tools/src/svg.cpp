#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "reluland_cli/cli.hpp"

namespace reluland::cli {

namespace {

constexpr double kWidth = 640.0;
constexpr double kHeight = 400.0;
constexpr double kMargin = 50.0;

std::string escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

std::string render_svg(const std::vector<Polyline>& series, std::string_view title) {
  double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
  for (const Polyline& s : series) {
    for (double x : s.xs) x0 = std::min(x0, x), x1 = std::max(x1, x);
    for (double y : s.ys) y0 = std::min(y0, y), y1 = std::max(y1, y);
  }
  if (!(x0 < x1)) x0 = 0.0, x1 = 1.0;
  if (!(y0 < y1)) y0 -= 0.5, y1 += 0.5;
  const double pad = 0.05 * (y1 - y0);
  y0 -= pad;
  y1 += pad;

  auto px = [&](double x) { return kMargin + (x - x0) / (x1 - x0) * (kWidth - 2 * kMargin); };
  auto py = [&](double y) { return kHeight - kMargin - (y - y0) / (y1 - y0) * (kHeight - 2 * kMargin); };

  std::ostringstream o;
  o.precision(6);
  o << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\" width=\""
    << kWidth << "\" height=\"" << kHeight << "\">\n";
  o << "<title>" << escape(title) << "</title>\n";
  o << "<rect x=\"" << kMargin << "\" y=\"" << kMargin << "\" width=\"" << kWidth - 2 * kMargin << "\" height=\""
    << kHeight - 2 * kMargin << "\" fill=\"none\" stroke=\"black\"/>\n";
  constexpr int kTicks = 5;
  for (int i = 0; i <= kTicks; ++i) {
    const double x = x0 + (x1 - x0) * i / kTicks;
    const double y = y0 + (y1 - y0) * i / kTicks;
    o << "<line x1=\"" << px(x) << "\" y1=\"" << kHeight - kMargin << "\" x2=\"" << px(x) << "\" y2=\""
      << kHeight - kMargin + 5 << "\" stroke=\"black\"/>";
    o << "<text x=\"" << px(x) << "\" y=\"" << kHeight - kMargin + 18 << "\" font-size=\"10\" text-anchor=\"middle\">"
      << x << "</text>\n";
    o << "<line x1=\"" << kMargin - 5 << "\" y1=\"" << py(y) << "\" x2=\"" << kMargin << "\" y2=\"" << py(y)
      << "\" stroke=\"black\"/>";
    o << "<text x=\"" << kMargin - 8 << "\" y=\"" << py(y) + 3 << "\" font-size=\"10\" text-anchor=\"end\">" << y
      << "</text>\n";
  }
  for (const Polyline& s : series) {
    o << "<polyline fill=\"none\" stroke=\"" << escape(s.color) << "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < s.xs.size() && i < s.ys.size(); ++i) {
      if (i > 0) o << ' ';
      o << px(s.xs[i]) << ',' << py(s.ys[i]);
    }
    o << "\"><title>" << escape(s.label) << "</title></polyline>\n";
  }
  o << "</svg>\n";
  return o.str();
}

}  // namespace reluland::cli
