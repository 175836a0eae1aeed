#pragma once

#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace reluland::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitCertificate = 1;
inline constexpr int kExitUsage = 2;

inline constexpr const char* kSchemaVersion = "1.0";

/// Entry point shared by the executable and the tests. Reports go to `out`
/// unless --out is given; diagnostics go to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// Parses a decimal or a fraction such as "1/3" or "-2/5". Throws
/// reluland::ParseError on anything else.
double parse_real(std::string_view text);

struct Polyline {
  std::string label;
  std::string color;
  std::vector<double> xs;
  std::vector<double> ys;
};

/// Standalone SVG document with one <polyline> per series, a frame, and
/// axis ticks.
std::string render_svg(const std::vector<Polyline>& series, std::string_view title);

}  // namespace reluland::cli
