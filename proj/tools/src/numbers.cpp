#include <charconv>
#include <cmath>
#include <string>

#include "reluland/errors.hpp"
#include "reluland_cli/cli.hpp"

namespace reluland::cli {

namespace {

double parse_decimal(std::string_view s, std::string_view whole) {
  // from_chars for double is missing from older standard libraries.
  const std::string buf(s);
  std::size_t used = 0;
  double value = 0.0;
  try {
    value = std::stod(buf, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (buf.empty() || used != buf.size() || !std::isfinite(value))
    throw ParseError("not a number: '" + std::string(whole) + "'");
  return value;
}

}  // namespace

double parse_real(std::string_view text) {
  const auto slash = text.find('/');
  if (slash == std::string_view::npos) return parse_decimal(text, text);
  const double num = parse_decimal(text.substr(0, slash), text);
  const double den = parse_decimal(text.substr(slash + 1), text);
  if (den == 0.0) throw ParseError("zero denominator in '" + std::string(text) + "'");
  return num / den;
}

}  // namespace reluland::cli
