#include "reluland/io.hpp"

#include <sstream>

#include "json.hpp"
#include "reluland/errors.hpp"

namespace reluland {

using nlohmann::json;

namespace {

json parse(std::string_view text) {
  try {
    return json::parse(text.begin(), text.end());
  } catch (const json::exception& e) {
    throw ParseError(std::string("malformed JSON: ") + e.what());
  }
}

double number(const json& j, const char* key) {
  if (!j.contains(key)) throw ParseError(std::string("missing field '") + key + "'");
  if (!j.at(key).is_number()) throw ParseError(std::string("field '") + key + "' must be a number");
  return j.at(key).get<double>();
}

double number_or(const json& j, const char* key, double fallback) {
  return j.contains(key) ? number(j, key) : fallback;
}

std::vector<double> numbers(const json& j, const char* what) {
  if (!j.is_array()) throw ParseError(std::string(what) + " must be an array of numbers");
  std::vector<double> out;
  for (const json& x : j) {
    if (!x.is_number()) throw ParseError(std::string(what) + " must be an array of numbers");
    out.push_back(x.get<double>());
  }
  return out;
}

}  // namespace

Target parse_target_json(std::string_view text) {
  const json j = parse(text);
  if (!j.is_object() || !j.contains("kind") || !j.at("kind").is_string())
    throw ParseError("target spec needs a string field 'kind'");
  const std::string kind = j.at("kind").get<std::string>();
  try {
    if (kind == "benchmark") {
      return Target(BenchmarkTarget(number(j, "alpha"), number(j, "beta"), number_or(j, "a", 0.0),
                                    number_or(j, "b", 1.0), number_or(j, "scale", 1.0)));
    }
    if (kind == "piecewise_poly") {
      if (!j.contains("breakpoints") || !j.contains("pieces"))
        throw ParseError("piecewise target needs 'breakpoints' and 'pieces'");
      std::vector<double> bps = numbers(j.at("breakpoints"), "breakpoints");
      if (!j.at("pieces").is_array()) throw ParseError("pieces must be an array");
      std::vector<Polynomial> pieces;
      for (const json& piece : j.at("pieces")) pieces.emplace_back(numbers(piece, "piece coefficients"));
      PiecewisePolynomial pp(std::move(bps), std::move(pieces));
      if (j.contains("continuous")) {
        if (!j.at("continuous").is_boolean()) throw ParseError("'continuous' must be a boolean");
        if (j.at("continuous").get<bool>() && !pp.is_continuous())
          throw ParseError("target marked continuous is discontinuous at a breakpoint");
      }
      return Target(std::move(pp));
    }
  } catch (const DomainError& e) {
    throw ParseError(std::string("invalid target: ") + e.what());
  }
  throw ParseError("unknown target kind '" + kind + "'");
}

std::string target_to_json(const Target& t) {
  json j;
  if (const BenchmarkTarget* bt = t.benchmark()) {
    j = {{"kind", "benchmark"}, {"alpha", bt->alpha()}, {"beta", bt->beta()},
         {"a", bt->a()},        {"b", bt->b()},         {"scale", bt->scale()}};
  } else {
    const PiecewisePolynomial& pp = *t.piecewise();
    json pieces = json::array();
    for (const Polynomial& p : pp.pieces()) pieces.push_back(std::vector<double>(p.coeffs().begin(), p.coeffs().end()));
    j = {{"kind", "piecewise_poly"},
         {"breakpoints", std::vector<double>(pp.breakpoints().begin(), pp.breakpoints().end())},
         {"pieces", pieces}};
  }
  return j.dump();
}

std::string params_to_json(const Params& p) {
  const json j = {{"H", p.width()}, {"theta", std::vector<double>(p.theta().begin(), p.theta().end())}};
  return j.dump();
}

Params parse_params_json(std::string_view text) {
  const json j = parse(text);
  if (!j.is_object() || !j.contains("H") || !j.at("H").is_number_integer() || !j.contains("theta"))
    throw ParseError("parameter file needs integer 'H' and array 'theta'");
  try {
    return Params(j.at("H").get<int>(), numbers(j.at("theta"), "theta"));
  } catch (const DomainError& e) {
    throw ParseError(std::string("invalid parameters: ") + e.what());
  }
}

std::string hessian_to_json(const HessianReport& h) {
  json rows = json::array();
  for (int i = 0; i < h.dim; ++i) {
    json row = json::array();
    for (int k = 0; k < h.dim; ++k) row.push_back(h.at(i, k));
    rows.push_back(row);
  }
  const json j = {{"dim", h.dim},
                  {"coords", h.coords},
                  {"matrix", rows},
                  {"eigenvalues", h.eigenvalues},
                  {"numerical_rank", h.numerical_rank},
                  {"rank_tol", h.rank_tol}};
  return j.dump();
}

std::string realization_csv(const Realization& r, int points) {
  if (points < 2) throw DomainError("need at least two sample points");
  std::ostringstream out;
  out.precision(17);
  out << "x,y\n";
  for (int i = 0; i < points; ++i) {
    const double x = i + 1 == points ? r.hi : r.lo + (r.hi - r.lo) * i / (points - 1);
    out << x << ',' << r(x) << '\n';
  }
  return out.str();
}

}  // namespace reluland
