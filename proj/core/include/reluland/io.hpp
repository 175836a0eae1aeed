#pragma once

#include <string>
#include <string_view>

#include "reluland/landscape.hpp"
#include "reluland/network.hpp"
#include "reluland/target.hpp"

namespace reluland {

/// Parses a target spec:
///   {"kind": "piecewise_poly", "breakpoints": [...], "pieces": [[c0, c1, ...], ...], "continuous": true}
///   {"kind": "benchmark", "alpha": ..., "beta": ..., "a": 0, "b": 1, "scale": 1}
/// "continuous" is optional; when true, continuity is checked. Throws
/// ParseError on malformed or invalid input.
Target parse_target_json(std::string_view text);
std::string target_to_json(const Target& t);

/// {"H": H, "theta": [...]}
std::string params_to_json(const Params& p);
Params parse_params_json(std::string_view text);

std::string hessian_to_json(const HessianReport& h);

/// "x,y" rows of the realization sampled on `points` uniformly spaced points.
std::string realization_csv(const Realization& r, int points = 201);

}  // namespace reluland
