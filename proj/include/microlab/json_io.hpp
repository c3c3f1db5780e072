#pragma once

#include <initializer_list>
#include <string>

#include <json.hpp>

#include "microlab/covering.hpp"
#include "microlab/energy.hpp"
#include "microlab/profile.hpp"
#include "microlab/sbv_limit.hpp"

namespace microlab {

using json = nlohmann::json;

/// Throws std::invalid_argument naming the first key of `j` not in `allowed`.
void check_keys(const json& j, std::initializer_list<const char*> allowed, const std::string& where);

json to_json(const EnergyParams& p);
EnergyParams params_from_json(const json& j);

json to_json(const EnergyBreakdown& e);

json to_json(const Cell& c);
Cell cell_from_json(const json& j);

/// {domain, bc, blocks, interfaces}; interfaces are informational and ignored on input.
json to_json(const AnalyticProfile& prof);
AnalyticProfile profile_from_json(const json& j);

/// {p, sigma, gap_min, cells, segments:[{y, a, b, h:{breaks, pieces}}]}
json to_json(const PiecewiseSBV& u);
PiecewiseSBV sbv_from_json(const json& j);

json to_json(const ValidationReport& r);

/// {families: [[{cx, cy, l}...]], constants: {c, N, a, b}, checks: {...}}
json to_json(const SquareCover& cover, const CoverReport& report);

json read_json_file(const std::string& path);
void write_json_file(const std::string& path, const json& j);

}  // namespace microlab
