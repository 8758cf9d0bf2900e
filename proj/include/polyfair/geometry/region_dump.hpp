#pragma once

#include <vector>

#include "polyfair/common/json_writer.hpp"
#include "polyfair/geometry/polytope.hpp"

namespace polyfair::geometry {

struct DumpEntry {
  HPolytope polytope;
  int label = 1;
  Json categorical_assignment = Json::object();  // feature name -> value label
};

// JSON list of {"C": rows, "d": offsets, "label": 0|1, "categorical_assignment": {...}}.
Json region_dump_to_json(const std::vector<DumpEntry>& entries);
std::vector<DumpEntry> region_dump_from_json(const Json& j);

}  // namespace polyfair::geometry
