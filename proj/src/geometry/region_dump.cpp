#include "polyfair/geometry/region_dump.hpp"

#include "polyfair/common/errors.hpp"

namespace polyfair::geometry {

Json region_dump_to_json(const std::vector<DumpEntry>& entries) {
  Json out = Json::array();
  for (const auto& e : entries) {
    Json rows = Json::array();
    for (int i = 0; i < e.polytope.num_constraints(); ++i) {
      Json row = Json::array();
      for (int j = 0; j < e.polytope.dim(); ++j) row.push_back(e.polytope.C()(i, j));
      rows.push_back(std::move(row));
    }
    Json d = Json::array();
    for (int i = 0; i < e.polytope.num_constraints(); ++i) d.push_back(e.polytope.d()(i));
    out.push_back(Json{{"C", rows}, {"d", d}, {"label", e.label}, {"categorical_assignment", e.categorical_assignment}});
  }
  return out;
}

std::vector<DumpEntry> region_dump_from_json(const Json& j) {
  if (!j.is_array()) throw SchemaError("region dump must be a JSON list");
  std::vector<DumpEntry> out;
  for (const auto& e : j) {
    const auto& rows = e.at("C");
    const auto& d = e.at("d");
    if (rows.size() != d.size()) throw SchemaError("region dump: C and d differ in length");
    const int m = static_cast<int>(rows.size());
    const int n = m > 0 ? static_cast<int>(rows[0].size()) : 0;
    Eigen::MatrixXd C(m, n);
    Eigen::VectorXd dv(m);
    for (int i = 0; i < m; ++i) {
      if (static_cast<int>(rows[i].size()) != n) throw SchemaError("region dump: ragged constraint matrix");
      for (int k = 0; k < n; ++k) C(i, k) = rows[i][k].get<double>();
      dv(i) = d[i].get<double>();
    }
    const int label = e.at("label").get<int>();
    if (label != 0 && label != 1) throw SchemaError("region dump: label must be 0 or 1");
    out.push_back(DumpEntry{HPolytope(std::move(C), std::move(dv)), label,
                            e.value("categorical_assignment", Json::object())});
  }
  return out;
}

}  // namespace polyfair::geometry
