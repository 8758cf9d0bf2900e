#include "polyfair/model_io/schema.hpp"

#include <set>

#include "polyfair/common/errors.hpp"

namespace polyfair::io {

FeatureSchema::FeatureSchema(std::vector<FeatureSpec> features, std::string protected_feature,
                             std::vector<std::string> protected_values, std::string label_column)
    : features_(std::move(features)),
      protected_feature_(std::move(protected_feature)),
      protected_values_(std::move(protected_values)),
      label_column_(std::move(label_column)) {
  index();
}

void FeatureSchema::index() {
  std::set<std::string> names;
  slots_.clear();
  continuous_.clear();
  free_categoricals_.clear();
  protected_index_ = -1;
  int offset = 0;
  for (int i = 0; i < static_cast<int>(features_.size()); ++i) {
    const auto& f = features_[i];
    if (f.name.empty()) throw SchemaError("feature with empty name");
    if (!names.insert(f.name).second) throw SchemaError("duplicate feature name: " + f.name);
    if (f.kind == FeatureKind::Continuous) {
      if (f.min && f.max && !(*f.min < *f.max))
        throw SchemaError("continuous feature " + f.name + " needs min < max");
      continuous_.push_back(offset);
    } else {
      if (f.values.size() < 2) throw SchemaError("categorical feature " + f.name + " needs >= 2 values");
      std::set<std::string> vals(f.values.begin(), f.values.end());
      if (vals.size() != f.values.size()) throw SchemaError("duplicate value labels in " + f.name);
    }
    slots_.push_back({offset, f.width()});
    offset += f.width();
    if (f.name == protected_feature_) protected_index_ = i;
    else if (f.is_categorical()) free_categoricals_.push_back(i);
  }
  input_dim_ = offset;
  if (protected_index_ < 0) throw SchemaError("protected feature not in schema: " + protected_feature_);
  const auto& p = features_[protected_index_];
  if (!p.is_categorical() || p.values.size() != 2)
    throw SchemaError("protected feature must be categorical with exactly 2 values");
  if (protected_values_.empty()) protected_values_ = p.values;
  if (protected_values_ != p.values)
    throw SchemaError("protected_values must match the protected feature's value labels");
}

int FeatureSchema::feature_index(const std::string& name) const {
  for (int i = 0; i < static_cast<int>(features_.size()); ++i)
    if (features_[i].name == name) return i;
  throw SchemaError("unknown feature: " + name);
}

int FeatureSchema::protected_value_index(const std::string& label) const {
  for (int i = 0; i < 2; ++i)
    if (protected_values_[i] == label) return i;
  throw SchemaError("unknown protected class value: " + label);
}

void FeatureSchema::set_range(int feature, double min, double max) {
  auto& f = features_.at(feature);
  f.min = min;
  f.max = max;
}

Json FeatureSchema::assignment_to_json(const CategoricalAssignment& a) const {
  Json j = Json::object();
  for (std::size_t k = 0; k < free_categoricals_.size(); ++k) {
    const auto& f = features_[free_categoricals_[k]];
    j[f.name] = f.values.at(a.value_index.at(k));
  }
  return j;
}

CategoricalAssignment FeatureSchema::assignment_from_json(const Json& j) const {
  CategoricalAssignment a;
  for (int fi : free_categoricals_) {
    const auto& f = features_[fi];
    if (!j.contains(f.name)) throw SchemaError("assignment misses feature " + f.name);
    const auto label = j.at(f.name).get<std::string>();
    int idx = -1;
    for (int v = 0; v < f.width(); ++v)
      if (f.values[v] == label) idx = v;
    if (idx < 0) throw SchemaError("unknown value " + label + " for " + f.name);
    a.value_index.push_back(idx);
  }
  return a;
}

Json FeatureSchema::to_json() const {
  Json feats = Json::array();
  for (const auto& f : features_) {
    Json j;
    j["name"] = f.name;
    if (f.kind == FeatureKind::Continuous) {
      j["kind"] = "continuous";
      if (f.min) j["min"] = *f.min;
      if (f.max) j["max"] = *f.max;
    } else {
      j["kind"] = "categorical";
      j["values"] = f.values;
    }
    feats.push_back(std::move(j));
  }
  return Json{{"features", feats},
              {"protected_feature", protected_feature_},
              {"protected_values", protected_values_},
              {"label_column", label_column_}};
}

FeatureSchema FeatureSchema::from_json(const Json& j) {
  try {
    std::vector<FeatureSpec> feats;
    for (const auto& jf : j.at("features")) {
      FeatureSpec f;
      f.name = jf.at("name").get<std::string>();
      const auto kind = jf.at("kind").get<std::string>();
      if (kind == "continuous") {
        f.kind = FeatureKind::Continuous;
        if (jf.contains("min")) f.min = jf.at("min").get<double>();
        if (jf.contains("max")) f.max = jf.at("max").get<double>();
      } else if (kind == "categorical") {
        f.kind = FeatureKind::Categorical;
        f.values = jf.at("values").get<std::vector<std::string>>();
      } else {
        throw SchemaError("unknown feature kind: " + kind);
      }
      feats.push_back(std::move(f));
    }
    std::vector<std::string> pv;
    if (j.contains("protected_values")) pv = j.at("protected_values").get<std::vector<std::string>>();
    return FeatureSchema(std::move(feats), j.at("protected_feature").get<std::string>(), std::move(pv),
                         j.value("label_column", std::string("label")));
  } catch (const Json::exception& e) {
    throw SchemaError(std::string("schema document: ") + e.what());
  }
}

}  // namespace polyfair::io
