#pragma once

#include <optional>
#include <string>
#include <vector>

#include "polyfair/common/json_writer.hpp"

namespace polyfair::io {

enum class FeatureKind { Continuous, Categorical };

struct FeatureSpec {
  std::string name;
  FeatureKind kind = FeatureKind::Continuous;
  // Raw-value range used for min-max normalization. Unset until a dataset has
  // been ingested (the statistics come from the train split).
  std::optional<double> min;
  std::optional<double> max;
  std::vector<std::string> values;  // categorical labels, one-hot order

  int width() const { return kind == FeatureKind::Continuous ? 1 : static_cast<int>(values.size()); }
  bool is_categorical() const { return kind == FeatureKind::Categorical; }
};

// Position of a feature inside the encoded input vector.
struct SlotRange {
  int offset = 0;
  int width = 0;
};

// One value per non-protected categorical feature, in schema order.
struct CategoricalAssignment {
  std::vector<int> value_index;
  bool operator==(const CategoricalAssignment&) const = default;
};

class FeatureSchema {
 public:
  FeatureSchema() = default;
  FeatureSchema(std::vector<FeatureSpec> features, std::string protected_feature,
                std::vector<std::string> protected_values, std::string label_column = "label");

  const std::vector<FeatureSpec>& features() const { return features_; }
  const std::string& protected_feature() const { return protected_feature_; }
  const std::vector<std::string>& protected_values() const { return protected_values_; }
  const std::string& label_column() const { return label_column_; }

  int input_dim() const { return input_dim_; }
  int continuous_dim() const { return static_cast<int>(continuous_.size()); }

  int feature_index(const std::string& name) const;  // throws SchemaError
  const FeatureSpec& feature(const std::string& name) const { return features_[feature_index(name)]; }
  SlotRange slots(int feature) const { return slots_[feature]; }
  SlotRange protected_slots() const { return slots_[protected_index_]; }
  int protected_index() const { return protected_index_; }
  // Index of `label` within protected_values(); throws SchemaError.
  int protected_value_index(const std::string& label) const;

  // Encoded-vector positions of the continuous features, in schema order.
  const std::vector<int>& continuous_slots() const { return continuous_; }
  // Feature indices of non-protected categoricals, in schema order.
  const std::vector<int>& free_categoricals() const { return free_categoricals_; }

  void set_range(int feature, double min, double max);

  Json assignment_to_json(const CategoricalAssignment& a) const;
  CategoricalAssignment assignment_from_json(const Json& j) const;

  Json to_json() const;
  static FeatureSchema from_json(const Json& j);

 private:
  void index();

  std::vector<FeatureSpec> features_;
  std::string protected_feature_;
  std::vector<std::string> protected_values_;
  std::string label_column_ = "label";

  std::vector<SlotRange> slots_;
  std::vector<int> continuous_;
  std::vector<int> free_categoricals_;
  int protected_index_ = -1;
  int input_dim_ = 0;
};

}  // namespace polyfair::io
