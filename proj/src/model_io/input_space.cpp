#include "polyfair/model_io/input_space.hpp"

#include <algorithm>

#include "polyfair/common/errors.hpp"

namespace polyfair::io {

InputSpace::InputSpace(int full_dim) : full_dim_(full_dim) {
  for (int i = 0; i < full_dim; ++i) free_.push_back(i);
}

InputSpace InputSpace::pin(int coord, double value) const {
  auto it = std::find(free_.begin(), free_.end(), coord);
  if (it == free_.end()) throw DimensionError("coordinate " + std::to_string(coord) + " is not free");
  InputSpace out = *this;
  out.free_.erase(out.free_.begin() + (it - free_.begin()));
  out.pinned_.emplace_back(coord, value);
  std::sort(out.pinned_.begin(), out.pinned_.end());
  return out;
}

Eigen::VectorXd InputSpace::embed(const Eigen::VectorXd& reduced) const {
  if (reduced.size() != reduced_dim()) throw DimensionError("reduced point has wrong dimension");
  Eigen::VectorXd x(full_dim_);
  for (int k = 0; k < reduced_dim(); ++k) x(free_[k]) = reduced(k);
  for (const auto& [c, v] : pinned_) x(c) = v;
  return x;
}

FeedForwardNetwork InputSpace::restrict(const FeedForwardNetwork& net) const {
  if (net.input_dim() != full_dim_) throw DimensionError("network input does not match the input space");
  auto layers = net.layers();
  auto& first = layers.front();
  Eigen::MatrixXd w(first.out_dim(), reduced_dim());
  for (int k = 0; k < reduced_dim(); ++k) w.col(k) = first.weights.col(free_[k]);
  Eigen::VectorXd b = first.bias;
  for (const auto& [c, v] : pinned_) b += v * first.weights.col(c);
  first.weights = std::move(w);
  first.bias = std::move(b);
  return FeedForwardNetwork(std::move(layers));
}

ProtectedFixing fix_protected(const FeatureSchema& schema, const std::string& class_value) {
  const int cls = schema.protected_value_index(class_value);
  const auto slots = schema.protected_slots();
  ProtectedFixing out;
  out.class_index = cls;
  out.space = InputSpace(schema.input_dim());
  for (int k = 0; k < slots.width; ++k) {
    const double v = k == cls ? 1.0 : 0.0;
    out.slots.push_back(v);
    out.space = out.space.pin(slots.offset + k, v);
  }
  return out;
}

InputSpace fix_assignment(const FeatureSchema& schema, const InputSpace& space,
                          const CategoricalAssignment& assignment) {
  const auto& cats = schema.free_categoricals();
  if (assignment.value_index.size() != cats.size())
    throw DimensionError("assignment does not cover the schema's categorical features");
  InputSpace out = space;
  for (std::size_t k = 0; k < cats.size(); ++k) {
    const auto r = schema.slots(cats[k]);
    const int v = assignment.value_index[k];
    if (v < 0 || v >= r.width) throw SchemaError("assignment value out of range");
    for (int s = 0; s < r.width; ++s) out = out.pin(r.offset + s, s == v ? 1.0 : 0.0);
  }
  return out;
}

InputSpace continuous_space(const FeatureSchema& schema, const std::string& class_value,
                            const CategoricalAssignment& assignment) {
  return fix_assignment(schema, fix_protected(schema, class_value).space, assignment);
}

}  // namespace polyfair::io
