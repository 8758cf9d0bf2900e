#pragma once

#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "polyfair/model_io/network.hpp"
#include "polyfair/model_io/schema.hpp"

namespace polyfair::io {

// A coordinate subspace of the encoded input: some coordinates pinned to
// constants, the rest free. The free coordinates, in increasing encoded
// order, form the reduced space; embed() maps a reduced point back.
class InputSpace {
 public:
  explicit InputSpace(int full_dim = 0);

  InputSpace pin(int coord, double value) const;

  int full_dim() const { return full_dim_; }
  int reduced_dim() const { return static_cast<int>(free_.size()); }
  const std::vector<int>& free_coords() const { return free_; }
  const std::vector<std::pair<int, double>>& pinned() const { return pinned_; }

  Eigen::VectorXd embed(const Eigen::VectorXd& reduced) const;

  // Same function as `net` restricted to this subspace: the first layer is
  // composed with the embedding, so restrict(net).forward(r) == net.forward(embed(r)).
  FeedForwardNetwork restrict(const FeedForwardNetwork& net) const;

 private:
  int full_dim_ = 0;
  std::vector<int> free_;
  std::vector<std::pair<int, double>> pinned_;
};

struct ProtectedFixing {
  InputSpace space;           // protected one-hot slots pinned
  std::vector<double> slots;  // the pinned one-hot values, e.g. {1, 0}
  int class_index = 0;
};

ProtectedFixing fix_protected(const FeatureSchema& schema, const std::string& class_value);

// Pins every non-protected categorical group to `assignment`; the result's
// free coordinates are exactly the continuous features.
InputSpace fix_assignment(const FeatureSchema& schema, const InputSpace& space,
                          const CategoricalAssignment& assignment);

InputSpace continuous_space(const FeatureSchema& schema, const std::string& class_value,
                            const CategoricalAssignment& assignment);

}  // namespace polyfair::io
