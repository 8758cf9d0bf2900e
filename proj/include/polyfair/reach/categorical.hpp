#pragma once

#include <vector>

#include "polyfair/model_io/schema.hpp"

namespace polyfair::reach {

inline constexpr long kDefaultAssignmentCeiling = 4096;

// Number of one-hot assignments of the non-protected categorical features.
long assignment_count(const io::FeatureSchema& schema);

// All assignments in lexicographic order (first feature most significant).
// A schema without free categoricals yields one empty assignment. Throws
// InfeasibleError naming the product when it exceeds `ceiling`.
std::vector<io::CategoricalAssignment> enumerate_categorical(const io::FeatureSchema& schema,
                                                             long ceiling = kDefaultAssignmentCeiling);

}  // namespace polyfair::reach
