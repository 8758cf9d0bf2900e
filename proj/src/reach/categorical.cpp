#include "polyfair/reach/categorical.hpp"

#include <limits>

#include "polyfair/common/errors.hpp"

namespace polyfair::reach {

long assignment_count(const io::FeatureSchema& schema) {
  long n = 1;
  for (int f : schema.free_categoricals()) {
    const long w = schema.features()[f].width();
    if (n > std::numeric_limits<long>::max() / w) return std::numeric_limits<long>::max();
    n *= w;
  }
  return n;
}

std::vector<io::CategoricalAssignment> enumerate_categorical(const io::FeatureSchema& schema, long ceiling) {
  const long n = assignment_count(schema);
  if (n > ceiling)
    throw InfeasibleError(std::to_string(n) + " categorical assignments exceed the ceiling of " +
                          std::to_string(ceiling));
  const auto& cats = schema.free_categoricals();
  std::vector<io::CategoricalAssignment> out;
  out.reserve(static_cast<std::size_t>(n));
  io::CategoricalAssignment cur{std::vector<int>(cats.size(), 0)};
  for (long k = 0; k < n; ++k) {
    out.push_back(cur);
    for (int i = static_cast<int>(cats.size()) - 1; i >= 0; --i) {
      if (++cur.value_index[i] < schema.features()[cats[i]].width()) break;
      cur.value_index[i] = 0;
    }
  }
  return out;
}

}  // namespace polyfair::reach
