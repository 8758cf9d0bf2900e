#pragma once

#include <vector>

namespace polyfair::metrics {

// Mann-Whitney AUC: probability that a random positive outscores a random
// negative, ties counted 1/2. Throws EstimationError unless both labels occur.
double auc(const std::vector<double>& scores, const std::vector<int>& labels);

}  // namespace polyfair::metrics
