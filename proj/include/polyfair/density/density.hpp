#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "polyfair/common/json_writer.hpp"
#include "polyfair/density/grid.hpp"
#include "polyfair/model_io/network.hpp"
#include "polyfair/model_io/schema.hpp"
#include "polyfair/reach/reach.hpp"

namespace polyfair::density {

// P(X | C) for one protected class: categorical mass per assignment and a
// piecewise-constant density (probability per unit volume) per grid cell.
struct ClassDensity {
  std::string class_value;
  long rows = 0;
  std::vector<double> mass;                  // parallel to DensityModel::assignments
  std::vector<std::map<long, double>> cells;  // sparse: cell -> density, per assignment
};

struct DensityModel {
  Grid grid;
  std::vector<io::CategoricalAssignment> assignments;
  std::vector<ClassDensity> classes;  // in schema protected_values order

  const ClassDensity& for_class(const std::string& class_value) const;
};

struct ProbabilityEstimate {
  double value = 0.0;
  std::string method;  // "exact-grid" or "monte-carlo"
  double stderr_ = 0.0;
  long samples = 0;
  std::uint64_t seed = 0;
};

// Index of a row's non-protected categorical assignment in enumerate_categorical order.
long assignment_index(const io::FeatureSchema& schema, const double* row);

// Histogram of the encoded rows whose protected value is `class_value`.
// Throws EstimationError when no row has that value.
ClassDensity fit_histogram(const Eigen::MatrixXd& rows, const io::FeatureSchema& schema, const Grid& grid,
                           const std::string& class_value, long assignment_ceiling = reach::kDefaultAssignmentCeiling);

// Both classes on a grid with `bins` per continuous axis.
DensityModel fit_density(const Eigen::MatrixXd& rows, const io::FeatureSchema& schema, int bins = kDefaultBins,
                         long assignment_ceiling = reach::kDefaultAssignmentCeiling);

// Integral of a class density over one polytope (reduced continuous space).
double integrate_polytope(const std::map<long, double>& cells, const Grid& grid, const geometry::HPolytope& poly);

// Probability mass of `region` under P(X | class_value).
ProbabilityEstimate integrate(const DensityModel& model, const std::string& class_value,
                              const reach::AcceptanceRegion& region);

// Draws n points from P(X | class_value) and reports the fraction labeled
// `label` by `net`.
ProbabilityEstimate mc_probability(const DensityModel& model, const io::FeatureSchema& schema,
                                   const std::string& class_value, const io::FeedForwardNetwork& net, int label,
                                   long n, std::uint64_t seed);

// Flip test: for x ~ P(X | C1), how often is x accepted as C1 and rejected
// once its protected value is flipped to C2 (and symmetrically from C2).
struct FlipEstimate {
  double p12 = 0.0, se12 = 0.0;
  double p21 = 0.0, se21 = 0.0;
  double wsd = 0.0, se = 0.0;
  long samples = 0;  // per direction
  std::uint64_t seed = 0;
};
FlipEstimate mc_flip(const DensityModel& model, const io::FeatureSchema& schema, const io::FeedForwardNetwork& net,
                     int label, long n, std::uint64_t seed);

Json density_to_json(const DensityModel& model, const io::FeatureSchema& schema);
DensityModel density_from_json(const Json& j, const io::FeatureSchema& schema);

}  // namespace polyfair::density
