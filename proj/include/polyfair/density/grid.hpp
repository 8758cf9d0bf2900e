#pragma once

#include <vector>

#include "polyfair/geometry/polytope.hpp"

namespace polyfair::density {

inline constexpr int kDefaultBins = 10;
inline constexpr long kMaxCells = 1'000'000;

// Uniform grid with `bins` cells per axis over [0,1]^dims. Cells are indexed
// row-major with axis 0 most significant.
class Grid {
 public:
  Grid() = default;
  // Throws InfeasibleError naming bins^dims when it exceeds max_cells and
  // ConfigError for bins < 1.
  Grid(int dims, int bins, long max_cells = kMaxCells);

  int dims() const { return dims_; }
  int bins() const { return bins_; }
  long cell_count() const { return cells_; }
  double width() const { return 1.0 / bins_; }
  double cell_volume() const;

  // Bin of a coordinate; 1.0 falls in the last bin, values outside [0,1] clamp.
  int bin(double v) const;
  long cell_of(const double* x) const;
  std::vector<int> multi_index(long cell) const;
  long flat_index(const std::vector<int>& idx) const;
  double edge(int k) const { return static_cast<double>(k) / bins_; }
  geometry::Box cell_box(long cell) const;

  bool operator==(const Grid&) const = default;

 private:
  int dims_ = 0;
  int bins_ = kDefaultBins;
  long cells_ = 1;
};

}  // namespace polyfair::density
