#include "polyfair/density/grid.hpp"

#include <algorithm>
#include <cmath>

#include "polyfair/common/errors.hpp"

namespace polyfair::density {

Grid::Grid(int dims, int bins, long max_cells) : dims_(dims), bins_(bins) {
  if (bins < 1) throw ConfigError("grid needs at least one bin per axis");
  if (dims < 0) throw ConfigError("grid dimension must be non-negative");
  // Compare in log space so that huge grids never overflow.
  const double log_cells = dims * std::log10(static_cast<double>(bins));
  if (log_cells > std::log10(static_cast<double>(max_cells)) + 1e-12)
    throw InfeasibleError("integration grid of " + std::to_string(bins) + "^" + std::to_string(dims) +
                          " cells exceeds the limit of " + std::to_string(max_cells) + " cells (" +
                          std::to_string(dims) + " continuous dimensions at " + std::to_string(bins) +
                          " bins per axis)");
  cells_ = 1;
  for (int i = 0; i < dims; ++i) cells_ *= bins;
}

double Grid::cell_volume() const { return std::pow(width(), dims_); }

int Grid::bin(double v) const {
  const int b = static_cast<int>(std::floor(v * bins_));
  return std::clamp(b, 0, bins_ - 1);
}

long Grid::cell_of(const double* x) const {
  long c = 0;
  for (int i = 0; i < dims_; ++i) c = c * bins_ + bin(x[i]);
  return c;
}

std::vector<int> Grid::multi_index(long cell) const {
  std::vector<int> idx(static_cast<std::size_t>(dims_));
  for (int i = dims_ - 1; i >= 0; --i) {
    idx[static_cast<std::size_t>(i)] = static_cast<int>(cell % bins_);
    cell /= bins_;
  }
  return idx;
}

long Grid::flat_index(const std::vector<int>& idx) const {
  if (static_cast<int>(idx.size()) != dims_) throw DimensionError("cell index has wrong dimension");
  long c = 0;
  for (int i = 0; i < dims_; ++i) {
    if (idx[i] < 0 || idx[i] >= bins_) throw DimensionError("cell index out of range");
    c = c * bins_ + idx[i];
  }
  return c;
}

geometry::Box Grid::cell_box(long cell) const {
  const auto idx = multi_index(cell);
  geometry::Box b{Eigen::VectorXd(dims_), Eigen::VectorXd(dims_)};
  for (int i = 0; i < dims_; ++i) {
    b.lower(i) = edge(idx[i]);
    b.upper(i) = edge(idx[i] + 1);
  }
  return b;
}

}  // namespace polyfair::density
