#pragma once

#include <vector>

#include <Eigen/Dense>

namespace polyfair::geometry {

struct HullFacet {
  std::vector<int> vertices;  // indices into the input points, size = dimension
  Eigen::VectorXd normal;     // unit, pointing out of the hull
  double offset = 0.0;        // normal . p <= offset for every input point
};

// Quickhull in dimension >= 2. Points within `eps` of a facet's plane count
// as inside, so coplanar points never create facets and facets of a
// non-simplicial face come back triangulated (sharing one hyperplane).
// Throws DegenerateRegion if the points do not span the full dimension.
std::vector<HullFacet> convex_hull(const std::vector<Eigen::VectorXd>& points, double eps);

}  // namespace polyfair::geometry
