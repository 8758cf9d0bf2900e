#pragma once

#include <vector>

#include <Eigen/Dense>

#include "polyfair/geometry/polytope.hpp"

namespace polyfair::geometry {

struct VPolytope {
  std::vector<Eigen::VectorXd> vertices;
};

// True when p is empty or its Chebyshev radius is below kDimTol.
bool is_thin(const HPolytope& p);

// All vertices of a full-dimensional polytope, via the convex hull of the
// constraints dualized about the Chebyshev center. Throws EmptyPolytopeError
// for an empty polytope and DegenerateRegion for a thin one.
VPolytope vertices(const HPolytope& p);

// Lebesgue measure. Empty and thin polytopes have volume 0.
double volume(const HPolytope& p);

}  // namespace polyfair::geometry
