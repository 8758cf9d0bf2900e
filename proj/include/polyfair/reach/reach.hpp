#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "polyfair/geometry/polytope.hpp"
#include "polyfair/model_io/network.hpp"
#include "polyfair/model_io/schema.hpp"
#include "polyfair/reach/categorical.hpp"

namespace polyfair::reach {

// One affine piece of the network with a constant decision.
struct LabeledRegion {
  geometry::HPolytope polytope;  // reduced continuous coordinates
  Eigen::VectorXd out_weights;   // logit = out_weights . a + out_bias on the polytope
  double out_bias = 0.0;
  int label = 1;
  io::CategoricalAssignment assignment;
  std::vector<std::uint8_t> pattern;  // 1 = active, per hidden neuron in layer order
};

struct ReachOptions {
  long branch_ceiling = 1'000'000;
};

struct ReachStats {
  long explored = 0;      // star sets taken off the stack
  long lp_solves = 0;
  long thin_dropped = 0;  // leaves with Chebyshev radius below kDimTol
};

// Splits `input` into regions on which `net` (already restricted to the
// reduced space) is affine with a constant label. Depth first, active branch
// first; closed half-spaces on both sides of every split, with a logit of 0
// labeled 1. Output is sorted by (label, pattern). Throws ResourceError once
// more than branch_ceiling star sets have been explored.
std::vector<LabeledRegion> enumerate_regions(const io::FeedForwardNetwork& net, const geometry::HPolytope& input,
                                             const io::CategoricalAssignment& assignment = {},
                                             const ReachOptions& options = {}, ReachStats* stats = nullptr);

// Protected class fixed, one polytope list per categorical assignment.
struct AcceptanceRegion {
  std::string class_value;
  int label = 1;
  std::vector<io::CategoricalAssignment> assignments;
  std::vector<std::vector<geometry::HPolytope>> polytopes;  // parallel to assignments
  std::string model_hash;
};

struct RegionOptions {
  ReachOptions reach;
  long assignment_ceiling = kDefaultAssignmentCeiling;
};

// Every region of the fully pinned network for `class_value` whose label is
// `label`, for each assignment from enumerate_categorical.
AcceptanceRegion acceptance_region(const io::FeedForwardNetwork& net, const io::FeatureSchema& schema,
                                   const std::string& class_value, int label, const RegionOptions& options = {});

// Labeled regions for one class and assignment (both labels).
std::vector<LabeledRegion> class_regions(const io::FeedForwardNetwork& net, const io::FeatureSchema& schema,
                                         const std::string& class_value, const io::CategoricalAssignment& a,
                                         const ReachOptions& options = {}, ReachStats* stats = nullptr);

// All pairwise intersections that are neither empty nor thin, in (i, j) order.
std::vector<geometry::HPolytope> intersect_lists(const std::vector<geometry::HPolytope>& a,
                                                 const std::vector<geometry::HPolytope>& b);

// Per assignment, intersect_lists of the two regions.
AcceptanceRegion region_intersection(const AcceptanceRegion& r1, const AcceptanceRegion& r2);

}  // namespace polyfair::reach
