#pragma once

#include <Eigen/Dense>

#include "polyfair/geometry/polytope.hpp"

namespace polyfair::geometry {

enum class LpStatus { Feasible, Infeasible, Unbounded };
enum class Sense { Minimize, Maximize };

struct LpResult {
  LpStatus status = LpStatus::Infeasible;
  double optimum = 0.0;      // valid when Feasible
  Eigen::VectorXd witness;   // optimal vertex when Feasible
  int iterations = 0;
};

struct LpOptions {
  double feasibility_tol = kFeasTol;
  double pivot_tol = 1e-9;
  double optimality_tol = 1e-9;
  // Consecutive degenerate pivots tolerated under Dantzig pricing before
  // switching to Bland's rule for the rest of the solve.
  int degenerate_streak = 50;
};

// Optimizes objective . x over {x : C x <= d} with free variables.
// Two-phase dense tableau simplex; phase 1 minimizes the largest constraint
// violation, so Infeasible means every point violates some unit-normalized
// row by more than feasibility_tol. Unbounded is reported in the status.
LpResult solve_lp(const Eigen::VectorXd& objective, const Eigen::MatrixXd& C, const Eigen::VectorXd& d,
                  Sense sense, const LpOptions& options = {});

// Polytope form. HPolytopes are bounded by construction, so an unbounded
// program here is an InternalError rather than a status.
LpResult solve_lp(const Eigen::VectorXd& objective, const HPolytope& poly, Sense sense,
                  const LpOptions& options = {});

}  // namespace polyfair::geometry
