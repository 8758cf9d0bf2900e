#pragma once

#include <vector>

#include <Eigen/Dense>

namespace polyfair::geometry {

// Feasibility tolerance: a point belongs to a polytope when it violates no
// (unit-normalized) constraint by more than this distance.
inline constexpr double kFeasTol = 1e-7;
// Polytopes whose Chebyshev radius is below this are "thin": measure zero,
// volume 0, excluded from vertex enumeration.
inline constexpr double kDimTol = 1e-8;
// Vertices closer than this are the same vertex.
inline constexpr double kDedupTol = 1e-9;

// {x : C x <= d}.
class HPolytope {
 public:
  explicit HPolytope(int dim = 0);
  HPolytope(Eigen::MatrixXd C, Eigen::VectorXd d);

  static HPolytope box(const Eigen::VectorXd& lower, const Eigen::VectorXd& upper);
  static HPolytope unit_box(int dim);

  int dim() const { return static_cast<int>(C_.cols()); }
  int num_constraints() const { return static_cast<int>(C_.rows()); }
  const Eigen::MatrixXd& C() const { return C_; }
  const Eigen::VectorXd& d() const { return d_; }

  void add_constraint(const Eigen::VectorXd& row, double offset);
  void append(const HPolytope& other);

  // Largest violation of any constraint, measured as Euclidean distance to
  // the constraint's hyperplane (rows are normalized on the fly).
  double max_violation(const Eigen::VectorXd& x) const;
  bool contains(const Eigen::VectorXd& x, double tol = 0.0) const { return max_violation(x) <= tol; }

  // Same point set, rows scaled to unit norm, all-zero tautologies dropped.
  // An all-zero row with negative offset is kept as the infeasible row 0 <= -1.
  HPolytope normalized() const;

 private:
  Eigen::MatrixXd C_;
  Eigen::VectorXd d_;
};

struct Box {
  Eigen::VectorXd lower;
  Eigen::VectorXd upper;
  bool overlaps(const Box& other, double tol = 0.0) const;
};

struct Ball {
  Eigen::VectorXd center;
  double radius = 0.0;
};

// Constraint rows of q appended to those of p.
HPolytope intersect(const HPolytope& p, const HPolytope& q);

// True iff no point satisfies every constraint within kFeasTol.
bool is_empty(const HPolytope& p);

// Largest inscribed ball. Throws EmptyPolytopeError when p is empty.
Ball chebyshev_center(const HPolytope& p);

// Per-axis extent from 2n linear programs. Throws EmptyPolytopeError.
Box bounding_box(const HPolytope& p);

}  // namespace polyfair::geometry
