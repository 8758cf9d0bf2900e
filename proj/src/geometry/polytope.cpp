#include "polyfair/geometry/polytope.hpp"

#include <algorithm>
#include <cmath>

#include "polyfair/common/errors.hpp"
#include "polyfair/geometry/lp.hpp"

namespace polyfair::geometry {

HPolytope::HPolytope(int dim) : C_(0, dim), d_(0) {}

HPolytope::HPolytope(Eigen::MatrixXd C, Eigen::VectorXd d) : C_(std::move(C)), d_(std::move(d)) {
  if (C_.rows() != d_.size()) throw DimensionError("constraint matrix and offsets disagree in length");
}

HPolytope HPolytope::box(const Eigen::VectorXd& lower, const Eigen::VectorXd& upper) {
  const auto n = lower.size();
  if (upper.size() != n) throw DimensionError("box bounds differ in dimension");
  Eigen::MatrixXd C = Eigen::MatrixXd::Zero(2 * n, n);
  Eigen::VectorXd d(2 * n);
  for (Eigen::Index i = 0; i < n; ++i) {
    C(2 * i, i) = -1.0;
    d(2 * i) = -lower(i);
    C(2 * i + 1, i) = 1.0;
    d(2 * i + 1) = upper(i);
  }
  return HPolytope(std::move(C), std::move(d));
}

HPolytope HPolytope::unit_box(int dim) {
  return box(Eigen::VectorXd::Zero(dim), Eigen::VectorXd::Ones(dim));
}

void HPolytope::add_constraint(const Eigen::VectorXd& row, double offset) {
  if (row.size() != dim()) throw DimensionError("constraint row has wrong dimension");
  const auto m = C_.rows();
  C_.conservativeResize(m + 1, Eigen::NoChange);
  d_.conservativeResize(m + 1);
  C_.row(m) = row.transpose();
  d_(m) = offset;
}

void HPolytope::append(const HPolytope& other) {
  if (other.dim() != dim()) throw DimensionError("cannot combine polytopes of different dimension");
  const auto m = C_.rows();
  C_.conservativeResize(m + other.C_.rows(), Eigen::NoChange);
  d_.conservativeResize(m + other.d_.size());
  C_.bottomRows(other.C_.rows()) = other.C_;
  d_.tail(other.d_.size()) = other.d_;
}

double HPolytope::max_violation(const Eigen::VectorXd& x) const {
  double worst = -INFINITY;
  for (Eigen::Index i = 0; i < C_.rows(); ++i) {
    const double nrm = C_.row(i).norm();
    const double v = C_.row(i).dot(x) - d_(i);
    worst = std::max(worst, nrm > 1e-14 ? v / nrm : (d_(i) < 0 ? INFINITY : -INFINITY));
  }
  return worst;
}

HPolytope HPolytope::normalized() const {
  Eigen::MatrixXd C(C_.rows(), C_.cols());
  Eigen::VectorXd d(d_.size());
  Eigen::Index k = 0;
  for (Eigen::Index i = 0; i < C_.rows(); ++i) {
    const double nrm = C_.row(i).norm();
    if (nrm < 1e-14) {
      if (d_(i) >= 0) continue;
      C.row(k).setZero();
      d(k++) = -1.0;
      continue;
    }
    C.row(k) = C_.row(i) / nrm;
    d(k++) = d_(i) / nrm;
  }
  return HPolytope(C.topRows(k), d.head(k));
}

bool Box::overlaps(const Box& other, double tol) const {
  for (Eigen::Index i = 0; i < lower.size(); ++i)
    if (lower(i) > other.upper(i) + tol || other.lower(i) > upper(i) + tol) return false;
  return true;
}

HPolytope intersect(const HPolytope& p, const HPolytope& q) {
  if (p.dim() != q.dim()) throw DimensionError("cannot intersect polytopes of different dimension");
  HPolytope out = p;
  out.append(q);
  return out;
}

bool is_empty(const HPolytope& p) {
  const auto res = solve_lp(Eigen::VectorXd::Zero(p.dim()), p, Sense::Maximize);
  return res.status == LpStatus::Infeasible;
}

Ball chebyshev_center(const HPolytope& p) {
  // max r  s.t.  c_i . x + |c_i| r <= d_i,  r >= 0.
  const int n = p.dim();
  const int m = p.num_constraints();
  Eigen::MatrixXd C(m + 1, n + 1);
  Eigen::VectorXd d(m + 1);
  for (int i = 0; i < m; ++i) {
    C.row(i).head(n) = p.C().row(i);
    C(i, n) = p.C().row(i).norm();
    d(i) = p.d()(i);
  }
  C.row(m).setZero();
  C(m, n) = -1.0;
  d(m) = 0.0;
  Eigen::VectorXd obj = Eigen::VectorXd::Zero(n + 1);
  obj(n) = 1.0;
  const auto res = solve_lp(obj, C, d, Sense::Maximize);
  if (res.status == LpStatus::Infeasible) throw EmptyPolytopeError("Chebyshev center of an empty polytope");
  if (res.status == LpStatus::Unbounded) throw InternalError("polytope admits arbitrarily large balls");
  return Ball{res.witness.head(n), std::max(0.0, res.witness(n))};
}

Box bounding_box(const HPolytope& p) {
  const int n = p.dim();
  Box b{Eigen::VectorXd(n), Eigen::VectorXd(n)};
  for (int i = 0; i < n; ++i) {
    Eigen::VectorXd e = Eigen::VectorXd::Unit(n, i);
    const auto lo = solve_lp(e, p, Sense::Minimize);
    if (lo.status == LpStatus::Infeasible) throw EmptyPolytopeError("bounding box of an empty polytope");
    const auto hi = solve_lp(e, p, Sense::Maximize);
    b.lower(i) = lo.optimum;
    b.upper(i) = hi.optimum;
  }
  return b;
}

}  // namespace polyfair::geometry
