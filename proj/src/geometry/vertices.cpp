#include "polyfair/geometry/vertices.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "polyfair/common/errors.hpp"
#include "polyfair/geometry/convex_hull.hpp"

namespace polyfair::geometry {
namespace {

// A vertex lies on a constraint when its normalized slack is below this.
constexpr double kIncidenceTol = 1e-8;
// Gram-Schmidt residual below which a direction adds no affine dimension.
constexpr double kRankTol = 1e-7;

struct Prepared {
  HPolytope q;  // normalized
  Ball ball;
  bool thin = true;
};

Prepared prepare(const HPolytope& p) {
  Prepared out{p.normalized(), {}, true};
  for (int i = 0; i < out.q.num_constraints(); ++i)
    if (out.q.C().row(i).squaredNorm() == 0.0) throw EmptyPolytopeError("polytope has a violated zero row");
  out.ball = chebyshev_center(out.q);
  out.thin = out.ball.radius < kDimTol;
  return out;
}

std::vector<Eigen::VectorXd> interval_vertices(const HPolytope& q) {
  double lo = -INFINITY, hi = INFINITY;
  for (int i = 0; i < q.num_constraints(); ++i) {
    const double a = q.C()(i, 0), b = q.d()(i);
    if (a > 0) hi = std::min(hi, b / a);
    else lo = std::max(lo, b / a);
  }
  if (!std::isfinite(lo) || !std::isfinite(hi)) throw InternalError("unbounded interval");
  return {Eigen::VectorXd::Constant(1, lo), Eigen::VectorXd::Constant(1, hi)};
}

std::vector<Eigen::VectorXd> enumerate(const Prepared& pr) {
  const HPolytope& q = pr.q;
  const int n = q.dim();
  if (n == 1) return interval_vertices(q);
  const Eigen::VectorXd& c = pr.ball.center;

  // Dual points a_i / s_i, s_i = b_i - a_i.c > 0. Identical rows collapse.
  std::vector<Eigen::VectorXd> dual;
  std::vector<int> row_of;
  double max_norm = 0.0;
  for (int i = 0; i < q.num_constraints(); ++i) {
    const double s = q.d()(i) - q.C().row(i).dot(c);
    Eigen::VectorXd p = q.C().row(i).transpose() / s;
    bool dup = false;
    for (const auto& e : dual)
      if ((e - p).norm() <= 1e-12 * std::max(1.0, p.norm())) {
        dup = true;
        break;
      }
    if (dup) continue;
    max_norm = std::max(max_norm, p.norm());
    dual.push_back(std::move(p));
    row_of.push_back(i);
  }

  const auto facets = convex_hull(dual, 1e-11 * max_norm);
  std::vector<Eigen::VectorXd> out;
  Eigen::MatrixXd A(n, n);
  Eigen::VectorXd s(n);
  for (const auto& f : facets) {
    Eigen::VectorXd from_hull = c + f.normal / f.offset;
    for (int k = 0; k < n; ++k) {
      const int r = row_of[f.vertices[k]];
      A.row(k) = q.C().row(r);
      s(k) = q.d()(r);
    }
    Eigen::FullPivLU<Eigen::MatrixXd> lu(A);
    lu.setThreshold(1e-10);
    Eigen::VectorXd x = from_hull;
    if (lu.rank() == n) {
      Eigen::VectorXd solved = lu.solve(s);
      if (q.max_violation(solved) <= std::max(q.max_violation(from_hull), 1e-12)) x = solved;
    }
    if (q.max_violation(x) > 10 * kFeasTol)
      throw NumericalError("dual hull produced an infeasible vertex (violation " +
                           std::to_string(q.max_violation(x)) + ")");
    bool dup = false;
    for (const auto& v : out)
      if ((v - x).norm() <= kDedupTol) {
        dup = true;
        break;
      }
    if (!dup) out.push_back(std::move(x));
  }
  return out;
}

// Centroid-fan recursion over the face lattice: the volume of a k-face S is
// (1/k) * sum over its (k-1)-faces G of dist(centroid(S), aff(G)) * vol(G).
class FaceVolume {
 public:
  FaceVolume(const std::vector<Eigen::VectorXd>& v, const HPolytope& q) : v_(v) {
    inc_.resize(q.num_constraints());
    for (int j = 0; j < q.num_constraints(); ++j)
      for (int i = 0; i < static_cast<int>(v.size()); ++i)
        if (q.d()(j) - q.C().row(j).dot(v[i]) <= kIncidenceTol) inc_[j].push_back(i);
  }

  double total(int n) {
    std::vector<int> all(v_.size());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = static_cast<int>(i);
    std::vector<Eigen::VectorXd> basis;
    if (affine_basis(all, basis) < n) return 0.0;
    return face(all, n);
  }

 private:
  int affine_basis(const std::vector<int>& s, std::vector<Eigen::VectorXd>& basis) const {
    basis.clear();
    const Eigen::VectorXd& o = v_[s.front()];
    for (std::size_t t = 1; t < s.size(); ++t) {
      Eigen::VectorXd r = v_[s[t]] - o;
      for (int pass = 0; pass < 2; ++pass)
        for (const auto& b : basis) r -= b.dot(r) * b;
      const double nr = r.norm();
      if (nr > kRankTol) basis.push_back(r / nr);
    }
    return static_cast<int>(basis.size());
  }

  double face(const std::vector<int>& s, int k) {
    if (k == 0) return 1.0;
    if (k == 1) {
      double best = 0.0;
      for (int i : s)
        for (int j : s) best = std::max(best, (v_[i] - v_[j]).norm());
      return best;
    }
    auto it = memo_.find(s);
    if (it != memo_.end()) return it->second;

    Eigen::VectorXd g = Eigen::VectorXd::Zero(v_.front().size());
    for (int i : s) g += v_[i];
    g /= static_cast<double>(s.size());

    std::map<std::vector<int>, bool> seen;
    std::vector<Eigen::VectorXd> basis;
    double sum = 0.0;
    for (const auto& inc : inc_) {
      std::vector<int> t;
      std::set_intersection(s.begin(), s.end(), inc.begin(), inc.end(), std::back_inserter(t));
      if (static_cast<int>(t.size()) < k || t.size() == s.size()) continue;
      if (!seen.emplace(t, true).second) continue;
      if (affine_basis(t, basis) != k - 1) continue;
      Eigen::VectorXd r = g - v_[t.front()];
      for (int pass = 0; pass < 2; ++pass)
        for (const auto& b : basis) r -= b.dot(r) * b;
      sum += r.norm() * face(t, k - 1);
    }
    const double vol = sum / k;
    memo_.emplace(s, vol);
    return vol;
  }

  const std::vector<Eigen::VectorXd>& v_;
  std::vector<std::vector<int>> inc_;
  std::map<std::vector<int>, double> memo_;
};

}  // namespace

bool is_thin(const HPolytope& p) {
  if (is_empty(p)) return true;
  return prepare(p).thin;
}

VPolytope vertices(const HPolytope& p) {
  const Prepared pr = prepare(p);
  if (pr.thin) throw DegenerateRegion("polytope is lower-dimensional (Chebyshev radius " +
                                      std::to_string(pr.ball.radius) + ")");
  return VPolytope{enumerate(pr)};
}

double volume(const HPolytope& p) {
  Prepared pr;
  try {
    pr = prepare(p);
  } catch (const EmptyPolytopeError&) {
    return 0.0;
  }
  if (pr.thin) return 0.0;
  const auto v = enumerate(pr);
  if (p.dim() == 1) return v[1](0) - v[0](0);
  return FaceVolume(v, pr.q).total(p.dim());
}

}  // namespace polyfair::geometry
