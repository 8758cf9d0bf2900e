#include "polyfair/geometry/lp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "polyfair/common/errors.hpp"

namespace polyfair::geometry {
namespace {

// Row-major tableau: `m` constraint rows plus one objective row, `cols`
// variable columns plus the right-hand side.
class Tableau {
 public:
  Tableau(int m, int cols) : m_(m), cols_(cols), width_(cols + 1), a_(static_cast<std::size_t>((m + 1) * (cols + 1)), 0.0), basis_(m, -1) {}

  double& at(int r, int c) { return a_[static_cast<std::size_t>(r * width_ + c)]; }
  double at(int r, int c) const { return a_[static_cast<std::size_t>(r * width_ + c)]; }
  double& rhs(int r) { return at(r, cols_); }
  double rhs(int r) const { return at(r, cols_); }
  double& obj(int c) { return at(m_, c); }
  double obj(int c) const { return at(m_, c); }
  int rows() const { return m_; }
  int cols() const { return cols_; }
  std::vector<int>& basis() { return basis_; }

  void pivot(int r, int c) {
    double* pr = &a_[static_cast<std::size_t>(r * width_)];
    const double inv = 1.0 / pr[c];
    for (int j = 0; j < width_; ++j) pr[j] *= inv;
    pr[c] = 1.0;
    for (int i = 0; i <= m_; ++i) {
      if (i == r) continue;
      double* pi = &a_[static_cast<std::size_t>(i * width_)];
      const double f = pi[c];
      if (f == 0.0) continue;
      for (int j = 0; j < width_; ++j) pi[j] -= f * pr[j];
      pi[c] = 0.0;
    }
    basis_[r] = c;
  }

  // Subtracts multiples of constraint rows so basic columns have zero cost.
  void price_out() {
    for (int i = 0; i < m_; ++i) {
      const double f = obj(basis_[i]);
      if (f == 0.0) continue;
      for (int j = 0; j < width_; ++j) at(m_, j) -= f * at(i, j);
    }
  }

 private:
  int m_, cols_, width_;
  std::vector<double> a_;
  std::vector<int> basis_;
};

enum class Outcome { Optimal, Unbounded };

// Maximizes the objective encoded in the tableau's last row (stored as
// z - sum c_j x_j = 0, so negative entries improve). `allowed(j)` masks
// columns that may enter.
template <class Allowed>
Outcome run_simplex(Tableau& t, const LpOptions& opt, double opt_tol, Allowed allowed, int& iterations) {
  const int max_iter = 200 * (t.rows() + t.cols()) + 1000;
  bool bland = false;
  int degenerate = 0;
  for (;;) {
    int e = -1;
    double best = -opt_tol;
    for (int j = 0; j < t.cols(); ++j) {
      if (!allowed(j)) continue;
      const double rc = t.obj(j);
      if (rc < best) {
        e = j;
        if (bland) break;
        best = rc;
      }
    }
    if (e < 0) return Outcome::Optimal;

    int r = -1;
    double theta = std::numeric_limits<double>::infinity();
    for (int i = 0; i < t.rows(); ++i) {
      const double p = t.at(i, e);
      if (p <= opt.pivot_tol) continue;
      const double ratio = std::max(t.rhs(i), 0.0) / p;
      if (r < 0 || ratio < theta - 1e-12) {
        r = i;
        theta = ratio;
      } else if (ratio <= theta + 1e-12) {
        const bool better = bland ? t.basis()[i] < t.basis()[r] : p > t.at(r, e);
        if (better) {
          r = i;
          theta = std::min(theta, ratio);
        }
      }
    }
    if (r < 0) return Outcome::Unbounded;

    if (theta <= 1e-12) {
      if (++degenerate > opt.degenerate_streak) bland = true;
    } else {
      degenerate = 0;
    }
    t.pivot(r, e);
    if (++iterations > max_iter) throw NumericalError("simplex did not converge within the iteration limit");
  }
}

}  // namespace

LpResult solve_lp(const Eigen::VectorXd& objective, const Eigen::MatrixXd& C, const Eigen::VectorXd& d,
                  Sense sense, const LpOptions& opt) {
  const int n = static_cast<int>(C.cols());
  if (objective.size() != n) throw DimensionError("objective dimension does not match the polytope");
  if (d.size() != C.rows()) throw DimensionError("offset vector does not match constraint rows");

  // Normalize rows; drop tautologies, detect trivially violated zero rows.
  std::vector<int> keep;
  std::vector<double> scale;
  for (int i = 0; i < C.rows(); ++i) {
    const double nrm = C.row(i).norm();
    if (nrm < 1e-14) {
      if (d(i) < -opt.feasibility_tol) return LpResult{LpStatus::Infeasible, 0.0, {}, 0};
      continue;
    }
    keep.push_back(i);
    scale.push_back(1.0 / nrm);
  }
  const int m = static_cast<int>(keep.size());
  const int art = 2 * n + m;
  Tableau t(m, art + 1);
  for (int k = 0; k < m; ++k) {
    const int i = keep[k];
    for (int j = 0; j < n; ++j) {
      const double v = C(i, j) * scale[k];
      t.at(k, j) = v;
      t.at(k, n + j) = -v;
    }
    t.at(k, 2 * n + k) = 1.0;
    t.at(k, art) = -1.0;
    t.rhs(k) = d(i) * scale[k];
    t.basis()[k] = 2 * n + k;
  }

  LpResult res;
  int worst = -1;
  for (int k = 0; k < m; ++k)
    if (t.rhs(k) < 0.0 && (worst < 0 || t.rhs(k) < t.rhs(worst))) worst = k;

  if (worst >= 0) {
    // Phase 1: one artificial column shared by all rows measures the largest
    // violation; maximize its negative.
    t.pivot(worst, art);
    for (int j = 0; j <= t.cols(); ++j) t.at(m, j) = 0.0;
    t.obj(art) = 1.0;
    t.price_out();
    run_simplex(t, opt, opt.optimality_tol, [](int) { return true; }, res.iterations);
    const double violation = -t.rhs(m);
    if (violation > opt.feasibility_tol) {
      res.status = LpStatus::Infeasible;
      return res;
    }
    // Drive the artificial out of the basis if it is still there.
    for (int k = 0; k < m; ++k) {
      if (t.basis()[k] != art) continue;
      int best = -1;
      for (int j = 0; j < art; ++j)
        if (std::abs(t.at(k, j)) > opt.pivot_tol && (best < 0 || std::abs(t.at(k, j)) > std::abs(t.at(k, best))))
          best = j;
      if (best >= 0) t.pivot(k, best);
    }
    for (int k = 0; k < m; ++k) {
      if (t.rhs(k) < 0.0) {
        if (t.rhs(k) < -10 * opt.feasibility_tol) throw NumericalError("simplex lost feasibility after phase 1");
        t.rhs(k) = 0.0;
      }
    }
  }

  // Phase 2.
  const double sign = sense == Sense::Maximize ? 1.0 : -1.0;
  const double cmax = objective.size() > 0 ? objective.cwiseAbs().maxCoeff() : 0.0;
  for (int j = 0; j <= t.cols(); ++j) t.at(m, j) = 0.0;
  for (int j = 0; j < n; ++j) {
    t.obj(j) = -sign * objective(j);
    t.obj(n + j) = sign * objective(j);
  }
  t.price_out();
  const auto outcome = run_simplex(t, opt, opt.optimality_tol * std::max(1.0, cmax),
                                   [art](int j) { return j != art; }, res.iterations);
  if (outcome == Outcome::Unbounded) {
    res.status = LpStatus::Unbounded;
    return res;
  }

  std::vector<double> value(static_cast<std::size_t>(t.cols()), 0.0);
  for (int k = 0; k < m; ++k) value[static_cast<std::size_t>(t.basis()[k])] = std::max(t.rhs(k), 0.0);
  res.witness.resize(n);
  for (int j = 0; j < n; ++j) res.witness(j) = value[static_cast<std::size_t>(j)] - value[static_cast<std::size_t>(n + j)];
  res.optimum = objective.dot(res.witness);
  res.status = LpStatus::Feasible;

  double viol = 0.0;
  for (int k = 0; k < m; ++k) {
    const int i = keep[k];
    viol = std::max(viol, (C.row(i).dot(res.witness) - d(i)) * scale[k]);
  }
  if (viol > 100 * opt.feasibility_tol)
    throw NumericalError("simplex witness violates a constraint by " + std::to_string(viol));
  return res;
}

LpResult solve_lp(const Eigen::VectorXd& objective, const HPolytope& poly, Sense sense, const LpOptions& options) {
  auto res = solve_lp(objective, poly.C(), poly.d(), sense, options);
  if (res.status == LpStatus::Unbounded) throw InternalError("linear program unbounded over a polytope");
  return res;
}

}  // namespace polyfair::geometry
