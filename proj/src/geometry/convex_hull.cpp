#include "polyfair/geometry/convex_hull.hpp"

#include <algorithm>
#include <map>

#include "polyfair/common/errors.hpp"

namespace polyfair::geometry {
namespace {

struct Facet {
  std::vector<int> v;
  std::vector<int> nb;  // nb[k] is the facet across the ridge opposite v[k]
  Eigen::VectorXd normal;
  double offset = 0.0;
  std::vector<int> outside;
  int far = -1;
  double far_dist = 0.0;
  bool alive = true;
  int stamp = -1;
  bool visible = false;
};

class QuickHull {
 public:
  QuickHull(const std::vector<Eigen::VectorXd>& pts, double eps)
      : p_(pts), eps_(eps), d_(pts.empty() ? 0 : static_cast<int>(pts.front().size())) {}

  std::vector<HullFacet> run() {
    if (d_ < 2) throw DegenerateRegion("convex hull needs dimension >= 2");
    initial_simplex();
    std::vector<int> queue;
    for (int f = 0; f < static_cast<int>(f_.size()); ++f)
      if (!f_[f].outside.empty()) queue.push_back(f);
    int stamp = 0;
    while (!queue.empty()) {
      const int fi = queue.back();
      queue.pop_back();
      if (!f_[fi].alive || f_[fi].outside.empty()) continue;
      add_point(fi, ++stamp, queue);
    }
    std::vector<HullFacet> out;
    for (const auto& f : f_) {
      if (!f.alive) continue;
      for (int g : f.nb)
        if (g < 0 || !f_[g].alive) throw NumericalError("convex hull lost ridge adjacency");
      out.push_back(HullFacet{f.v, f.normal, f.offset});
    }
    return out;
  }

 private:
  double dist(const Facet& f, int p) const { return f.normal.dot(p_[p]) - f.offset; }

  void set_plane(Facet& f) const {
    Eigen::MatrixXd m(d_, d_ - 1);
    for (int k = 1; k < d_; ++k) m.col(k - 1) = p_[f.v[k]] - p_[f.v[0]];
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(m);
    Eigen::MatrixXd q = qr.householderQ();
    f.normal = q.col(d_ - 1);
    f.offset = f.normal.dot(p_[f.v[0]]);
    if (f.normal.dot(interior_) > f.offset) {
      f.normal = -f.normal;
      f.offset = -f.offset;
    }
  }

  void initial_simplex() {
    const int n = static_cast<int>(p_.size());
    if (n < d_ + 1) throw DegenerateRegion("too few points for a full-dimensional hull");
    std::vector<int> chosen;
    int first = 0;
    for (int i = 1; i < n; ++i)
      if (p_[i](0) < p_[first](0)) first = i;
    chosen.push_back(first);
    std::vector<Eigen::VectorXd> basis;
    while (static_cast<int>(chosen.size()) < d_ + 1) {
      int best = -1;
      double best_d = -1.0;
      Eigen::VectorXd best_r;
      for (int i = 0; i < n; ++i) {
        Eigen::VectorXd r = p_[i] - p_[first];
        for (const auto& b : basis) r -= b.dot(r) * b;
        for (const auto& b : basis) r -= b.dot(r) * b;
        const double nr = r.norm();
        if (nr > best_d) {
          best_d = nr;
          best = i;
          best_r = r;
        }
      }
      if (best_d <= eps_) throw DegenerateRegion("points are not full-dimensional");
      basis.push_back(best_r / best_d);
      chosen.push_back(best);
    }
    interior_ = Eigen::VectorXd::Zero(d_);
    for (int c : chosen) interior_ += p_[c];
    interior_ /= static_cast<double>(chosen.size());

    for (int i = 0; i <= d_; ++i) {
      Facet f;
      for (int j = 0; j <= d_; ++j)
        if (j != i) {
          f.v.push_back(chosen[j]);
          f.nb.push_back(j);  // facet j omits chosen[j]
        }
      set_plane(f);
      f_.push_back(std::move(f));
    }
    std::vector<bool> used(n, false);
    for (int c : chosen) used[c] = true;
    std::vector<int> all;
    for (int i = 0; i < n; ++i)
      if (!used[i]) all.push_back(i);
    std::vector<int> ids(f_.size());
    for (std::size_t k = 0; k < ids.size(); ++k) ids[k] = static_cast<int>(k);
    assign(all, ids);
  }

  void assign(const std::vector<int>& pts, const std::vector<int>& facets) {
    for (int p : pts) {
      int best = -1;
      double best_d = eps_;
      for (int fi : facets) {
        const double dd = dist(f_[fi], p);
        if (dd > best_d) {
          best_d = dd;
          best = fi;
        }
      }
      if (best < 0) continue;
      auto& f = f_[best];
      f.outside.push_back(p);
      if (best_d > f.far_dist) {
        f.far_dist = best_d;
        f.far = p;
      }
    }
  }

  void add_point(int start, int stamp, std::vector<int>& queue) {
    const int eye = f_[start].far;
    std::vector<int> visible{start};
    f_[start].stamp = stamp;
    f_[start].visible = true;
    struct Ridge {
      int from;
      int k;
    };
    std::vector<Ridge> horizon;
    for (std::size_t q = 0; q < visible.size(); ++q) {
      const int fi = visible[q];
      for (int k = 0; k < d_; ++k) {
        const int g = f_[fi].nb[k];
        if (f_[g].stamp != stamp) {
          f_[g].stamp = stamp;
          f_[g].visible = dist(f_[g], eye) > eps_;
          if (f_[g].visible) visible.push_back(g);
        }
        if (!f_[g].visible) horizon.push_back({fi, k});
      }
    }

    std::map<std::vector<int>, std::pair<int, int>> open_ridges;
    std::vector<int> created;
    for (const auto& h : horizon) {
      const Facet& from = f_[h.from];
      const int behind = from.nb[h.k];
      Facet nf;
      for (int k = 0; k < d_; ++k)
        if (k != h.k) nf.v.push_back(from.v[k]);
      nf.v.push_back(eye);
      nf.nb.assign(d_, -1);
      nf.nb[d_ - 1] = behind;
      set_plane(nf);
      const int id = static_cast<int>(f_.size());
      for (int k = 0; k < d_; ++k)
        if (f_[behind].nb[k] == h.from) f_[behind].nb[k] = id;
      for (int k = 0; k < d_ - 1; ++k) {
        std::vector<int> key;
        for (int j = 0; j < d_; ++j)
          if (j != k) key.push_back(nf.v[j]);
        std::sort(key.begin(), key.end());
        auto it = open_ridges.find(key);
        if (it == open_ridges.end()) {
          open_ridges.emplace(std::move(key), std::make_pair(id, k));
        } else {
          nf.nb[k] = it->second.first;
          f_[it->second.first].nb[it->second.second] = id;
          open_ridges.erase(it);
        }
      }
      f_.push_back(std::move(nf));
      created.push_back(id);
    }
    if (!open_ridges.empty()) throw NumericalError("convex hull horizon is not closed");

    std::vector<int> orphans;
    for (int fi : visible) {
      f_[fi].alive = false;
      for (int p : f_[fi].outside)
        if (p != eye) orphans.push_back(p);
      f_[fi].outside.clear();
    }
    assign(orphans, created);
    for (int id : created)
      if (!f_[id].outside.empty()) queue.push_back(id);
  }

  const std::vector<Eigen::VectorXd>& p_;
  double eps_;
  int d_;
  Eigen::VectorXd interior_;
  std::vector<Facet> f_;
};

}  // namespace

std::vector<HullFacet> convex_hull(const std::vector<Eigen::VectorXd>& points, double eps) {
  return QuickHull(points, eps).run();
}

}  // namespace polyfair::geometry
