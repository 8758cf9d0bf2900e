#include "polyfair/reach/reach.hpp"

#include <algorithm>
#include <cmath>

#include "polyfair/common/errors.hpp"
#include "polyfair/geometry/lp.hpp"
#include "polyfair/model_io/input_space.hpp"

namespace polyfair::reach {

using geometry::HPolytope;

namespace {

struct Star {
  HPolytope domain;
  Eigen::MatrixXd pre_w;  // current layer pre-activations = pre_w * a + pre_b
  Eigen::VectorXd pre_b;
  Eigen::MatrixXd post_w;  // outputs of already decided neurons of this layer
  Eigen::VectorXd post_b;
  int layer = 0;
  int neuron = 0;
  std::vector<std::uint8_t> pattern;
  Eigen::VectorXd point;  // some point of the domain (may lie on its boundary)
};

enum class Side { Above, Below, Both };

class Splitter {
 public:
  Splitter(const HPolytope& input, ReachStats& stats) : stats_(stats) {
    // Interval bounds are taken over the input's bounding box.
    const auto bb = geometry::bounding_box(input);
    lo_ = bb.lower;
    hi_ = bb.upper;
  }

  // Sign of g(a) = w . a + b over the domain, with tolerance scaled by |w|.
  // Fills the witnesses of the two sides when they are found by LP.
  Side classify(const Star& s, const Eigen::VectorXd& w, double b, Eigen::VectorXd& above, Eigen::VectorXd& below) {
    const double tau = 1e-9 * (1.0 + w.norm());
    double imin = b, imax = b;
    for (Eigen::Index j = 0; j < w.size(); ++j) {
      imin += std::min(w(j) * lo_(j), w(j) * hi_(j));
      imax += std::max(w(j) * lo_(j), w(j) * hi_(j));
    }
    if (imin >= -tau) return Side::Above;
    if (imax <= tau) return Side::Below;

    const double at = w.dot(s.point) + b;
    bool need_min = true, need_max = true;
    if (at > tau) {
      need_max = false;
      above = s.point;
    } else if (at < -tau) {
      need_min = false;
      below = s.point;
    }
    if (need_min) {
      ++stats_.lp_solves;
      const auto r = geometry::solve_lp(w, s.domain, geometry::Sense::Minimize);
      if (r.status != geometry::LpStatus::Feasible) throw NumericalError("star set domain became empty");
      if (r.optimum + b >= -tau) return Side::Above;
      below = r.witness;
    }
    if (need_max) {
      ++stats_.lp_solves;
      const auto r = geometry::solve_lp(w, s.domain, geometry::Sense::Maximize);
      if (r.status != geometry::LpStatus::Feasible) throw NumericalError("star set domain became empty");
      if (r.optimum + b <= tau) return Side::Below;
      above = r.witness;
    }
    return Side::Both;
  }

 private:
  ReachStats& stats_;
  Eigen::VectorXd lo_, hi_;
};

}  // namespace

std::vector<LabeledRegion> enumerate_regions(const io::FeedForwardNetwork& net, const HPolytope& input,
                                             const io::CategoricalAssignment& assignment,
                                             const ReachOptions& options, ReachStats* stats_out) {
  const int n = input.dim();
  if (net.input_dim() != n) throw DimensionError("network input does not match the region dimension");
  ReachStats stats;
  std::vector<LabeledRegion> out;
  const auto& layers = net.layers();

  const auto ball = geometry::chebyshev_center(input);
  Splitter split(input, stats);

  std::vector<Star> stack;
  {
    Star root;
    root.domain = input;
    root.pre_w = layers[0].weights;
    root.pre_b = layers[0].bias;
    root.post_w = Eigen::MatrixXd::Zero(layers[0].out_dim(), n);
    root.post_b = Eigen::VectorXd::Zero(layers[0].out_dim());
    root.point = ball.center;
    stack.push_back(std::move(root));
  }

  auto emit = [&](Star& s, const Eigen::VectorXd& w, double b, int label) {
    const auto cb = geometry::chebyshev_center(s.domain);
    ++stats.lp_solves;
    if (cb.radius < geometry::kDimTol) {
      ++stats.thin_dropped;
      return;
    }
    out.push_back(LabeledRegion{std::move(s.domain), w, b, label, assignment, s.pattern});
  };

  while (!stack.empty()) {
    Star s = std::move(stack.back());
    stack.pop_back();
    if (++stats.explored > options.branch_ceiling)
      throw ResourceError("region enumeration exceeded the branch ceiling of " +
                              std::to_string(options.branch_ceiling) + " (explored " +
                              std::to_string(stats.explored - 1) + ", emitted " + std::to_string(out.size()) + ")",
                          stats.explored - 1, static_cast<long>(out.size()));

    // Advance through neurons whose sign is fixed on the domain.
    bool pushed = false;
    while (!pushed) {
      const auto& layer = layers[s.layer];
      if (layer.activation == io::Activation::Linear) {
        // Final logit.
        const Eigen::VectorXd w = s.pre_w.row(0).transpose();
        const double b = s.pre_b(0);
        Eigen::VectorXd above, below;
        const Side side = w.norm() == 0.0 ? (b >= 0 ? Side::Above : Side::Below) : split.classify(s, w, b, above, below);
        if (side == Side::Above) {
          emit(s, w, b, 1);
        } else if (side == Side::Below) {
          emit(s, w, b, 0);
        } else {
          Star neg = s;
          neg.domain.add_constraint(w, -b);
          s.domain.add_constraint(-w, b);
          // Output order within a leaf: accept first.
          emit(s, w, b, 1);
          emit(neg, w, b, 0);
        }
        break;
      }
      if (s.neuron == layer.out_dim()) {
        // Layer done: compose with the next affine map.
        const auto& next = layers[s.layer + 1];
        s.pre_w = next.weights * s.post_w;
        s.pre_b = next.weights * s.post_b + next.bias;
        ++s.layer;
        s.neuron = 0;
        if (next.activation == io::Activation::Relu) {
          s.post_w = Eigen::MatrixXd::Zero(next.out_dim(), n);
          s.post_b = Eigen::VectorXd::Zero(next.out_dim());
        }
        continue;
      }
      const int k = s.neuron;
      const Eigen::VectorXd w = s.pre_w.row(k).transpose();
      const double b = s.pre_b(k);
      Eigen::VectorXd above, below;
      const Side side = w.norm() == 0.0 ? (b >= 0 ? Side::Above : Side::Below) : split.classify(s, w, b, above, below);
      if (side == Side::Above) {
        s.post_w.row(k) = w.transpose();
        s.post_b(k) = b;
        s.pattern.push_back(1);
        ++s.neuron;
        continue;
      }
      if (side == Side::Below) {
        s.pattern.push_back(0);
        ++s.neuron;
        continue;
      }
      Star off = s;
      off.domain.add_constraint(w, -b);
      off.pattern.push_back(0);
      off.point = below;
      ++off.neuron;
      s.domain.add_constraint(-w, b);
      s.post_w.row(k) = w.transpose();
      s.post_b(k) = b;
      s.pattern.push_back(1);
      s.point = above;
      ++s.neuron;
      // LIFO: push the inactive branch first so the active one is explored first.
      stack.push_back(std::move(off));
      stack.push_back(std::move(s));
      pushed = true;
    }
  }

  std::stable_sort(out.begin(), out.end(), [](const LabeledRegion& a, const LabeledRegion& b) {
    if (a.label != b.label) return a.label > b.label;
    return a.pattern < b.pattern;
  });
  if (stats_out) *stats_out = stats;
  return out;
}

std::vector<LabeledRegion> class_regions(const io::FeedForwardNetwork& net, const io::FeatureSchema& schema,
                                         const std::string& class_value, const io::CategoricalAssignment& a,
                                         const ReachOptions& options, ReachStats* stats) {
  const auto space = io::continuous_space(schema, class_value, a);
  if (space.reduced_dim() == 0) throw ConfigError("schema has no continuous features to analyze");
  return enumerate_regions(space.restrict(net), HPolytope::unit_box(space.reduced_dim()), a, options, stats);
}

AcceptanceRegion acceptance_region(const io::FeedForwardNetwork& net, const io::FeatureSchema& schema,
                                   const std::string& class_value, int label, const RegionOptions& options) {
  AcceptanceRegion r;
  r.class_value = class_value;
  r.label = label;
  r.assignments = enumerate_categorical(schema, options.assignment_ceiling);
  for (const auto& a : r.assignments) {
    std::vector<HPolytope> polys;
    try {
      for (auto& reg : class_regions(net, schema, class_value, a, options.reach))
        if (reg.label == label) polys.push_back(std::move(reg.polytope));
    } catch (const ResourceError& e) {
      throw ResourceError(std::string(e.what()) + " for assignment " + write_json(schema.assignment_to_json(a), -1),
                          e.explored(), e.emitted());
    }
    r.polytopes.push_back(std::move(polys));
  }
  return r;
}

std::vector<HPolytope> intersect_lists(const std::vector<HPolytope>& a, const std::vector<HPolytope>& b) {
  std::vector<geometry::Box> bb;
  for (const auto& q : b) bb.push_back(geometry::bounding_box(q));
  std::vector<HPolytope> out;
  for (const auto& p : a) {
    const auto ba = geometry::bounding_box(p);
    for (std::size_t j = 0; j < b.size(); ++j) {
      if (!ba.overlaps(bb[j], geometry::kFeasTol)) continue;
      auto pq = geometry::intersect(p, b[j]);
      if (geometry::is_empty(pq)) continue;
      if (geometry::chebyshev_center(pq).radius < geometry::kDimTol) continue;
      out.push_back(std::move(pq));
    }
  }
  return out;
}

AcceptanceRegion region_intersection(const AcceptanceRegion& r1, const AcceptanceRegion& r2) {
  if (r1.assignments != r2.assignments) throw DimensionError("acceptance regions use different assignment grids");
  AcceptanceRegion out;
  out.class_value = r1.class_value + "&" + r2.class_value;
  out.label = r1.label;
  out.assignments = r1.assignments;
  out.model_hash = r1.model_hash;
  for (std::size_t a = 0; a < r1.assignments.size(); ++a)
    out.polytopes.push_back(intersect_lists(r1.polytopes[a], r2.polytopes[a]));
  return out;
}

}  // namespace polyfair::reach
