#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "polyfair/fairtrain/trainer.hpp"
#include "polyfair/reach/categorical.hpp"

namespace polyfair::testing {

geometry::HPolytope random_clipped_polytope(int dim, int cuts, Rng& rng) {
  auto p = geometry::HPolytope::unit_box(dim);
  std::normal_distribution<double> g;
  const Eigen::VectorXd center = Eigen::VectorXd::Constant(dim, 0.5);
  for (int k = 0; k < cuts; ++k) {
    Eigen::VectorXd a(dim);
    for (int i = 0; i < dim; ++i) a(i) = g(rng);
    a.normalize();
    const double margin = 0.05 + 0.4 * uniform01(rng);
    p.add_constraint(a, a.dot(center) + margin);
  }
  return p;
}

namespace {

bool next_combination(std::vector<int>& idx, int m) {
  const int k = static_cast<int>(idx.size());
  for (int i = k - 1; i >= 0; --i) {
    if (idx[i] < m - k + i) {
      ++idx[i];
      for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
      return true;
    }
  }
  return false;
}

}  // namespace

std::vector<Eigen::VectorXd> brute_force_vertices(const geometry::HPolytope& p, double tol) {
  const int n = p.dim(), m = p.num_constraints();
  std::vector<Eigen::VectorXd> out;
  if (m < n) return out;
  std::vector<int> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  do {
    Eigen::MatrixXd A(n, n);
    Eigen::VectorXd b(n);
    for (int k = 0; k < n; ++k) {
      A.row(k) = p.C().row(idx[k]);
      b(k) = p.d()(idx[k]);
    }
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(A);
    if (qr.rank() < n) continue;
    Eigen::VectorXd x = qr.solve(b);
    if (!p.contains(x, tol)) continue;
    bool dup = false;
    for (const auto& v : out) dup = dup || (v - x).norm() < 1e-7;
    if (!dup) out.push_back(x);
  } while (next_combination(idx, m));
  return out;
}

McEstimate mc_volume(const geometry::HPolytope& p, const Eigen::VectorXd& lo, const Eigen::VectorXd& hi,
                     long samples, Rng& rng) {
  const int n = p.dim();
  const int m = p.num_constraints();
  const Eigen::VectorXd span = hi - lo;
  const double box = span.prod();
  // Plain arrays keep the inner loop free of Eigen temporaries.
  std::vector<double> c(static_cast<std::size_t>(m * n)), d(static_cast<std::size_t>(m)), x(static_cast<std::size_t>(n));
  for (int r = 0; r < m; ++r) {
    d[static_cast<std::size_t>(r)] = p.d()(r);
    for (int i = 0; i < n; ++i) c[static_cast<std::size_t>(r * n + i)] = p.C()(r, i);
  }
  long hits = 0;
  for (long s = 0; s < samples; ++s) {
    for (int i = 0; i < n; ++i) x[static_cast<std::size_t>(i)] = lo(i) + span(i) * (static_cast<double>(rng() >> 11) * 0x1.0p-53);
    bool in = true;
    for (int r = 0; r < m && in; ++r) {
      double v = 0.0;
      for (int i = 0; i < n; ++i) v += c[static_cast<std::size_t>(r * n + i)] * x[static_cast<std::size_t>(i)];
      in = v <= d[static_cast<std::size_t>(r)];
    }
    hits += in;
  }
  const double f = static_cast<double>(hits) / static_cast<double>(samples);
  return {box * f, box * std::sqrt(f * (1 - f) / static_cast<double>(samples))};
}

double loop_forward(const io::FeedForwardNetwork& net, const std::vector<double>& x) {
  std::vector<double> cur = x;
  for (const auto& layer : net.layers()) {
    std::vector<double> next(static_cast<std::size_t>(layer.out_dim()));
    for (int i = 0; i < layer.out_dim(); ++i) {
      double s = layer.bias(i);
      for (int j = 0; j < layer.in_dim(); ++j) s += layer.weights(i, j) * cur[static_cast<std::size_t>(j)];
      if (layer.activation == io::Activation::Relu && s < 0) s = 0;
      next[static_cast<std::size_t>(i)] = s;
    }
    cur = std::move(next);
  }
  return cur.front();
}

io::FeedForwardNetwork random_network(int input_dim, const std::vector<int>& hidden, Rng& rng) {
  std::normal_distribution<double> g;
  std::vector<io::DenseLayer> layers;
  int in = input_dim;
  auto make = [&](int out, io::Activation act) {
    io::DenseLayer l;
    l.weights.resize(out, in);
    l.bias.resize(out);
    const double scale = std::sqrt(2.0 / in);
    for (int i = 0; i < out; ++i) {
      for (int j = 0; j < in; ++j) l.weights(i, j) = scale * g(rng);
      l.bias(i) = 0.3 * g(rng);
    }
    l.activation = act;
    layers.push_back(std::move(l));
    in = out;
  };
  for (int h : hidden) make(h, io::Activation::Relu);
  make(1, io::Activation::Linear);
  return io::FeedForwardNetwork(std::move(layers));
}

double trapezoid_auc(const std::vector<double>& scores, const std::vector<int>& labels) {
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
  double pos = 0, neg = 0;
  for (int l : labels) (l ? pos : neg) += 1;
  double tp = 0, fp = 0, prev_tpr = 0, prev_fpr = 0, area = 0;
  for (std::size_t k = 0; k < order.size();) {
    const double s = scores[order[k]];
    while (k < order.size() && scores[order[k]] == s) {
      (labels[order[k]] ? tp : fp) += 1;
      ++k;
    }
    const double tpr = tp / pos, fpr = fp / neg;
    area += (fpr - prev_fpr) * (tpr + prev_tpr) / 2;
    prev_tpr = tpr;
    prev_fpr = fpr;
  }
  return area;
}

io::FeatureSchema toy_schema(int continuous, const std::vector<int>& cats) {
  std::vector<io::FeatureSpec> f;
  f.push_back({"group", io::FeatureKind::Categorical, {}, {}, {"A", "B"}});
  for (std::size_t c = 0; c < cats.size(); ++c) {
    io::FeatureSpec s{"c" + std::to_string(c), io::FeatureKind::Categorical, {}, {}, {}};
    for (int v = 0; v < cats[c]; ++v) s.values.push_back("v" + std::to_string(v));
    f.push_back(s);
  }
  for (int i = 0; i < continuous; ++i) f.push_back({"x" + std::to_string(i), io::FeatureKind::Continuous, 0.0, 1.0, {}});
  return io::FeatureSchema(f, "group", {"A", "B"});
}

io::FeedForwardNetwork linear_network(const Eigen::VectorXd& w, double b) {
  io::DenseLayer l;
  l.weights = w.transpose();
  l.bias = Eigen::VectorXd::Constant(1, b);
  l.activation = io::Activation::Linear;
  return io::FeedForwardNetwork({l});
}

Eigen::RowVectorXd encode(const io::FeatureSchema& schema, int cls, const std::vector<int>& cats,
                          const std::vector<double>& cont) {
  Eigen::RowVectorXd x = Eigen::RowVectorXd::Zero(schema.input_dim());
  x(schema.protected_slots().offset + cls) = 1.0;
  const auto& fc = schema.free_categoricals();
  for (std::size_t k = 0; k < fc.size(); ++k) x(schema.slots(fc[k]).offset + cats[k]) = 1.0;
  const auto& cs = schema.continuous_slots();
  for (std::size_t k = 0; k < cs.size(); ++k) x(cs[k]) = cont[k];
  return x;
}

density::DensityModel uniform_density(const io::FeatureSchema& schema, int bins) {
  density::DensityModel m;
  m.grid = density::Grid(schema.continuous_dim(), bins);
  m.assignments = reach::enumerate_categorical(schema);
  for (const auto& v : schema.protected_values()) {
    density::ClassDensity c;
    c.class_value = v;
    c.rows = 1;
    c.mass.assign(m.assignments.size(), 1.0 / static_cast<double>(m.assignments.size()));
    c.cells.resize(m.assignments.size());
    for (auto& cells : c.cells)
      for (long k = 0; k < m.grid.cell_count(); ++k) cells[k] = 1.0;
    m.classes.push_back(c);
  }
  return m;
}

std::vector<bool> activation_pattern(const io::FeedForwardNetwork& net, const Eigen::VectorXd& x) {
  const auto pre = net.pre_activations(x);
  std::vector<bool> out;
  for (std::size_t k = 0; k + 1 < pre.size(); ++k) out.push_back(pre[k] > 0);
  return out;
}

double gradient_check(const io::FeedForwardNetwork& net, const Eigen::VectorXd& x, int y, double eps) {
  const Eigen::MatrixXd xm = x.transpose();
  const std::vector<int> ym{y};
  const auto g = train::gradients(net, xm, ym);
  const auto base = activation_pattern(net, x);
  double worst = 0.0;
  auto probe = [&](auto&& param, double analytic, io::FeedForwardNetwork& work) {
    const double keep = param;
    param = keep + eps;
    const double up = train::bce_loss(work, xm, ym);
    const bool same_up = activation_pattern(work, x) == base;
    param = keep - eps;
    const double down = train::bce_loss(work, xm, ym);
    const bool same_down = activation_pattern(work, x) == base;
    param = keep;
    if (!same_up || !same_down) return;
    const double fd = (up - down) / (2 * eps);
    const double denom = std::max({std::abs(fd), std::abs(analytic), 1e-7});
    worst = std::max(worst, std::abs(fd - analytic) / denom);
  };
  io::FeedForwardNetwork work = net;
  auto& layers = work.mutable_layers();
  for (std::size_t l = 0; l < layers.size(); ++l) {
    for (Eigen::Index i = 0; i < layers[l].weights.rows(); ++i) {
      for (Eigen::Index j = 0; j < layers[l].weights.cols(); ++j) probe(layers[l].weights(i, j), g.weights[l](i, j), work);
      probe(layers[l].bias(i), g.bias[l](i), work);
    }
  }
  return worst;
}

}  // namespace polyfair::testing
