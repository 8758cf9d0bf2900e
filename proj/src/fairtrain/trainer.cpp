#include "polyfair/fairtrain/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "polyfair/common/errors.hpp"
#include "polyfair/common/random.hpp"
#include "polyfair/metrics/auc.hpp"

namespace polyfair::train {

std::string to_string(Arch a) { return a == Arch::Small ? "small" : "medium"; }

std::string to_string(Strategy s) {
  switch (s) {
    case Strategy::Baseline: return "baseline";
    case Strategy::Permute: return "permute";
    case Strategy::Remove: return "remove";
    case Strategy::Augment: return "augment";
  }
  return "?";
}

std::string to_string(AugmentLabel l) { return l == AugmentLabel::Model ? "model" : "ground_truth"; }

Arch arch_from_string(const std::string& s) {
  if (s == "small") return Arch::Small;
  if (s == "medium") return Arch::Medium;
  throw ConfigError("arch must be 'small' or 'medium', got '" + s + "'");
}

Strategy strategy_from_string(const std::string& s) {
  for (auto v : {Strategy::Baseline, Strategy::Permute, Strategy::Remove, Strategy::Augment})
    if (to_string(v) == s) return v;
  throw ConfigError("unknown strategy '" + s + "'");
}

AugmentLabel augment_label_from_string(const std::string& s) {
  if (s == "model") return AugmentLabel::Model;
  if (s == "ground_truth") return AugmentLabel::GroundTruth;
  throw ConfigError("augment label must be 'model' or 'ground_truth', got '" + s + "'");
}

std::vector<int> hidden_layers(Arch a) { return a == Arch::Small ? std::vector<int>(3, 8) : std::vector<int>(4, 8); }

Json hyperparams_to_json(const Hyperparams& h) {
  return Json{{"arch", to_string(h.arch)},
              {"hidden_layers", hidden_layers(h.arch)},
              {"learning_rate", h.learning_rate},
              {"epochs", h.epochs},
              {"batch_size", h.batch_size},
              {"seed", h.seed},
              {"strategy", to_string(h.strategy)},
              {"augment_label", to_string(h.augment_label)},
              {"max_round", h.max_round},
              {"size_factor", h.size_factor},
              {"optimizer", "sgd"},
              {"init", "he_uniform"},
              {"selection", "best_val_auc"}};
}

Hyperparams hyperparams_from_json(const Json& j) {
  Hyperparams h;
  h.arch = arch_from_string(j.at("arch").get<std::string>());
  h.learning_rate = j.at("learning_rate").get<double>();
  h.epochs = j.at("epochs").get<int>();
  h.batch_size = j.at("batch_size").get<int>();
  h.seed = j.at("seed").get<std::uint64_t>();
  h.strategy = strategy_from_string(j.at("strategy").get<std::string>());
  h.augment_label = augment_label_from_string(j.at("augment_label").get<std::string>());
  h.max_round = j.value("max_round", 20);
  h.size_factor = j.value("size_factor", 3.0);
  return h;
}

io::FeedForwardNetwork init_network(int input_dim, const std::vector<int>& hidden, std::uint64_t seed) {
  Rng rng(derive_seed(seed, streams::kInit));
  std::vector<io::DenseLayer> layers;
  int in = input_dim;
  auto make = [&](int out, io::Activation act) {
    const double limit = std::sqrt(6.0 / in);
    std::uniform_real_distribution<double> u(-limit, limit);
    io::DenseLayer l{Eigen::MatrixXd(out, in), Eigen::VectorXd::Zero(out), act};
    for (int i = 0; i < out; ++i)
      for (int j = 0; j < in; ++j) l.weights(i, j) = u(rng);
    layers.push_back(std::move(l));
    in = out;
  };
  for (int h : hidden) make(h, io::Activation::Relu);
  make(1, io::Activation::Linear);
  return io::FeedForwardNetwork(std::move(layers));
}

namespace {

double bce(double z, int y) { return std::max(z, 0.0) - z * y + std::log1p(std::exp(-std::abs(z))); }

double sigmoid(double z) {
  if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

// Forward pass on columns of a0, keeping pre-activations and activations.
struct Trace {
  std::vector<Eigen::MatrixXd> z, a;  // a[0] is the input
};

Trace forward_batch(const io::FeedForwardNetwork& net, Eigen::MatrixXd a0) {
  Trace t;
  t.a.push_back(std::move(a0));
  for (const auto& l : net.layers()) {
    Eigen::MatrixXd z = (l.weights * t.a.back()).colwise() + l.bias;
    Eigen::MatrixXd a = l.activation == io::Activation::Relu ? Eigen::MatrixXd(z.cwiseMax(0.0)) : z;
    t.z.push_back(std::move(z));
    t.a.push_back(std::move(a));
  }
  return t;
}

Gradients backprop(const io::FeedForwardNetwork& net, const Eigen::MatrixXd& a0, const std::vector<int>& y) {
  const auto t = forward_batch(net, a0);
  const auto& layers = net.layers();
  const auto L = layers.size();
  const double nb = static_cast<double>(y.size());
  Gradients g;
  g.weights.resize(L);
  g.bias.resize(L);
  Eigen::MatrixXd dz(1, a0.cols());
  for (Eigen::Index k = 0; k < a0.cols(); ++k) {
    const double z = t.z.back()(0, k);
    g.loss += bce(z, y[static_cast<std::size_t>(k)]);
    dz(0, k) = (sigmoid(z) - y[static_cast<std::size_t>(k)]) / nb;
  }
  g.loss /= nb;
  for (std::size_t l = L; l-- > 0;) {
    g.weights[l] = dz * t.a[l].transpose();
    g.bias[l] = dz.rowwise().sum();
    if (l == 0) break;
    Eigen::MatrixXd da = layers[l].weights.transpose() * dz;
    dz = da.cwiseProduct((t.z[l - 1].array() > 0.0).cast<double>().matrix());
  }
  return g;
}

double val_auc(const io::FeedForwardNetwork& net, const io::LabeledData& val) {
  const auto t = forward_batch(net, val.x.transpose());
  const Eigen::MatrixXd& z = t.z.back();
  std::vector<double> s(z.data(), z.data() + z.size());
  return metrics::auc(s, val.y);
}

bool has_both_labels(const std::vector<int>& y) {
  const auto pos = std::count(y.begin(), y.end(), 1);
  return pos > 0 && pos < static_cast<long>(y.size());
}

}  // namespace

double bce_loss(const io::FeedForwardNetwork& net, const Eigen::MatrixXd& x, const std::vector<int>& y) {
  const auto t = forward_batch(net, x.transpose());
  double s = 0.0;
  for (std::size_t k = 0; k < y.size(); ++k) s += bce(t.z.back()(0, static_cast<Eigen::Index>(k)), y[k]);
  return s / static_cast<double>(y.size());
}

Gradients gradients(const io::FeedForwardNetwork& net, const Eigen::MatrixXd& x, const std::vector<int>& y) {
  if (x.rows() != static_cast<Eigen::Index>(y.size())) throw DimensionError("rows and labels differ in count");
  return backprop(net, x.transpose(), y);
}

io::FeedForwardNetwork train(const io::LabeledData& data, const io::LabeledData& val, const Hyperparams& h,
                             TrainInfo* info) {
  if (data.rows() == 0) throw TrainingError("empty training set", 0);
  if (!has_both_labels(data.y)) throw TrainingError("training set needs both labels", 0);
  if (h.learning_rate < 0 || h.batch_size < 1 || h.epochs < 0) throw ConfigError("invalid training hyperparameters");
  // Selection falls back to the training data when validation is single-class.
  const io::LabeledData& sel = has_both_labels(val.y) ? val : data;

  auto net = init_network(static_cast<int>(data.x.cols()), hidden_layers(h.arch), h.seed);
  auto best = net;
  TrainInfo ti{0, val_auc(net, sel)};
  // Equal AUC (common once the data separates) is broken by the lower loss.
  double best_loss = bce_loss(net, sel.x, sel.y);
  Rng rng(derive_seed(h.seed, streams::kShuffle));
  std::vector<int> order(static_cast<std::size_t>(data.rows()));
  std::iota(order.begin(), order.end(), 0);
  const Eigen::MatrixXd xt = data.x.transpose();

  for (int epoch = 1; epoch <= h.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    double epoch_loss = 0.0;
    for (std::size_t start = 0; start < order.size(); start += static_cast<std::size_t>(h.batch_size)) {
      const std::size_t end = std::min(order.size(), start + static_cast<std::size_t>(h.batch_size));
      Eigen::MatrixXd xb(xt.rows(), static_cast<Eigen::Index>(end - start));
      std::vector<int> yb;
      for (std::size_t k = start; k < end; ++k) {
        xb.col(static_cast<Eigen::Index>(k - start)) = xt.col(order[k]);
        yb.push_back(data.y[static_cast<std::size_t>(order[k])]);
      }
      const auto g = backprop(net, xb, yb);
      epoch_loss += g.loss * static_cast<double>(end - start);
      auto& layers = net.mutable_layers();
      for (std::size_t l = 0; l < layers.size(); ++l) {
        layers[l].weights -= h.learning_rate * g.weights[l];
        layers[l].bias -= h.learning_rate * g.bias[l];
      }
    }
    if (!std::isfinite(epoch_loss)) throw TrainingError("training loss diverged", epoch);
    const double a = val_auc(net, sel);
    if (a < ti.best_val_auc) continue;
    const double loss = bce_loss(net, sel.x, sel.y);
    if (a > ti.best_val_auc || loss < best_loss) {
      ti = TrainInfo{epoch, a};
      best_loss = loss;
      best = net;
    }
  }
  if (info) *info = ti;
  return best;
}

}  // namespace polyfair::train
