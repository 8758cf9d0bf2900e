#include "polyfair/fairtrain/strategies.hpp"

#include <algorithm>

#include "polyfair/common/errors.hpp"
#include "polyfair/common/random.hpp"
#include "polyfair/metrics/auc.hpp"

namespace polyfair::train {

Eigen::VectorXd flip_protected(const Eigen::VectorXd& x, const io::FeatureSchema& schema) {
  const auto r = schema.protected_slots();
  if (x.size() != schema.input_dim()) throw DimensionError("row does not match the schema encoding");
  const double a = x(r.offset), b = x(r.offset + 1);
  if (!((a == 1.0 && b == 0.0) || (a == 0.0 && b == 1.0)))
    throw SchemaError("protected slots are not a valid one-hot pair");
  Eigen::VectorXd y = x;
  y(r.offset) = b;
  y(r.offset + 1) = a;
  return y;
}

std::vector<int> flip_indices(const io::FeedForwardNetwork& model, const Eigen::MatrixXd& x,
                              const io::FeatureSchema& schema) {
  std::vector<int> out;
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    const Eigen::VectorXd row = x.row(i).transpose();
    if (io::decide(model, row) != io::decide(model, flip_protected(row, schema))) out.push_back(static_cast<int>(i));
  }
  return out;
}

ProcResult proc(const io::LabeledData& data, const io::FeedForwardNetwork& model, Strategy strategy,
                const io::FeatureSchema& schema, AugmentLabel label) {
  if (strategy != Strategy::Remove && strategy != Strategy::Augment)
    throw ConfigError("proc needs the remove or augment strategy");
  ProcResult out;
  out.flipped = flip_indices(model, data.x, schema);
  const auto n = data.rows();
  const auto nf = static_cast<int>(out.flipped.size());
  if (strategy == Strategy::Remove) {
    std::vector<bool> drop(static_cast<std::size_t>(n), false);
    for (int i : out.flipped) drop[static_cast<std::size_t>(i)] = true;
    out.data.x.resize(n - nf, data.x.cols());
    int k = 0;
    for (int i = 0; i < n; ++i) {
      if (drop[static_cast<std::size_t>(i)]) continue;
      out.data.x.row(k++) = data.x.row(i);
      out.data.y.push_back(data.y[static_cast<std::size_t>(i)]);
    }
    return out;
  }
  out.data.x.resize(n + nf, data.x.cols());
  out.data.x.topRows(n) = data.x;
  out.data.y = data.y;
  for (int k = 0; k < nf; ++k) {
    const int j = out.flipped[static_cast<std::size_t>(k)];
    const Eigen::VectorXd row = data.x.row(j).transpose();
    out.data.x.row(n + k) = flip_protected(row, schema).transpose();
    out.data.y.push_back(label == AugmentLabel::Model ? io::decide(model, row) : data.y[static_cast<std::size_t>(j)]);
  }
  return out;
}

Json trace_to_json(const TrainTrace& t) {
  Json rounds = Json::array();
  for (const auto& r : t.rounds)
    rounds.push_back(Json{{"round", r.round}, {"size", r.size}, {"flips", r.flips}, {"val_auc", r.val_auc}});
  return Json{{"n0", t.n0}, {"rounds", rounds}, {"final_round", t.final_round}, {"stop_reason", t.stop_reason}};
}

Trainer sgd_trainer() {
  return [](const io::LabeledData& tr, const io::LabeledData& val, const Hyperparams& h) { return train(tr, val, h); };
}

namespace {

double auc_or_nan(const io::FeedForwardNetwork& net, const io::LabeledData& val) {
  std::vector<double> s;
  for (int i = 0; i < val.rows(); ++i) s.push_back(net.forward(Eigen::VectorXd(val.x.row(i).transpose())));
  try {
    return metrics::auc(s, val.y);
  } catch (const EstimationError&) {
    return std::nan("");
  }
}

bool both_labels(const std::vector<int>& y) {
  const auto pos = std::count(y.begin(), y.end(), 1);
  return pos > 0 && pos < static_cast<long>(y.size());
}

}  // namespace

LoopResult fair_loop(const io::Dataset& dataset, const Hyperparams& h, const Trainer& trainer) {
  if (h.strategy != Strategy::Remove && h.strategy != Strategy::Augment)
    throw ConfigError("fair_loop needs the remove or augment strategy");
  const auto val = dataset.select(io::Split::Val);
  io::LabeledData cur = dataset.select(io::Split::Train);
  TrainTrace trace;
  trace.n0 = cur.rows();
  const double cap = h.size_factor * trace.n0;
  io::FeedForwardNetwork model;
  for (int round = 0;; ++round) {
    model = trainer(cur, val, h);
    auto next = proc(cur, model, h.strategy, dataset.schema, h.augment_label);
    trace.rounds.push_back(RoundRecord{round, cur.rows(), static_cast<int>(next.flipped.size()), auc_or_nan(model, val)});
    trace.final_round = round;
    if (next.flipped.empty()) {
      trace.stop_reason = "no_flips";
      break;
    }
    if (round + 1 > h.max_round) {
      trace.stop_reason = "round_limit";
      break;
    }
    if (next.data.rows() < 1) {
      trace.stop_reason = "empty";
      break;
    }
    if (next.data.rows() > cap) {
      trace.stop_reason = "size_limit";
      break;
    }
    if (!both_labels(next.data.y)) {
      trace.stop_reason = "single_label";
      break;
    }
    cur = std::move(next.data);
  }
  return LoopResult{std::move(model), std::move(trace), std::move(cur)};
}

io::Dataset permute_protected(const io::Dataset& dataset, std::uint64_t seed) {
  io::Dataset out = dataset;
  const auto r = dataset.schema.protected_slots();
  std::vector<std::size_t> train;
  for (std::size_t i = 0; i < out.rows.size(); ++i)
    if (out.rows[i].split == io::Split::Train) train.push_back(i);
  std::vector<std::size_t> perm = train;
  Rng rng(seed);
  // Fisher-Yates with the same primitive as the split shuffle.
  for (std::size_t k = perm.size(); k > 1; --k) {
    std::uniform_int_distribution<std::size_t> u(0, k - 1);
    std::swap(perm[k - 1], perm[u(rng)]);
  }
  for (std::size_t k = 0; k < train.size(); ++k)
    for (int s = 0; s < r.width; ++s)
      out.rows[train[k]].x[static_cast<std::size_t>(r.offset + s)] =
          dataset.rows[perm[k]].x[static_cast<std::size_t>(r.offset + s)];
  return out;
}

StrategyResult train_strategy(const io::Dataset& dataset, const Hyperparams& h, const Trainer& trainer) {
  Json training{{"hyperparameters", hyperparams_to_json(h)}, {"strategy", to_string(h.strategy)}, {"seed", h.seed}};
  const auto val = dataset.select(io::Split::Val);
  switch (h.strategy) {
    case Strategy::Baseline:
      return {trainer(dataset.select(io::Split::Train), val, h), training};
    case Strategy::Permute: {
      const auto permuted = permute_protected(dataset, derive_seed(h.seed, streams::kPermute));
      return {trainer(permuted.select(io::Split::Train), val, h), training};
    }
    case Strategy::Remove:
    case Strategy::Augment: {
      auto res = fair_loop(dataset, h, trainer);
      training["trace"] = trace_to_json(res.trace);
      return {std::move(res.model), training};
    }
  }
  throw ConfigError("unknown strategy");
}

}  // namespace polyfair::train
