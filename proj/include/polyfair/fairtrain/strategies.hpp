#pragma once

#include <functional>
#include <string>
#include <vector>

#include "polyfair/common/json_writer.hpp"
#include "polyfair/fairtrain/trainer.hpp"
#include "polyfair/model_io/dataset.hpp"
#include "polyfair/model_io/schema.hpp"

namespace polyfair::train {

// Swaps the two protected one-hot coordinates. Throws SchemaError when the
// group is not a valid one-hot pair.
Eigen::VectorXd flip_protected(const Eigen::VectorXd& x, const io::FeatureSchema& schema);

// Rows whose decision changes when the protected value is flipped.
std::vector<int> flip_indices(const io::FeedForwardNetwork& model, const Eigen::MatrixXd& x,
                              const io::FeatureSchema& schema);

struct ProcResult {
  io::LabeledData data;
  std::vector<int> flipped;  // rows whose decision changes when flipped
};

// remove: drop the flipped rows. augment: append each flipped twin, labeled by the
// model's decision on the original row (AugmentLabel::Model) or by the
// original row's label (AugmentLabel::GroundTruth).
ProcResult proc(const io::LabeledData& data, const io::FeedForwardNetwork& model, Strategy strategy,
                const io::FeatureSchema& schema, AugmentLabel label = AugmentLabel::Model);

struct RoundRecord {
  int round = 0;
  int size = 0;   // rows the round trained on
  int flips = 0;  // flipped rows of the trained model on that data
  double val_auc = 0.0;
};

struct TrainTrace {
  int n0 = 0;
  std::vector<RoundRecord> rounds;
  int final_round = 0;
  std::string stop_reason;
};

Json trace_to_json(const TrainTrace& t);

using Trainer = std::function<io::FeedForwardNetwork(const io::LabeledData& train, const io::LabeledData& val,
                                                     const Hyperparams& h)>;

// The default trainer (train()).
Trainer sgd_trainer();

struct LoopResult {
  io::FeedForwardNetwork model;
  TrainTrace trace;
  io::LabeledData final_data;
};

// Train, then proc, repeatedly. Stops when no row flips, when the next
// round index would exceed max_round, when the next training set would be
// empty, single-labeled, or larger than size_factor * n0. Returns the last
// trained model.
LoopResult fair_loop(const io::Dataset& dataset, const Hyperparams& h, const Trainer& trainer = sgd_trainer());

// Permutes the protected one-hot groups among the train rows. Val and test
// rows, labels, and other features are untouched.
io::Dataset permute_protected(const io::Dataset& dataset, std::uint64_t seed);

struct StrategyResult {
  io::FeedForwardNetwork model;
  Json training;  // hyperparameters, strategy, trace
};

// Dispatches on h.strategy.
StrategyResult train_strategy(const io::Dataset& dataset, const Hyperparams& h, const Trainer& trainer = sgd_trainer());

}  // namespace polyfair::train
