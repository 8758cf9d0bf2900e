#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "polyfair/common/json_writer.hpp"
#include "polyfair/model_io/dataset.hpp"
#include "polyfair/model_io/network.hpp"

namespace polyfair::train {

enum class Arch { Small, Medium };
enum class Strategy { Baseline, Permute, Remove, Augment };
enum class AugmentLabel { Model, GroundTruth };

std::string to_string(Arch a);
std::string to_string(Strategy s);
std::string to_string(AugmentLabel l);
Arch arch_from_string(const std::string& s);
Strategy strategy_from_string(const std::string& s);
AugmentLabel augment_label_from_string(const std::string& s);

// Hidden widths: small = 3 x 8, medium = 4 x 8.
std::vector<int> hidden_layers(Arch a);

struct Hyperparams {
  Arch arch = Arch::Small;
  double learning_rate = 0.01;
  int epochs = 300;
  int batch_size = 32;
  std::uint64_t seed = 0;
  Strategy strategy = Strategy::Baseline;
  AugmentLabel augment_label = AugmentLabel::Model;
  int max_round = 20;       // rounds 0..max_round
  double size_factor = 3.0;  // augmented training set at most size_factor * n0
};

Json hyperparams_to_json(const Hyperparams& h);
Hyperparams hyperparams_from_json(const Json& j);

// He-style uniform weights U(-sqrt(6/fan_in), sqrt(6/fan_in)), zero biases.
io::FeedForwardNetwork init_network(int input_dim, const std::vector<int>& hidden, std::uint64_t seed);

struct Gradients {
  std::vector<Eigen::MatrixXd> weights;
  std::vector<Eigen::VectorXd> bias;
  double loss = 0.0;
};

// Mean binary cross-entropy of sigmoid(logit) over the rows of x.
double bce_loss(const io::FeedForwardNetwork& net, const Eigen::MatrixXd& x, const std::vector<int>& y);
// Its gradient by backpropagation.
Gradients gradients(const io::FeedForwardNetwork& net, const Eigen::MatrixXd& x, const std::vector<int>& y);

struct TrainInfo {
  int best_epoch = 0;  // 0 = the initialization
  double best_val_auc = 0.0;
};

// Mini-batch SGD, returning the parameters of the epoch with the best
// validation AUC (ties go to the lower validation loss). Throws TrainingError (with the epoch) on a non-finite loss
// and when the training data lacks one of the labels.
io::FeedForwardNetwork train(const io::LabeledData& train, const io::LabeledData& val, const Hyperparams& h,
                             TrainInfo* info = nullptr);

}  // namespace polyfair::train
