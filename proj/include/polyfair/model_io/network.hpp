#pragma once

#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "polyfair/common/json_writer.hpp"

namespace polyfair::io {

enum class Activation { Relu, Linear };

std::string to_string(Activation a);
Activation activation_from_string(const std::string& s);

struct DenseLayer {
  Eigen::MatrixXd weights;  // [out x in]; weights(i, j) connects input j to neuron i
  Eigen::VectorXd bias;     // [out]
  Activation activation = Activation::Relu;

  int in_dim() const { return static_cast<int>(weights.cols()); }
  int out_dim() const { return static_cast<int>(weights.rows()); }
};

// Affine layers with ReLU activations and a single linear output neuron.
// Construction validates the chain of dimensions; StructuralError reports
// the 1-based index of the first offending layer.
class FeedForwardNetwork {
 public:
  FeedForwardNetwork() = default;
  explicit FeedForwardNetwork(std::vector<DenseLayer> layers);

  const std::vector<DenseLayer>& layers() const { return layers_; }
  std::vector<DenseLayer>& mutable_layers() { return layers_; }
  int input_dim() const { return layers_.empty() ? 0 : layers_.front().in_dim(); }
  int output_dim() const { return 1; }
  int hidden_neurons() const;

  double forward(const Eigen::VectorXd& x) const;
  double forward(std::span<const double> x) const;

  // Pre-activation values of every hidden neuron, layer by layer, followed
  // by the logit. Used for activation patterns and kink detection.
  std::vector<double> pre_activations(const Eigen::VectorXd& x) const;

 private:
  std::vector<DenseLayer> layers_;
};

// Accept (1) iff logit >= 0, i.e. sigmoid(logit) >= 0.5. A logit of exactly
// zero counts as accept; region enumeration uses the same closed half-space.
inline int decide_logit(double logit) { return logit >= 0.0 ? 1 : 0; }
int decide(const FeedForwardNetwork& net, const Eigen::VectorXd& x);

Json network_to_json(const FeedForwardNetwork& net);
FeedForwardNetwork network_from_json(const Json& layers);

}  // namespace polyfair::io
