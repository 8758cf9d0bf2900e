#include "polyfair/model_io/network.hpp"

#include <cmath>

#include "polyfair/common/errors.hpp"

namespace polyfair::io {

std::string to_string(Activation a) { return a == Activation::Relu ? "relu" : "linear"; }

Activation activation_from_string(const std::string& s) {
  if (s == "relu") return Activation::Relu;
  if (s == "linear") return Activation::Linear;
  throw SchemaError("unknown activation: " + s);
}

FeedForwardNetwork::FeedForwardNetwork(std::vector<DenseLayer> layers) : layers_(std::move(layers)) {
  if (layers_.empty()) throw StructuralError("network has no layers", 0);
  for (std::size_t i = 0; i < layers_.size(); ++i) {
    const auto& l = layers_[i];
    const int idx = static_cast<int>(i) + 1;
    if (l.bias.size() != l.weights.rows())
      throw StructuralError("layer " + std::to_string(idx) + ": bias size does not match weight rows", idx);
    if (l.in_dim() == 0 || l.out_dim() == 0)
      throw StructuralError("layer " + std::to_string(idx) + " is empty", idx);
    if (i > 0 && l.in_dim() != layers_[i - 1].out_dim())
      throw StructuralError("layer " + std::to_string(idx) + " expects " + std::to_string(l.in_dim()) +
                                " inputs but layer " + std::to_string(idx - 1) + " produces " +
                                std::to_string(layers_[i - 1].out_dim()),
                            idx);
    const bool last = i + 1 == layers_.size();
    if (last && l.activation != Activation::Linear)
      throw StructuralError("final layer must be linear", idx);
    if (!last && l.activation != Activation::Relu)
      throw StructuralError("layer " + std::to_string(idx) + ": hidden layers must be relu", idx);
    if (!l.weights.allFinite() || !l.bias.allFinite())
      throw StructuralError("layer " + std::to_string(idx) + " has non-finite parameters", idx);
  }
  if (layers_.back().out_dim() != 1) throw StructuralError("output layer must have exactly one neuron",
                                                           static_cast<int>(layers_.size()));
}

int FeedForwardNetwork::hidden_neurons() const {
  int n = 0;
  for (std::size_t i = 0; i + 1 < layers_.size(); ++i) n += layers_[i].out_dim();
  return n;
}

double FeedForwardNetwork::forward(const Eigen::VectorXd& x) const {
  if (x.size() != input_dim())
    throw DimensionError("input has " + std::to_string(x.size()) + " entries, network expects " +
                         std::to_string(input_dim()));
  Eigen::VectorXd h = x;
  for (const auto& l : layers_) {
    Eigen::VectorXd z = l.weights * h + l.bias;
    if (l.activation == Activation::Relu) z = z.cwiseMax(0.0);
    h = std::move(z);
  }
  return h(0);
}

double FeedForwardNetwork::forward(std::span<const double> x) const {
  return forward(Eigen::Map<const Eigen::VectorXd>(x.data(), static_cast<Eigen::Index>(x.size())).eval());
}

std::vector<double> FeedForwardNetwork::pre_activations(const Eigen::VectorXd& x) const {
  if (x.size() != input_dim()) throw DimensionError("input dimension mismatch");
  std::vector<double> out;
  Eigen::VectorXd h = x;
  for (const auto& l : layers_) {
    Eigen::VectorXd z = l.weights * h + l.bias;
    out.insert(out.end(), z.data(), z.data() + z.size());
    if (l.activation == Activation::Relu) z = z.cwiseMax(0.0);
    h = std::move(z);
  }
  return out;
}

int decide(const FeedForwardNetwork& net, const Eigen::VectorXd& x) { return decide_logit(net.forward(x)); }

Json network_to_json(const FeedForwardNetwork& net) {
  Json layers = Json::array();
  for (const auto& l : net.layers()) {
    Json w = Json::array();
    for (Eigen::Index i = 0; i < l.weights.rows(); ++i) {
      Json row = Json::array();
      for (Eigen::Index j = 0; j < l.weights.cols(); ++j) row.push_back(l.weights(i, j));
      w.push_back(std::move(row));
    }
    Json b = Json::array();
    for (Eigen::Index i = 0; i < l.bias.size(); ++i) b.push_back(l.bias(i));
    layers.push_back(Json{{"weights", w}, {"bias", b}, {"activation", to_string(l.activation)}});
  }
  return layers;
}

FeedForwardNetwork network_from_json(const Json& layers) {
  std::vector<DenseLayer> out;
  int idx = 0;
  try {
    for (const auto& jl : layers) {
      ++idx;
      DenseLayer l;
      const auto& w = jl.at("weights");
      const auto rows = static_cast<Eigen::Index>(w.size());
      const auto cols = rows > 0 ? static_cast<Eigen::Index>(w.at(0).size()) : 0;
      l.weights.resize(rows, cols);
      for (Eigen::Index i = 0; i < rows; ++i) {
        if (static_cast<Eigen::Index>(w.at(i).size()) != cols)
          throw StructuralError("layer " + std::to_string(idx) + ": ragged weight matrix", idx);
        for (Eigen::Index j = 0; j < cols; ++j) l.weights(i, j) = w.at(i).at(j).get<double>();
      }
      const auto& b = jl.at("bias");
      l.bias.resize(static_cast<Eigen::Index>(b.size()));
      for (Eigen::Index i = 0; i < l.bias.size(); ++i) l.bias(i) = b.at(i).get<double>();
      l.activation = activation_from_string(jl.at("activation").get<std::string>());
      out.push_back(std::move(l));
    }
  } catch (const Json::exception& e) {
    throw SchemaError("layer " + std::to_string(idx) + ": " + e.what());
  }
  return FeedForwardNetwork(std::move(out));
}

}  // namespace polyfair::io
