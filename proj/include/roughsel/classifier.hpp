#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "roughsel/matrix.hpp"

namespace roughsel {

enum class UpdateMode { stochastic, full_batch };

struct NetworkConfig {
  std::size_t input_dim = 1;
  std::vector<std::size_t> hidden_sizes;
  std::size_t output_dim = 2;
  double learning_rate = 0.5;
  std::size_t epochs = 1000;
  std::uint64_t seed = 0;
  double weight_init_scale = 0.5;
  UpdateMode mode = UpdateMode::stochastic;

  // One hidden layer of width max(2, 2 * input_dim + 1).
  static std::vector<std::size_t> default_hidden(std::size_t input_dim);
  void validate() const;
};

// weights is out x in.
struct Layer {
  Matrix weights;
  std::vector<double> bias;

  bool operator==(const Layer&) const = default;
};

struct Network {
  std::vector<Layer> layers;

  std::size_t input_dim() const { return layers.empty() ? 0 : layers.front().weights.cols(); }
  std::size_t output_dim() const { return layers.empty() ? 0 : layers.back().weights.rows(); }
  std::vector<std::size_t> layer_sizes() const;

  bool operator==(const Network&) const = default;
};

struct TrainReport {
  // Mean over samples and outputs of (output - target)^2, one entry per epoch.
  std::vector<double> epoch_mse;
  double final_train_accuracy = 0.0;

  bool operator==(const TrainReport&) const = default;
};

// Weights uniform in [-scale, scale] from the seeded RNG, biases zero.
Network init_network(const NetworkConfig& config);

// Sigmoid after every affine layer.
std::vector<double> forward(const Network& net, std::span<const double> x);

// 0.5 * sum_k (output_k - target_k)^2 for one sample.
double sample_loss(const Network& net, std::span<const double> x, std::span<const double> target);

// Gradient of sample_loss, same shape as the network.
Network backprop(const Network& net, std::span<const double> x, std::span<const double> target);

std::vector<double> one_hot(std::size_t label, std::size_t classes);

TrainReport train(Network& net, const Matrix& data, std::span<const std::size_t> labels,
                  const NetworkConfig& config);

// Argmax of the output layer, ties -> lower class index.
std::vector<std::size_t> predict(const Network& net, const Matrix& data);

// Largest relative error between backprop and centred finite differences
// over every weight and bias. The denominator is floored at 1e-8.
double gradient_check(const Network& net, std::span<const double> x, std::span<const double> target,
                      double epsilon);

}  // namespace roughsel
