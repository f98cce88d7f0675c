#include "roughsel/classifier.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "roughsel/clustering.hpp"
#include "roughsel/seeds.hpp"

namespace roughsel {

namespace {

double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

// Activations of every layer, input first.
std::vector<std::vector<double>> activations(const Network& net, std::span<const double> x) {
  std::vector<std::vector<double>> acts;
  acts.emplace_back(x.begin(), x.end());
  for (const auto& layer : net.layers) {
    const auto& in = acts.back();
    std::vector<double> out(layer.weights.rows());
    for (std::size_t o = 0; o < out.size(); ++o) {
      double z = layer.bias[o];
      auto w = layer.weights.row(o);
      for (std::size_t i = 0; i < in.size(); ++i) z += w[i] * in[i];
      out[o] = sigmoid(z);
    }
    acts.push_back(std::move(out));
  }
  return acts;
}

Network zeros_like(const Network& net) {
  Network g;
  for (const auto& l : net.layers)
    g.layers.push_back({Matrix(l.weights.rows(), l.weights.cols()), std::vector<double>(l.bias.size(), 0.0)});
  return g;
}

void accumulate_gradient(const Network& net, std::span<const double> x, std::span<const double> target,
                         Network& grad) {
  const auto acts = activations(net, x);
  // delta of the output layer for 0.5 * ||y - t||^2 through the sigmoid
  std::vector<double> delta(acts.back().size());
  for (std::size_t k = 0; k < delta.size(); ++k) {
    const double y = acts.back()[k];
    delta[k] = (y - target[k]) * y * (1.0 - y);
  }
  for (std::size_t l = net.layers.size(); l-- > 0;) {
    const auto& in = acts[l];
    auto& g = grad.layers[l];
    for (std::size_t o = 0; o < delta.size(); ++o) {
      g.bias[o] += delta[o];
      auto gw = g.weights.row(o);
      for (std::size_t i = 0; i < in.size(); ++i) gw[i] += delta[o] * in[i];
    }
    if (l == 0) break;
    const auto& w = net.layers[l].weights;
    std::vector<double> prev(in.size(), 0.0);
    for (std::size_t i = 0; i < in.size(); ++i) {
      double s = 0.0;
      for (std::size_t o = 0; o < delta.size(); ++o) s += w(o, i) * delta[o];
      prev[i] = s * in[i] * (1.0 - in[i]);
    }
    delta = std::move(prev);
  }
}

void apply_step(Network& net, const Network& grad, double rate) {
  for (std::size_t l = 0; l < net.layers.size(); ++l) {
    auto w = net.layers[l].weights.data();
    auto gw = grad.layers[l].weights.data();
    for (std::size_t i = 0; i < w.size(); ++i) w[i] -= rate * gw[i];
    for (std::size_t o = 0; o < net.layers[l].bias.size(); ++o)
      net.layers[l].bias[o] -= rate * grad.layers[l].bias[o];
  }
}

void check_input(const Network& net, std::span<const double> x) {
  if (net.layers.empty()) throw std::invalid_argument("network has no layers");
  if (x.size() != net.input_dim()) throw std::invalid_argument("input dimension mismatch");
}

double squared_error(const std::vector<double>& y, std::span<const double> t) {
  double s = 0.0;
  for (std::size_t k = 0; k < y.size(); ++k) s += (y[k] - t[k]) * (y[k] - t[k]);
  return s;
}

}  // namespace

std::vector<std::size_t> NetworkConfig::default_hidden(std::size_t input_dim) {
  return {std::max<std::size_t>(2, 2 * input_dim + 1)};
}

void NetworkConfig::validate() const {
  if (input_dim < 1) throw std::invalid_argument("network input_dim must be at least 1");
  if (output_dim < 1) throw std::invalid_argument("network output_dim must be at least 1");
  for (auto h : hidden_sizes)
    if (h < 1) throw std::invalid_argument("hidden layer width must be at least 1");
  if (!(learning_rate > 0.0)) throw std::invalid_argument("learning_rate must be positive");
  if (!(weight_init_scale >= 0.0)) throw std::invalid_argument("weight_init_scale must be non-negative");
}

std::vector<std::size_t> Network::layer_sizes() const {
  std::vector<std::size_t> sizes;
  if (layers.empty()) return sizes;
  sizes.push_back(input_dim());
  for (const auto& l : layers) sizes.push_back(l.weights.rows());
  return sizes;
}

Network init_network(const NetworkConfig& config) {
  config.validate();
  Rng rng(config.seed);
  std::uniform_real_distribution<double> uni(-config.weight_init_scale, config.weight_init_scale);
  std::vector<std::size_t> sizes{config.input_dim};
  sizes.insert(sizes.end(), config.hidden_sizes.begin(), config.hidden_sizes.end());
  sizes.push_back(config.output_dim);

  Network net;
  for (std::size_t l = 0; l + 1 < sizes.size(); ++l) {
    Layer layer{Matrix(sizes[l + 1], sizes[l]), std::vector<double>(sizes[l + 1], 0.0)};
    if (config.weight_init_scale > 0.0)
      for (double& w : layer.weights.data()) w = uni(rng);
    net.layers.push_back(std::move(layer));
  }
  return net;
}

std::vector<double> forward(const Network& net, std::span<const double> x) {
  check_input(net, x);
  return activations(net, x).back();
}

double sample_loss(const Network& net, std::span<const double> x, std::span<const double> target) {
  return 0.5 * squared_error(forward(net, x), target);
}

Network backprop(const Network& net, std::span<const double> x, std::span<const double> target) {
  check_input(net, x);
  if (target.size() != net.output_dim()) throw std::invalid_argument("target dimension mismatch");
  Network grad = zeros_like(net);
  accumulate_gradient(net, x, target, grad);
  return grad;
}

std::vector<double> one_hot(std::size_t label, std::size_t classes) {
  if (label >= classes) throw std::invalid_argument("label out of range");
  std::vector<double> t(classes, 0.0);
  t[label] = 1.0;
  return t;
}

TrainReport train(Network& net, const Matrix& data, std::span<const std::size_t> labels,
                  const NetworkConfig& config) {
  config.validate();
  if (data.rows() == 0) throw std::invalid_argument("train: empty data");
  if (labels.size() != data.rows()) throw std::invalid_argument("train: label count differs from sample count");
  if (data.cols() != net.input_dim()) throw std::invalid_argument("train: input dimension mismatch");
  const std::size_t classes = net.output_dim();
  std::vector<std::vector<double>> targets;
  for (auto y : labels) targets.push_back(one_hot(y, classes));

  const std::size_t n = data.rows();
  Rng rng(derive_seed(config.seed, std::string_view("shuffle")));
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);

  TrainReport report;
  for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
    double se = 0.0;
    if (config.mode == UpdateMode::stochastic) {
      std::shuffle(order.begin(), order.end(), rng);
      for (auto i : order) {
        se += squared_error(forward(net, data.row(i)), targets[i]);
        Network grad = zeros_like(net);
        accumulate_gradient(net, data.row(i), targets[i], grad);
        apply_step(net, grad, config.learning_rate);
      }
    } else {
      Network grad = zeros_like(net);
      for (std::size_t i = 0; i < n; ++i) {
        se += squared_error(forward(net, data.row(i)), targets[i]);
        accumulate_gradient(net, data.row(i), targets[i], grad);
      }
      apply_step(net, grad, config.learning_rate / static_cast<double>(n));
    }
    report.epoch_mse.push_back(se / static_cast<double>(n * classes));
  }

  const auto predicted = predict(net, data);
  std::size_t correct = 0;
  for (std::size_t i = 0; i < n; ++i) correct += predicted[i] == labels[i];
  report.final_train_accuracy = static_cast<double>(correct) / static_cast<double>(n);
  return report;
}

std::vector<std::size_t> predict(const Network& net, const Matrix& data) {
  std::vector<std::size_t> out(data.rows());
  for (std::size_t i = 0; i < data.rows(); ++i) out[i] = argmax(forward(net, data.row(i)));
  return out;
}

double gradient_check(const Network& net, std::span<const double> x, std::span<const double> target,
                      double epsilon) {
  if (!(epsilon > 0.0)) throw std::invalid_argument("gradient_check: epsilon must be positive");
  const Network analytic = backprop(net, x, target);
  Network probe = net;
  double worst = 0.0;
  auto compare = [&](double& param, double grad) {
    const double saved = param;
    param = saved + epsilon;
    const double up = sample_loss(probe, x, target);
    param = saved - epsilon;
    const double down = sample_loss(probe, x, target);
    param = saved;
    const double numeric = (up - down) / (2.0 * epsilon);
    const double denom = std::max({std::abs(grad), std::abs(numeric), 1e-8});
    worst = std::max(worst, std::abs(grad - numeric) / denom);
  };
  for (std::size_t l = 0; l < probe.layers.size(); ++l) {
    auto w = probe.layers[l].weights.data();
    auto gw = analytic.layers[l].weights.data();
    for (std::size_t i = 0; i < w.size(); ++i) compare(w[i], gw[i]);
    for (std::size_t o = 0; o < probe.layers[l].bias.size(); ++o)
      compare(probe.layers[l].bias[o], analytic.layers[l].bias[o]);
  }
  return worst;
}

}  // namespace roughsel
