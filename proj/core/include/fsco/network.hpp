#ifndef FSCO_NETWORK_HPP
#define FSCO_NETWORK_HPP

#include <cstddef>
#include <string>
#include <vector>

#include "fsco/rng.hpp"
#include "fsco/tensor.hpp"

namespace fsco {

enum class Activation { kIdentity, kRelu, kLeakyRelu, kTanh, kSigmoid };

/// Slope of the negative branch of leaky relu.
inline constexpr double kLeakySlope = 0.2;

double activate(Activation act, double z);
/// Derivative of the activation evaluated at preactivation z.
double activate_grad(Activation act, double z);

const char* activation_name(Activation act);

/// One fully connected layer: y = act(W x + b), W is [out x in] row-major.
/// forward() populates the input/preactivation caches, backward() consumes
/// them; a second backward without a fresh forward is a state error.
struct DenseLayer {
  Tensor weights;  // [out x in]
  Tensor biases;   // [out]
  Activation activation = Activation::kIdentity;

  Tensor cached_input;    // [batch x in]
  Tensor cached_preact;   // [batch x out]
  bool has_cache = false;

  DenseLayer(std::size_t in, std::size_t out, Activation act);

  std::size_t in_width() const { return weights.cols(); }
  std::size_t out_width() const { return weights.rows(); }
  std::size_t parameter_count() const { return weights.size() + biases.size(); }
};

/// Per-layer gradients, shape-congruent with the owning network.
struct LayerGrads {
  Tensor weight_grads;  // [out x in]
  Tensor bias_grads;    // [out]
};

struct GradientSet {
  std::vector<LayerGrads> layers;

  /// Elementwise in-place accumulation; shapes must agree.
  void add(const GradientSet& other);
  /// Elementwise scaling (used e.g. to invert an update in tests).
  void scale(double factor);
  double max_abs() const;
};

struct BackwardResult {
  GradientSet grads;
  Tensor input_grad;  // d(loss)/d(input), [batch x in]
};

/// Ordered chain of dense layers with exact backpropagation and an
/// externally supplied step size. Plain gradient descent only: the update is
/// W <- W - eta * dW, b <- b - eta * db, so whoever injects eta is the sole
/// step-size authority.
class Network {
 public:
  Network() = default;

  /// widths = {in, h1, ..., out}; activations.size() must be widths.size()-1.
  Network(const std::vector<std::size_t>& widths,
          const std::vector<Activation>& activations);

  /// MLP with one activation for all hidden layers and one for the output.
  static Network mlp(std::size_t in, const std::vector<std::size_t>& hidden,
                     std::size_t out, Activation hidden_act, Activation out_act);

  /// Glorot-uniform weights in +-sqrt(6/(in+out)), zero biases.
  void init(Rng& rng);

  std::size_t layer_count() const { return layers_.size(); }
  std::size_t parameter_count() const;
  std::size_t input_width() const;
  std::size_t output_width() const;

  DenseLayer& layer(std::size_t i) { return layers_[i]; }
  const DenseLayer& layer(std::size_t i) const { return layers_[i]; }

  /// input [batch x in] -> activations [batch x out]; caches per-layer
  /// inputs/preactivations for the matching backward.
  Tensor forward(const Tensor& input);

  /// loss_grad is d(loss)/d(output) of the most recent forward,
  /// [batch x out]. Contributions are accumulated across batch rows, so the
  /// result is the gradient of whatever scalar loss_grad differentiates
  /// (the loss functions in loss.hpp bake the 1/batch of their mean into
  /// the grad they return). Also yields d(loss)/d(input).
  BackwardResult backward(const Tensor& loss_grad);

  /// Zero-filled gradient set congruent with this network.
  GradientSet zero_grads() const;

  /// W <- W - eta * dW, b <- b - eta * db for every layer. eta must be > 0.
  void apply_update(const GradientSet& grads, double eta);

  /// Flattened copy of all parameters, layer by layer (weights then biases).
  std::vector<double> flatten_parameters() const;
  void unflatten_parameters(const std::vector<double>& flat);

  /// Largest absolute parameter difference; shapes must agree.
  static double max_parameter_delta(const Network& a, const Network& b);

 private:
  void check_congruent(const GradientSet& grads) const;

  std::vector<DenseLayer> layers_;
};

}  // namespace fsco

#endif  // FSCO_NETWORK_HPP
