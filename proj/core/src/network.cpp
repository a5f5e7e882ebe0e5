#include "fsco/network.hpp"

#include <cmath>
#include <cstring>

#include "fsco/errors.hpp"

namespace fsco {

double activate(Activation act, double z) {
  switch (act) {
    case Activation::kIdentity: return z;
    case Activation::kRelu: return z > 0.0 ? z : 0.0;
    case Activation::kLeakyRelu: return z > 0.0 ? z : kLeakySlope * z;
    case Activation::kTanh: return std::tanh(z);
    case Activation::kSigmoid: return 1.0 / (1.0 + std::exp(-z));
  }
  return z;
}

double activate_grad(Activation act, double z) {
  switch (act) {
    case Activation::kIdentity: return 1.0;
    case Activation::kRelu: return z > 0.0 ? 1.0 : 0.0;
    case Activation::kLeakyRelu: return z > 0.0 ? 1.0 : kLeakySlope;
    case Activation::kTanh: {
      const double t = std::tanh(z);
      return 1.0 - t * t;
    }
    case Activation::kSigmoid: {
      const double s = 1.0 / (1.0 + std::exp(-z));
      return s * (1.0 - s);
    }
  }
  return 1.0;
}

const char* activation_name(Activation act) {
  switch (act) {
    case Activation::kIdentity: return "identity";
    case Activation::kRelu: return "relu";
    case Activation::kLeakyRelu: return "leaky_relu";
    case Activation::kTanh: return "tanh";
    case Activation::kSigmoid: return "sigmoid";
  }
  return "?";
}

DenseLayer::DenseLayer(std::size_t in, std::size_t out, Activation act)
    : weights(Tensor::matrix(out, in)),
      biases(Tensor::vector(out)),
      activation(act) {}

void GradientSet::add(const GradientSet& other) {
  if (layers.size() != other.layers.size()) {
    throw DimensionError("gradient sets have different layer counts");
  }
  for (std::size_t l = 0; l < layers.size(); ++l) {
    if (!layers[l].weight_grads.same_shape(other.layers[l].weight_grads) ||
        !layers[l].bias_grads.same_shape(other.layers[l].bias_grads)) {
      throw DimensionError("gradient sets are not shape-congruent at layer " +
                           std::to_string(l));
    }
    double* w = layers[l].weight_grads.data();
    const double* ow = other.layers[l].weight_grads.data();
    for (std::size_t i = 0; i < layers[l].weight_grads.size(); ++i) w[i] += ow[i];
    double* b = layers[l].bias_grads.data();
    const double* ob = other.layers[l].bias_grads.data();
    for (std::size_t i = 0; i < layers[l].bias_grads.size(); ++i) b[i] += ob[i];
  }
}

void GradientSet::scale(double factor) {
  for (auto& lg : layers) {
    for (std::size_t i = 0; i < lg.weight_grads.size(); ++i) lg.weight_grads[i] *= factor;
    for (std::size_t i = 0; i < lg.bias_grads.size(); ++i) lg.bias_grads[i] *= factor;
  }
}

double GradientSet::max_abs() const {
  double m = 0.0;
  for (const auto& lg : layers) {
    for (std::size_t i = 0; i < lg.weight_grads.size(); ++i)
      m = std::max(m, std::fabs(lg.weight_grads[i]));
    for (std::size_t i = 0; i < lg.bias_grads.size(); ++i)
      m = std::max(m, std::fabs(lg.bias_grads[i]));
  }
  return m;
}

Network::Network(const std::vector<std::size_t>& widths,
                 const std::vector<Activation>& activations) {
  if (widths.size() < 2) {
    throw DimensionError("network needs at least an input and an output width");
  }
  if (activations.size() != widths.size() - 1) {
    throw DimensionError("expected one activation per layer");
  }
  layers_.reserve(activations.size());
  for (std::size_t l = 0; l + 1 < widths.size(); ++l) {
    layers_.emplace_back(widths[l], widths[l + 1], activations[l]);
  }
}

Network Network::mlp(std::size_t in, const std::vector<std::size_t>& hidden,
                     std::size_t out, Activation hidden_act, Activation out_act) {
  std::vector<std::size_t> widths;
  widths.push_back(in);
  widths.insert(widths.end(), hidden.begin(), hidden.end());
  widths.push_back(out);
  std::vector<Activation> acts(hidden.size(), hidden_act);
  acts.push_back(out_act);
  return Network(widths, acts);
}

void Network::init(Rng& rng) {
  for (auto& layer : layers_) {
    const double bound =
        std::sqrt(6.0 / static_cast<double>(layer.in_width() + layer.out_width()));
    for (std::size_t i = 0; i < layer.weights.size(); ++i) {
      layer.weights[i] = rng.uniform(-bound, bound);
    }
    layer.biases.fill(0.0);
    layer.has_cache = false;
  }
}

std::size_t Network::parameter_count() const {
  std::size_t n = 0;
  for (const auto& l : layers_) n += l.parameter_count();
  return n;
}

std::size_t Network::input_width() const {
  if (layers_.empty()) throw StateError("empty network has no input width");
  return layers_.front().in_width();
}

std::size_t Network::output_width() const {
  if (layers_.empty()) throw StateError("empty network has no output width");
  return layers_.back().out_width();
}

Tensor Network::forward(const Tensor& input) {
  if (input.rank() != 2) {
    throw DimensionError("forward expects a [batch x in] tensor, got " +
                         input.shape_str());
  }
  if (layers_.empty()) return input;  // degenerate zero-parameter network
  if (input.cols() != input_width()) {
    throw DimensionError("forward input width " + std::to_string(input.cols()) +
                         " does not match first-layer width " +
                         std::to_string(input_width()));
  }

  Tensor current = input;
  for (auto& layer : layers_) {
    const std::size_t batch = current.rows();
    const std::size_t in = layer.in_width();
    const std::size_t out = layer.out_width();

    layer.cached_input = current;
    Tensor preact = Tensor::matrix(batch, out);
    for (std::size_t b = 0; b < batch; ++b) {
      const double* x = current.row(b);
      double* z = preact.row(b);
      for (std::size_t o = 0; o < out; ++o) {
        const double* w = layer.weights.row(o);
        double acc = layer.biases[o];
        for (std::size_t i = 0; i < in; ++i) acc += w[i] * x[i];
        z[o] = acc;
      }
    }
    layer.cached_preact = preact;
    layer.has_cache = true;

    Tensor activated = Tensor::matrix(batch, out);
    for (std::size_t i = 0; i < preact.size(); ++i) {
      activated[i] = activate(layer.activation, preact[i]);
    }
    current = std::move(activated);
  }
  require_finite(current, "forward output");
  return current;
}

BackwardResult Network::backward(const Tensor& loss_grad) {
  if (layers_.empty()) {
    // identity: gradient passes straight through
    return BackwardResult{GradientSet{}, loss_grad};
  }
  if (loss_grad.rank() != 2 || loss_grad.cols() != output_width()) {
    throw DimensionError("loss gradient shape " + loss_grad.shape_str() +
                         " does not match network output width " +
                         std::to_string(output_width()));
  }

  BackwardResult result;
  result.grads.layers.resize(layers_.size());

  Tensor delta = loss_grad;  // d(loss)/d(activation) of the current layer
  for (std::size_t li = layers_.size(); li-- > 0;) {
    DenseLayer& layer = layers_[li];
    if (!layer.has_cache) {
      throw StateError("backward called without a matching forward at layer " +
                       std::to_string(li));
    }
    if (layer.cached_preact.rows() != delta.rows()) {
      throw DimensionError("loss gradient batch " + std::to_string(delta.rows()) +
                           " does not match cached forward batch " +
                           std::to_string(layer.cached_preact.rows()));
    }
    const std::size_t batch = delta.rows();
    const std::size_t in = layer.in_width();
    const std::size_t out = layer.out_width();

    // d(loss)/d(preactivation)
    Tensor dz = Tensor::matrix(batch, out);
    for (std::size_t i = 0; i < dz.size(); ++i) {
      dz[i] = delta[i] * activate_grad(layer.activation, layer.cached_preact[i]);
    }

    LayerGrads lg{Tensor::matrix(out, in), Tensor::vector(out)};
    Tensor dx = Tensor::matrix(batch, in);
    for (std::size_t b = 0; b < batch; ++b) {
      const double* x = layer.cached_input.row(b);
      const double* dzb = dz.row(b);
      double* dxb = dx.row(b);
      for (std::size_t o = 0; o < out; ++o) {
        const double g = dzb[o];
        if (g == 0.0) continue;
        const double* w = layer.weights.row(o);
        double* dw = lg.weight_grads.row(o);
        for (std::size_t i = 0; i < in; ++i) {
          dw[i] += g * x[i];
          dxb[i] += g * w[i];
        }
        lg.bias_grads[o] += g;
      }
    }

    result.grads.layers[li] = std::move(lg);
    delta = std::move(dx);
    layer.has_cache = false;  // cache is consumed by exactly one backward
  }

  result.input_grad = std::move(delta);
  require_finite(result.input_grad, "backward input gradient");
  return result;
}

GradientSet Network::zero_grads() const {
  GradientSet gs;
  gs.layers.reserve(layers_.size());
  for (const auto& l : layers_) {
    gs.layers.push_back(
        LayerGrads{Tensor::matrix(l.out_width(), l.in_width()), Tensor::vector(l.out_width())});
  }
  return gs;
}

void Network::check_congruent(const GradientSet& grads) const {
  if (grads.layers.size() != layers_.size()) {
    throw DimensionError("gradient set has " + std::to_string(grads.layers.size()) +
                         " layers, network has " + std::to_string(layers_.size()));
  }
  for (std::size_t l = 0; l < layers_.size(); ++l) {
    if (!grads.layers[l].weight_grads.same_shape(layers_[l].weights) ||
        !grads.layers[l].bias_grads.same_shape(layers_[l].biases)) {
      throw DimensionError("gradient set is not shape-congruent at layer " +
                           std::to_string(l));
    }
  }
}

void Network::apply_update(const GradientSet& grads, double eta) {
  if (!(eta > 0.0)) {
    throw ArgumentError("step size must be strictly positive, got " +
                        std::to_string(eta));
  }
  check_congruent(grads);
  for (std::size_t l = 0; l < layers_.size(); ++l) {
    double* w = layers_[l].weights.data();
    const double* dw = grads.layers[l].weight_grads.data();
    for (std::size_t i = 0; i < layers_[l].weights.size(); ++i) w[i] -= eta * dw[i];
    double* b = layers_[l].biases.data();
    const double* db = grads.layers[l].bias_grads.data();
    for (std::size_t i = 0; i < layers_[l].biases.size(); ++i) b[i] -= eta * db[i];
    require_finite(layers_[l].weights, "updated weights");
    require_finite(layers_[l].biases, "updated biases");
  }
}

std::vector<double> Network::flatten_parameters() const {
  std::vector<double> flat;
  flat.reserve(parameter_count());
  for (const auto& l : layers_) {
    flat.insert(flat.end(), l.weights.data(), l.weights.data() + l.weights.size());
    flat.insert(flat.end(), l.biases.data(), l.biases.data() + l.biases.size());
  }
  return flat;
}

void Network::unflatten_parameters(const std::vector<double>& flat) {
  if (flat.size() != parameter_count()) {
    throw DimensionError("flat parameter vector has wrong length");
  }
  std::size_t k = 0;
  for (auto& l : layers_) {
    std::memcpy(l.weights.data(), flat.data() + k, l.weights.size() * sizeof(double));
    k += l.weights.size();
    std::memcpy(l.biases.data(), flat.data() + k, l.biases.size() * sizeof(double));
    k += l.biases.size();
  }
}

double Network::max_parameter_delta(const Network& a, const Network& b) {
  if (a.layer_count() != b.layer_count()) {
    throw DimensionError("networks have different layer counts");
  }
  double m = 0.0;
  for (std::size_t l = 0; l < a.layer_count(); ++l) {
    const DenseLayer& la = a.layer(l);
    const DenseLayer& lb = b.layer(l);
    if (!la.weights.same_shape(lb.weights) || !la.biases.same_shape(lb.biases)) {
      throw DimensionError("networks are not shape-congruent at layer " +
                           std::to_string(l));
    }
    for (std::size_t i = 0; i < la.weights.size(); ++i)
      m = std::max(m, std::fabs(la.weights[i] - lb.weights[i]));
    for (std::size_t i = 0; i < la.biases.size(); ++i)
      m = std::max(m, std::fabs(la.biases[i] - lb.biases[i]));
  }
  return m;
}

}  // namespace fsco
