#include "fsco/gradient_check.hpp"

#include <cmath>

#include "fsco/loss.hpp"

namespace fsco {

namespace {

double loss_at(Network& net, const Tensor& input, const Tensor& targets) {
  return sse_loss(net.forward(input), targets).loss;
}

}  // namespace

double finite_diff_error(Network& net, const Tensor& input, const Tensor& targets,
                         double h, const GradientSet& analytic) {
  double max_rel = 0.0;
  for (std::size_t li = 0; li < net.layer_count(); ++li) {
    DenseLayer& layer = net.layer(li);
    Tensor* params[2] = {&layer.weights, &layer.biases};
    const Tensor* grads[2] = {&analytic.layers[li].weight_grads,
                              &analytic.layers[li].bias_grads};
    for (int p = 0; p < 2; ++p) {
      Tensor& theta = *params[p];
      for (std::size_t i = 0; i < theta.size(); ++i) {
        const double original = theta[i];
        theta[i] = original + h;
        const double plus = loss_at(net, input, targets);
        theta[i] = original - h;
        const double minus = loss_at(net, input, targets);
        theta[i] = original;
        const double central = (plus - minus) / (2.0 * h);
        const double rel = std::fabs((*grads[p])[i] - central) /
                           std::max(1e-8, std::fabs(central));
        max_rel = std::max(max_rel, rel);
      }
    }
  }
  return max_rel;
}

double finite_diff_check(Network& net, const Tensor& input, const Tensor& targets,
                         double h) {
  if (net.parameter_count() == 0) return 0.0;
  const Tensor output = net.forward(input);
  const LossResult loss = sse_loss(output, targets);
  const GradientSet analytic = net.backward(loss.grad).grads;
  return finite_diff_error(net, input, targets, h, analytic);
}

}  // namespace fsco
