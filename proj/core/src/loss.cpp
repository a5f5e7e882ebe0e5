#include "fsco/loss.hpp"

#include <algorithm>
#include <cmath>

#include "fsco/errors.hpp"

namespace fsco {

LossResult bce_loss(const Tensor& predictions, const Tensor& targets) {
  if (predictions.rank() != 2 || predictions.cols() != 1) {
    throw DimensionError("bce_loss expects predictions of shape [batch x 1], got " +
                         predictions.shape_str());
  }
  if (!predictions.same_shape(targets)) {
    throw DimensionError("bce_loss predictions " + predictions.shape_str() +
                         " and targets " + targets.shape_str() + " differ");
  }
  const std::size_t batch = predictions.rows();
  const double inv_batch = 1.0 / static_cast<double>(batch);

  LossResult result;
  result.grad = Tensor({batch, 1});
  double total = 0.0;
  for (std::size_t i = 0; i < batch; ++i) {
    const double t = targets[i];
    if (t != 0.0 && t != 1.0) {
      throw ArgumentError("bce_loss target at row " + std::to_string(i) +
                          " must be 0 or 1, got " + std::to_string(t));
    }
    const double p = std::clamp(predictions[i], kBceEpsilon, 1.0 - kBceEpsilon);
    total += t * std::log(p) + (1.0 - t) * std::log(1.0 - p);
    result.grad[i] = inv_batch * (-t / p + (1.0 - t) / (1.0 - p));
  }
  result.loss = -total * inv_batch;
  return result;
}

LossResult sse_loss(const Tensor& predictions, const Tensor& targets) {
  if (!predictions.same_shape(targets)) {
    throw DimensionError("sse_loss predictions " + predictions.shape_str() +
                         " and targets " + targets.shape_str() + " differ");
  }
  if (predictions.rank() != 2) {
    throw DimensionError("sse_loss expects rank-2 tensors, got " +
                         predictions.shape_str());
  }
  const double inv_batch = 1.0 / static_cast<double>(predictions.rows());

  LossResult result;
  result.grad = Tensor(predictions.shape());
  double total = 0.0;
  for (std::size_t i = 0; i < predictions.size(); ++i) {
    const double d = predictions[i] - targets[i];
    total += d * d;
    result.grad[i] = 2.0 * d * inv_batch;
  }
  result.loss = total * inv_batch;
  return result;
}

}  // namespace fsco
