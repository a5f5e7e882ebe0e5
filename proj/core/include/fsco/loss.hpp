#ifndef FSCO_LOSS_HPP
#define FSCO_LOSS_HPP

#include "fsco/tensor.hpp"

namespace fsco {

struct LossResult {
  double loss = 0.0;
  Tensor grad;  // d(loss)/d(predictions), same shape as predictions
};

/// Clamp applied to predictions before the logs in bce_loss.
inline constexpr double kBceEpsilon = 1e-7;

/// Binary cross-entropy, mean over the batch:
///   loss = -mean(t*ln(p) + (1-t)*ln(1-p))
/// predictions [batch x 1] are clamped into [eps, 1-eps]; targets must be
/// exactly 0 or 1. grad carries the 1/batch factor of the mean.
LossResult bce_loss(const Tensor& predictions, const Tensor& targets);

/// Squared error, mean over batch rows, summed over output dims:
///   loss = (1/batch) * sum_b sum_j (y_bj - t_bj)^2
/// Used by the critic regression and as the harness loss of the
/// finite-difference gradient check.
LossResult sse_loss(const Tensor& predictions, const Tensor& targets);

}  // namespace fsco

#endif  // FSCO_LOSS_HPP
