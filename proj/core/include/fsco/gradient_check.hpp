#ifndef FSCO_GRADIENT_CHECK_HPP
#define FSCO_GRADIENT_CHECK_HPP

#include "fsco/network.hpp"
#include "fsco/tensor.hpp"

namespace fsco {

/// Max over all parameters of
///   |analytic - central_difference| / max(1e-8, |central_difference|)
/// for the sse_loss of net(input) against targets, where `analytic` is the
/// given gradient set and the central difference uses step h. Intended for
/// small networks (<= ~5000 parameters).
double finite_diff_error(Network& net, const Tensor& input, const Tensor& targets,
                         double h, const GradientSet& analytic);

/// Same, with the analytic gradients computed by the network's own backward.
double finite_diff_check(Network& net, const Tensor& input, const Tensor& targets,
                         double h);

}  // namespace fsco

#endif  // FSCO_GRADIENT_CHECK_HPP
