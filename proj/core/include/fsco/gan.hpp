#ifndef FSCO_GAN_HPP
#define FSCO_GAN_HPP

#include <cstddef>
#include <vector>

#include "fsco/network.hpp"
#include "fsco/rng.hpp"
#include "fsco/tensor.hpp"

namespace fsco {

/// Generator objective variant. kNonSaturating trains G to push D(G(z))
/// toward 1; kMinMax uses the literal opposite of the discriminator's fake
/// term. Non-saturating is the default; the literal form exists for
/// comparison runs.
enum class GLossForm { kNonSaturating, kMinMax };

struct GanOptions {
  /// When true, Dloss is the mean of the real and fake terms instead of
  /// their sum.
  bool d_loss_halved = false;
  GLossForm g_loss_form = GLossForm::kNonSaturating;
};

/// Generator (noise -> data, tanh output) and discriminator (data -> score
/// in (0,1), sigmoid output). Real data is expected scaled to [-1,1] to
/// match the generator's range.
struct GanPair {
  Network generator;
  Network discriminator;
  std::size_t noise_dim = 0;
  GanOptions options;
};

/// Dense G/D pair with Glorot init drawn from `rng`.
GanPair make_gan(std::size_t noise_dim, const std::vector<std::size_t>& g_hidden,
                 std::size_t data_dim, const std::vector<std::size_t>& d_hidden,
                 GanOptions options, Rng& rng);

/// Per-step observation record. eta_*_used echo exactly the injected step
/// sizes of the operation that produced the report (0.0 when the operation
/// applied no such update).
struct GanStepReport {
  double g_loss = 0.0;
  double d_loss = 0.0;
  double d_real_mean = 0.0;
  double d_fake_mean = 0.0;
  double eta_d_used = 0.0;
  double eta_g_used = 0.0;
};

/// i.i.d. standard normal noise [batch x noise_dim] from the seeded source.
Tensor sample_noise(std::size_t batch, std::size_t noise_dim, Rng& rng);

/// One discriminator update at step size eta_d:
///   Dloss = bce(D(real), 1) + bce(D(G(z)), 0)
/// on a fresh noise batch of real.rows() rows; generator outputs are treated
/// as constants, generator parameters untouched. The report's g_loss is the
/// non-saturating generator objective evaluated on the same fake scores
/// (pre-update), which costs nothing extra.
GanStepReport discriminator_step(GanPair& gan, const Tensor& real, double eta_d,
                                 Rng& rng);

/// Deterministic variant taking the noise batch explicitly.
GanStepReport discriminator_step_with_noise(GanPair& gan, const Tensor& real,
                                            const Tensor& noise, double eta_d);

/// One generator update at step size eta_g on a fresh noise batch; gradients
/// flow through the discriminator into the generator, discriminator
/// parameters untouched.
GanStepReport generator_step(GanPair& gan, std::size_t batch, double eta_g,
                             Rng& rng);

GanStepReport generator_step_with_noise(GanPair& gan, const Tensor& noise,
                                        double eta_g);

/// Read-only loss evaluation: computes Gloss, Dloss and the mean
/// discriminator scores on `real` and one fresh fake batch, updating
/// nothing.
GanStepReport evaluate_losses(GanPair& gan, const Tensor& real, Rng& rng);

GanStepReport evaluate_losses_with_noise(GanPair& gan, const Tensor& real,
                                         const Tensor& noise);

}  // namespace fsco

#endif  // FSCO_GAN_HPP
