#include "fsco/gan.hpp"

#include <cmath>

#include "fsco/errors.hpp"
#include "fsco/loss.hpp"

namespace fsco {

namespace {

double mean_of(const Tensor& t) {
  double s = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i) s += t[i];
  return s / static_cast<double>(t.size());
}

Tensor constant_targets(std::size_t batch, double value) {
  Tensor t({batch, 1});
  t.fill(value);
  return t;
}

void check_finite_loss(double loss, const char* what) {
  if (!std::isfinite(loss)) {
    throw NumericError(std::string("non-finite ") + what);
  }
}

}  // namespace

GanPair make_gan(std::size_t noise_dim, const std::vector<std::size_t>& g_hidden,
                 std::size_t data_dim, const std::vector<std::size_t>& d_hidden,
                 GanOptions options, Rng& rng) {
  GanPair gan;
  gan.noise_dim = noise_dim;
  gan.options = options;
  gan.generator = Network::mlp(noise_dim, g_hidden, data_dim, Activation::kRelu,
                               Activation::kTanh);
  gan.discriminator = Network::mlp(data_dim, d_hidden, 1, Activation::kLeakyRelu,
                                   Activation::kSigmoid);
  gan.generator.init(rng);
  gan.discriminator.init(rng);
  return gan;
}

Tensor sample_noise(std::size_t batch, std::size_t noise_dim, Rng& rng) {
  if (batch == 0 || noise_dim == 0) {
    throw ArgumentError("sample_noise needs positive batch and noise_dim");
  }
  Tensor z({batch, noise_dim});
  for (std::size_t i = 0; i < z.size(); ++i) z[i] = rng.normal();
  return z;
}

GanStepReport discriminator_step(GanPair& gan, const Tensor& real, double eta_d,
                                 Rng& rng) {
  const Tensor noise = sample_noise(real.rows(), gan.noise_dim, rng);
  return discriminator_step_with_noise(gan, real, noise, eta_d);
}

GanStepReport discriminator_step_with_noise(GanPair& gan, const Tensor& real,
                                            const Tensor& noise, double eta_d) {
  if (!(eta_d > 0.0)) {
    throw ArgumentError("discriminator step size must be positive, got " +
                        std::to_string(eta_d));
  }
  if (real.rows() == 0) throw ArgumentError("real batch must be nonempty");
  const std::size_t batch = real.rows();

  // Fake batch; generator outputs are constants here.
  const Tensor fake = gan.generator.forward(noise);

  const Tensor p_real = gan.discriminator.forward(real);
  const LossResult real_term = bce_loss(p_real, constant_targets(batch, 1.0));
  GradientSet d_grads = gan.discriminator.backward(real_term.grad).grads;

  const Tensor p_fake = gan.discriminator.forward(fake);
  const LossResult fake_term = bce_loss(p_fake, constant_targets(batch, 0.0));
  d_grads.add(gan.discriminator.backward(fake_term.grad).grads);

  const double scale = gan.options.d_loss_halved ? 0.5 : 1.0;
  if (gan.options.d_loss_halved) d_grads.scale(0.5);

  GanStepReport report;
  report.d_loss = scale * (real_term.loss + fake_term.loss);
  report.g_loss = bce_loss(p_fake, constant_targets(batch, 1.0)).loss;
  report.d_real_mean = mean_of(p_real);
  report.d_fake_mean = mean_of(p_fake);
  report.eta_d_used = eta_d;
  check_finite_loss(report.d_loss, "discriminator loss");

  gan.discriminator.apply_update(d_grads, eta_d);
  return report;
}

GanStepReport generator_step(GanPair& gan, std::size_t batch, double eta_g,
                             Rng& rng) {
  const Tensor noise = sample_noise(batch, gan.noise_dim, rng);
  return generator_step_with_noise(gan, noise, eta_g);
}

GanStepReport generator_step_with_noise(GanPair& gan, const Tensor& noise,
                                        double eta_g) {
  if (!(eta_g > 0.0)) {
    throw ArgumentError("generator step size must be positive, got " +
                        std::to_string(eta_g));
  }
  const std::size_t batch = noise.rows();

  const Tensor fake = gan.generator.forward(noise);
  const Tensor p_fake = gan.discriminator.forward(fake);

  LossResult g_obj;
  if (gan.options.g_loss_form == GLossForm::kNonSaturating) {
    g_obj = bce_loss(p_fake, constant_targets(batch, 1.0));
  } else {
    // literal min-max form: minimize -bce(D(G(z)), 0)
    g_obj = bce_loss(p_fake, constant_targets(batch, 0.0));
    g_obj.loss = -g_obj.loss;
    for (std::size_t i = 0; i < g_obj.grad.size(); ++i) g_obj.grad[i] = -g_obj.grad[i];
  }

  // Through D (parameters frozen), then through G.
  const Tensor d_input_grad = gan.discriminator.backward(g_obj.grad).input_grad;
  const GradientSet g_grads = gan.generator.backward(d_input_grad).grads;

  GanStepReport report;
  report.g_loss = g_obj.loss;
  report.d_loss = bce_loss(p_fake, constant_targets(batch, 0.0)).loss;
  report.d_fake_mean = mean_of(p_fake);
  report.d_real_mean = 0.0;  // no real batch in a generator step
  report.eta_g_used = eta_g;
  check_finite_loss(report.g_loss, "generator loss");

  gan.generator.apply_update(g_grads, eta_g);
  return report;
}

GanStepReport evaluate_losses(GanPair& gan, const Tensor& real, Rng& rng) {
  const Tensor noise = sample_noise(real.rows(), gan.noise_dim, rng);
  return evaluate_losses_with_noise(gan, real, noise);
}

GanStepReport evaluate_losses_with_noise(GanPair& gan, const Tensor& real,
                                         const Tensor& noise) {
  const std::size_t batch = real.rows();
  const Tensor fake = gan.generator.forward(noise);
  const Tensor p_fake = gan.discriminator.forward(fake);
  const Tensor p_real = gan.discriminator.forward(real);

  const double real_term = bce_loss(p_real, constant_targets(batch, 1.0)).loss;
  const double fake_term = bce_loss(p_fake, constant_targets(batch, 0.0)).loss;
  const double scale = gan.options.d_loss_halved ? 0.5 : 1.0;

  GanStepReport report;
  if (gan.options.g_loss_form == GLossForm::kNonSaturating) {
    report.g_loss = bce_loss(p_fake, constant_targets(batch, 1.0)).loss;
  } else {
    report.g_loss = -fake_term;
  }
  report.d_loss = scale * (real_term + fake_term);
  report.d_real_mean = mean_of(p_real);
  report.d_fake_mean = mean_of(p_fake);
  check_finite_loss(report.d_loss, "discriminator loss");
  check_finite_loss(report.g_loss, "generator loss");
  return report;
}

}  // namespace fsco
