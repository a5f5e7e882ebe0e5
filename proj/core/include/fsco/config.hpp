#ifndef FSCO_CONFIG_HPP
#define FSCO_CONFIG_HPP

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "fsco/gan.hpp"

namespace fsco {

/// Full experiment configuration. Defaults come from the named preset
/// ("mnist28" or "synthetic"); any key in the config file overrides the
/// preset value.
struct FscoConfig {
  std::string preset;   // mnist28 | synthetic
  std::string dataset;  // mnist | synthetic

  // GAN step sizes and shape
  double eta_g = 0.0002;
  double eta_d_base = 0.002;
  double u_floor = 0.001;  // lower bound on the action multiplier
  std::size_t batch = 128;
  std::size_t noise_dim = 100;
  std::vector<std::size_t> g_hidden = {256};
  std::vector<std::size_t> d_hidden = {256};
  bool d_loss_halved = false;
  GLossForm g_loss_form = GLossForm::kNonSaturating;

  // Controller
  long long total_cycles = 0;
  std::size_t ema_window = 10;

  // Agent
  double gamma = 0.99;
  double tau = 0.005;
  double actor_lr = 0.0001;
  double critic_lr = 0.0001;
  double noise_sigma = 0.1;
  std::size_t buffer_capacity = 10000;
  std::size_t ddpg_batch = 64;
  std::vector<std::size_t> actor_hidden = {64, 64};
  std::vector<std::size_t> critic_hidden = {64, 64};

  // Data
  std::string mnist_images;  // empty -> $FSCO_DATA_DIR/train-images-idx3-ubyte
  std::string mnist_labels;  // empty -> $FSCO_DATA_DIR/train-labels-idx1-ubyte
  std::size_t mixture_modes = 8;
  double mixture_radius = 2.0;
  double mixture_sigma = 0.02;

  // Run
  std::uint64_t seed = 0;
  long long sample_every = 0;   // 0: emit samples only at the end of the run
  std::size_t sample_count = 16;  // image grid tiles / coverage sample size

  std::size_t data_dim() const { return dataset == "mnist" ? 784 : 2; }

  bool operator==(const FscoConfig&) const = default;
};

/// Fills every field from the named preset. Throws ConfigError for an
/// unknown preset name.
FscoConfig preset_config(const std::string& name);

/// Parses the line-oriented `key = value` format ('#' comments, blank lines
/// ignored). A `preset` key is required; missing keys fall back to the
/// preset's values; unknown keys and out-of-range values are ConfigErrors
/// naming the key and line.
FscoConfig parse_config_text(const std::string& text, const std::string& source);

FscoConfig parse_config(const std::filesystem::path& path);

/// Complete `key = value` snapshot; reparsing it yields an identical config
/// (floats serialized with 17 significant digits).
std::string config_snapshot(const FscoConfig& cfg);

/// Range and consistency checks shared by parsing and programmatic setup.
void validate_config(const FscoConfig& cfg);

}  // namespace fsco

#endif  // FSCO_CONFIG_HPP
