#ifndef FSCO_DATA_HPP
#define FSCO_DATA_HPP

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "fsco/rng.hpp"
#include "fsco/tensor.hpp"

namespace fsco {

/// Training samples scaled into [-1,1] (the generator's tanh range).
struct Dataset {
  Tensor samples;  // [N x data_dim]
  std::size_t data_dim = 0;
  std::string name;

  std::size_t size() const { return samples.rows(); }
};

/// K Gaussian modes placed uniformly on a ring. The sampled points are
/// scaled into [-1,1] by dividing by (ring_radius + 3*sigma).
struct MixtureSpec {
  std::size_t modes = 8;
  double sigma = 0.02;
  double ring_radius = 2.0;

  double scale() const { return ring_radius + 3.0 * sigma; }
  /// Center of mode k in the original (unscaled) plane.
  std::pair<double, double> center(std::size_t k) const;
};

/// Loads an IDX image/label pair (big-endian, magic 2051/2049). Returns an
/// [N x rows*cols] tensor with pixels mapped from [0,255] to [-1,1]. The
/// label file is read only to validate the record count.
Dataset load_mnist(const std::filesystem::path& images_path,
                   const std::filesystem::path& labels_path);

/// n mixture points, mode chosen uniformly, Gaussian jitter, scaled into
/// [-1,1] (clamped; the 3-sigma margin makes clamping vanishingly rare).
Dataset sample_mixture(const MixtureSpec& spec, std::size_t n, Rng& rng);

/// Points-only variant used by the training loop.
Tensor sample_mixture_points(const MixtureSpec& spec, std::size_t n, Rng& rng);

struct CoverageReport {
  int covered_modes = 0;
  double high_quality_fraction = 0.0;
};

/// Mode-collapse measurement over points in the scaled [-1,1] plane: a mode
/// counts as covered when at least n/(10K) points fall within
/// radius_mult*sigma of its center; high_quality_fraction is the fraction of
/// points within radius_mult*sigma of any center.
CoverageReport mode_coverage(const Tensor& points, const MixtureSpec& spec,
                             double radius_mult);

/// Writes a square tile grid of k samples (k a perfect square, each sample a
/// side*side image in [-1,1]) as a binary PGM ("P5", maxval 255). Values
/// outside [-1,1] are clamped; returns how many were clamped.
std::size_t write_image_grid(const Tensor& samples,
                             const std::filesystem::path& path);

/// Helpers for producing IDX files (test fixtures, dataset stand-ins).
void write_idx_images(const std::filesystem::path& path,
                      const std::vector<std::uint8_t>& pixels, std::size_t count,
                      std::size_t rows, std::size_t cols);
void write_idx_labels(const std::filesystem::path& path,
                      const std::vector<std::uint8_t>& labels);

}  // namespace fsco

#endif  // FSCO_DATA_HPP
