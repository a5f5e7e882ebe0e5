#include "fsco/data.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

#include "fsco/errors.hpp"

namespace fsco {

namespace {

constexpr std::uint32_t kImagesMagic = 2051;
constexpr std::uint32_t kLabelsMagic = 2049;
constexpr double kPi = 3.141592653589793238462643383279502884;

std::vector<std::uint8_t> read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  return bytes;
}

std::uint32_t read_be32(const std::vector<std::uint8_t>& bytes, std::size_t offset,
                        const std::filesystem::path& path) {
  if (offset + 4 > bytes.size()) {
    throw FormatError(path.string() + ": truncated header at offset " +
                      std::to_string(offset));
  }
  return (std::uint32_t(bytes[offset]) << 24) | (std::uint32_t(bytes[offset + 1]) << 16) |
         (std::uint32_t(bytes[offset + 2]) << 8) | std::uint32_t(bytes[offset + 3]);
}

void write_be32(std::ofstream& out, std::uint32_t v) {
  const char b[4] = {static_cast<char>(v >> 24), static_cast<char>(v >> 16),
                     static_cast<char>(v >> 8), static_cast<char>(v)};
  out.write(b, 4);
}

}  // namespace

std::pair<double, double> MixtureSpec::center(std::size_t k) const {
  const double angle = 2.0 * kPi * static_cast<double>(k) / static_cast<double>(modes);
  return {ring_radius * std::cos(angle), ring_radius * std::sin(angle)};
}

Dataset load_mnist(const std::filesystem::path& images_path,
                   const std::filesystem::path& labels_path) {
  const auto image_bytes = read_file(images_path);
  const std::uint32_t magic = read_be32(image_bytes, 0, images_path);
  if (magic != kImagesMagic) {
    throw FormatError(images_path.string() + ": bad magic " + std::to_string(magic) +
                      " at offset 0, expected " + std::to_string(kImagesMagic));
  }
  const std::uint32_t count = read_be32(image_bytes, 4, images_path);
  const std::uint32_t rows = read_be32(image_bytes, 8, images_path);
  const std::uint32_t cols = read_be32(image_bytes, 12, images_path);
  if (count == 0 || rows == 0 || cols == 0) {
    throw FormatError(images_path.string() + ": zero-sized dimension in header");
  }
  const std::size_t pixel_count =
      std::size_t(count) * std::size_t(rows) * std::size_t(cols);
  if (image_bytes.size() != 16 + pixel_count) {
    throw FormatError(images_path.string() + ": expected " +
                      std::to_string(16 + pixel_count) + " bytes, file has " +
                      std::to_string(image_bytes.size()));
  }

  const auto label_bytes = read_file(labels_path);
  const std::uint32_t label_magic = read_be32(label_bytes, 0, labels_path);
  if (label_magic != kLabelsMagic) {
    throw FormatError(labels_path.string() + ": bad magic " +
                      std::to_string(label_magic) + " at offset 0, expected " +
                      std::to_string(kLabelsMagic));
  }
  const std::uint32_t label_count = read_be32(label_bytes, 4, labels_path);
  if (label_count != count) {
    throw FormatError(labels_path.string() + ": label count " +
                      std::to_string(label_count) + " does not match image count " +
                      std::to_string(count));
  }
  if (label_bytes.size() != 8 + label_count) {
    throw FormatError(labels_path.string() + ": expected " +
                      std::to_string(8 + label_count) + " bytes, file has " +
                      std::to_string(label_bytes.size()));
  }

  Dataset ds;
  ds.data_dim = std::size_t(rows) * std::size_t(cols);
  ds.name = "mnist";
  ds.samples = Tensor({count, ds.data_dim});
  for (std::size_t i = 0; i < pixel_count; ++i) {
    // [0,255] -> [-1,1]
    ds.samples[i] = static_cast<double>(image_bytes[16 + i]) / 127.5 - 1.0;
  }
  return ds;
}

Tensor sample_mixture_points(const MixtureSpec& spec, std::size_t n, Rng& rng) {
  if (n == 0) throw ArgumentError("sample_mixture needs n > 0");
  if (spec.modes < 2) throw ArgumentError("mixture needs at least 2 modes");
  if (!(spec.sigma > 0.0)) throw ArgumentError("mixture sigma must be positive");

  const double inv_scale = 1.0 / spec.scale();
  Tensor points({n, 2});
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t k = rng.uniform_index(spec.modes);
    const auto [cx, cy] = spec.center(k);
    const double x = (cx + spec.sigma * rng.normal()) * inv_scale;
    const double y = (cy + spec.sigma * rng.normal()) * inv_scale;
    points.at(i, 0) = std::clamp(x, -1.0, 1.0);
    points.at(i, 1) = std::clamp(y, -1.0, 1.0);
  }
  return points;
}

Dataset sample_mixture(const MixtureSpec& spec, std::size_t n, Rng& rng) {
  Dataset ds;
  ds.data_dim = 2;
  ds.name = "synthetic";
  ds.samples = sample_mixture_points(spec, n, rng);
  return ds;
}

CoverageReport mode_coverage(const Tensor& points, const MixtureSpec& spec,
                             double radius_mult) {
  if (!(radius_mult > 0.0)) throw ArgumentError("radius_mult must be positive");
  if (points.rank() != 2 || points.cols() != 2) {
    throw DimensionError("mode_coverage expects [n x 2] points, got " +
                         points.shape_str());
  }
  const std::size_t n = points.rows();
  const double inv_scale = 1.0 / spec.scale();
  const double radius = radius_mult * spec.sigma * inv_scale;
  const double radius_sq = radius * radius;

  std::vector<std::size_t> per_mode(spec.modes, 0);
  std::size_t high_quality = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double px = points.at(i, 0);
    const double py = points.at(i, 1);
    bool near_any = false;
    for (std::size_t k = 0; k < spec.modes; ++k) {
      const auto [cx, cy] = spec.center(k);
      const double dx = px - cx * inv_scale;
      const double dy = py - cy * inv_scale;
      if (dx * dx + dy * dy <= radius_sq) {
        ++per_mode[k];
        near_any = true;
      }
    }
    if (near_any) ++high_quality;
  }

  const double min_count =
      static_cast<double>(n) / (10.0 * static_cast<double>(spec.modes));
  CoverageReport report;
  for (std::size_t k = 0; k < spec.modes; ++k) {
    if (static_cast<double>(per_mode[k]) >= min_count) ++report.covered_modes;
  }
  report.high_quality_fraction =
      n == 0 ? 0.0 : static_cast<double>(high_quality) / static_cast<double>(n);
  return report;
}

std::size_t write_image_grid(const Tensor& samples,
                             const std::filesystem::path& path) {
  if (samples.rank() != 2) {
    throw DimensionError("write_image_grid expects [k x side*side] samples");
  }
  const std::size_t k = samples.rows();
  const std::size_t grid = static_cast<std::size_t>(std::llround(std::sqrt(double(k))));
  if (grid * grid != k) {
    throw ArgumentError("grid tile count " + std::to_string(k) +
                        " is not a perfect square");
  }
  const std::size_t dim = samples.cols();
  const std::size_t side = static_cast<std::size_t>(std::llround(std::sqrt(double(dim))));
  if (side * side != dim) {
    throw ArgumentError("sample dimension " + std::to_string(dim) +
                        " is not a perfect square image");
  }

  const std::size_t width = grid * side;
  std::vector<std::uint8_t> pixels(width * width, 0);
  std::size_t clamped = 0;
  for (std::size_t t = 0; t < k; ++t) {
    const std::size_t tr = t / grid;
    const std::size_t tc = t % grid;
    for (std::size_t i = 0; i < side; ++i) {
      for (std::size_t j = 0; j < side; ++j) {
        double v = samples.at(t, i * side + j);
        if (v < -1.0 || v > 1.0) {
          v = std::clamp(v, -1.0, 1.0);
          ++clamped;
        }
        const auto byte =
            static_cast<std::uint8_t>(std::llround((v + 1.0) * 0.5 * 255.0));
        pixels[(tr * side + i) * width + (tc * side + j)] = byte;
      }
    }
  }

  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << "P5\n" << width << " " << width << "\n255\n";
  out.write(reinterpret_cast<const char*>(pixels.data()),
            static_cast<std::streamsize>(pixels.size()));
  if (!out) throw IoError("failed writing " + path.string());
  if (clamped > 0) {
    std::fprintf(stderr, "warning: %zu pixel value(s) outside [-1,1] clamped in %s\n",
                 clamped, path.string().c_str());
  }
  return clamped;
}

void write_idx_images(const std::filesystem::path& path,
                      const std::vector<std::uint8_t>& pixels, std::size_t count,
                      std::size_t rows, std::size_t cols) {
  if (pixels.size() != count * rows * cols) {
    throw ArgumentError("pixel buffer does not match count*rows*cols");
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  write_be32(out, kImagesMagic);
  write_be32(out, static_cast<std::uint32_t>(count));
  write_be32(out, static_cast<std::uint32_t>(rows));
  write_be32(out, static_cast<std::uint32_t>(cols));
  out.write(reinterpret_cast<const char*>(pixels.data()),
            static_cast<std::streamsize>(pixels.size()));
  if (!out) throw IoError("failed writing " + path.string());
}

void write_idx_labels(const std::filesystem::path& path,
                      const std::vector<std::uint8_t>& labels) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  write_be32(out, kLabelsMagic);
  write_be32(out, static_cast<std::uint32_t>(labels.size()));
  out.write(reinterpret_cast<const char*>(labels.data()),
            static_cast<std::streamsize>(labels.size()));
  if (!out) throw IoError("failed writing " + path.string());
}

}  // namespace fsco
