#ifndef FSCO_RNG_HPP
#define FSCO_RNG_HPP

#include <cmath>
#include <cstdint>
#include <random>

namespace fsco {

/// Seeded random source with self-contained draw algorithms so that a given
/// seed yields the same stream on every platform and standard library.
/// std::normal_distribution and friends are implementation-defined, which
/// would break the byte-identical telemetry contract across toolchains.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Independent stream: hashes (master, stream_id) into a fresh seed.
  static Rng derive(std::uint64_t master_seed, std::uint64_t stream_id) {
    std::uint64_t z = master_seed + 0x9e3779b97f4a7c15ULL * (stream_id + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return Rng(z ^ (z >> 31));
  }

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform in [0, 1), 53-bit resolution.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Uniform in [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Uniform integer in [0, n). Modulo bias is ~n/2^64, irrelevant here;
  /// what matters is that the draw sequence is fully determined by the seed.
  std::size_t uniform_index(std::size_t n) {
    return static_cast<std::size_t>(engine_() % n);
  }

  /// Standard normal via Box-Muller; the spare draw is cached.
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1 = uniform();
    double u2 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * kPi * u2;
    spare_ = r * std::sin(theta);
    has_spare_ = true;
    return r * std::cos(theta);
  }

 private:
  static constexpr double kPi = 3.141592653589793238462643383279502884;
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

/// Stream ids used to derive the per-component generators of a run from one
/// master seed. Keeping the streams separate is what lets a constant-action
/// run and the standalone fixed-rate loop consume identical GAN draws.
namespace streams {
inline constexpr std::uint64_t kGanInit = 1;
inline constexpr std::uint64_t kGanNoise = 2;
inline constexpr std::uint64_t kData = 3;
inline constexpr std::uint64_t kAgentInit = 4;
inline constexpr std::uint64_t kAgentExplore = 5;
inline constexpr std::uint64_t kReplay = 6;
inline constexpr std::uint64_t kSamples = 7;
}  // namespace streams

}  // namespace fsco

#endif  // FSCO_RNG_HPP
