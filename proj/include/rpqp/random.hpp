#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace rpqp {

/// Seedable generator used everywhere randomness is needed.
///
/// Engine: std::mt19937_64 (its output sequence is fixed by the standard).
/// Uniforms take the top 53 bits of one engine draw. Normals use the
/// Box-Muller transform on two uniforms and hand out the cosine branch
/// first, then the cached sine branch. std::normal_distribution is not
/// used because its algorithm is implementation-defined.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform on [0, 1).
  double uniform();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  double normal();
  double normal(double mean, double stddev) { return mean + stddev * normal(); }

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

std::uint64_t splitmix64(std::uint64_t x);

/// Order-sensitive 64-bit hash of a list of words (splitmix64 chain).
/// Used to derive per-cell / per-start seeds from a master seed.
std::uint64_t hash64(std::initializer_list<std::uint64_t> words);

std::uint64_t double_bits(double v);

}  // namespace rpqp
