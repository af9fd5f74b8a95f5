#pragma once

#include <cstdint>
#include <random>

namespace ctr {

// Named stream tags so that independent consumers of one seed never share
// a substream.
enum class Stream : std::uint64_t {
  Dirichlet = 1,
  Rollout = 2,
  RandomDefense = 3,
  Synthetic = 4,
};

// Seeded 64-bit generator. Conversions to real variates are done here
// rather than through <random> distributions, whose output is
// implementation-defined; results are therefore identical across
// standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // Independent generator for item `index` of `stream` under `seed`.
  // Depends only on its arguments, never on how many items exist or which
  // worker draws them.
  static Rng substream(std::uint64_t seed, Stream stream, std::uint64_t index);

  std::uint64_t next() { return engine_(); }
  // Uniform on [0, 1).
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
  // Uniform on (0, 1).
  double uniform_open() {
    return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53;
  }
  // Uniform integer in [0, n), unbiased.
  std::uint64_t below(std::uint64_t n);
  double exponential(double rate);
  double normal();
  // Gamma(shape, 1): Marsaglia-Tsang squeeze for shape >= 1, with the
  // U^(1/shape) boost for shape < 1.
  double gamma(double shape);

 private:
  std::mt19937_64 engine_;
};

std::uint64_t splitmix64(std::uint64_t x);

}  // namespace ctr
