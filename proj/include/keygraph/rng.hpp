#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace keygraph {

// Seeded random stream. Everything stochastic in the library draws from one
// of these, so a run is reproducible from its seed. Distributions are
// hand-rolled on top of the raw generator output so the byte stream does not
// depend on the standard library's distribution implementations.
struct Rng {
  std::mt19937_64 gen;

  explicit Rng(std::uint64_t seed) : gen(seed) {}

  // uniform in [0, 1)
  double uniform() { return static_cast<double>(gen() >> 11) * 0x1.0p-53; }

  // uniform integer in [0, n), n > 0
  std::uint64_t uniform_int(std::uint64_t n) { return gen() % n; }

  // Box-Muller
  double gaussian(double mean, double stddev) {
    double u1 = 1.0 - uniform();  // (0, 1]
    double u2 = uniform();
    double z = std::sqrt(-2.0 * std::log(u1)) *
               std::cos(2.0 * std::numbers::pi * u2);
    return mean + stddev * z;
  }

  // Draw a seed for an independent child stream.
  std::uint64_t fork_seed() { return gen(); }
};

// splitmix64 finalizer; used to derive per-stage seeds from the run seed.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (salt + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace keygraph
