#pragma once

#include <cstdint>
#include <random>

namespace regimecast {

// Seeded draws with fixed algorithms on top of mt19937_64, so identical seeds
// give bit-identical streams on every platform (std::normal_distribution and
// friends are implementation-defined).
struct Rng {
  std::mt19937_64 engine;

  explicit Rng(std::uint64_t seed) : engine(seed) {}

  double uniform();            // open interval (0,1)
  double normal();             // polar method, second variate discarded
  double gamma(double shape);  // unit scale, Marsaglia-Tsang
  double chi_squared(double df);
};

}  // namespace regimecast
