#pragma once

// Seeded sampling with a platform-independent double mapping, so reports
// replay byte for byte.

#include "finsler/lagrangian.hpp"
#include "finsler/types.hpp"

#include <cstdint>
#include <random>

namespace finsler {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : seed_(seed), gen_(seed) {}

  std::uint64_t seed() const { return seed_; }
  /// Uniform in [0, 1).
  double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }
  double uniform(double a, double b) { return a + (b - a) * uniform(); }
  /// Standard normal by Box-Muller.
  double normal();
  Vec normal_vector(int n);

 private:
  std::uint64_t seed_;
  std::mt19937_64 gen_;
};

Vec sample_point(const Region& region, Rng& rng);

/// Random vector in the open cone at x, obtained by perturbing cone_ref(x).
/// Throws ConeViolation if no admissible sample is found.
Vec sample_admissible(const Lagrangian& L, const Vec& x, Rng& rng, double spread = 0.5);

}  // namespace finsler
