#include "finsler/random.hpp"

#include <cmath>
#include <numbers>

namespace finsler {

double Rng::normal() {
  double u1 = uniform();
  while (u1 <= 0.0) u1 = uniform();
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

Vec Rng::normal_vector(int n) {
  Vec v(n);
  for (int i = 0; i < n; ++i) v(i) = normal();
  return v;
}

Vec sample_point(const Region& region, Rng& rng) {
  Vec x(static_cast<Eigen::Index>(region.bounds.size()));
  for (std::size_t i = 0; i < region.bounds.size(); ++i) {
    x(static_cast<Eigen::Index>(i)) = rng.uniform(region.bounds[i].first, region.bounds[i].second);
  }
  return x;
}

Vec sample_admissible(const Lagrangian& L, const Vec& x, Rng& rng, double spread) {
  const Vec c = L.cone_ref(x);
  const Vec base = c / c.norm();
  double r = spread;
  for (int attempt = 0; attempt < 200; ++attempt) {
    const Vec v = rng.uniform(0.5, 2.0) * (base + r * rng.uniform() * rng.normal_vector(L.dim()));
    if (v.norm() > 0.0 && is_admissible(L, x, v).inside) return v;
    if (attempt % 20 == 19) r *= 0.5;
  }
  throw ConeViolation("no admissible sample found near cone_ref of " + L.name());
}

}  // namespace finsler
