#include "finsler/jets.hpp"

#include <cmath>
#include <string>

namespace finsler {

namespace {

template <int K>
double mixed_impl(const Lagrangian& L, const Vec& x, const Vec& v, std::span<const Vec> xdirs,
                  std::span<const Vec> vdirs) {
  using D = HyperDual<K>;
  const int n = L.dim();
  std::vector<D> xs(static_cast<std::size_t>(n));
  std::vector<D> vs(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    xs[i] = D(x(i));
    vs[i] = D(v(i));
  }
  int slot = 0;
  for (const Vec& d : xdirs) {
    for (int i = 0; i < n; ++i) xs[i][std::size_t{1} << slot] = d(i);
    ++slot;
  }
  for (const Vec& d : vdirs) {
    for (int i = 0; i < n; ++i) vs[i][std::size_t{1} << slot] = d(i);
    ++slot;
  }
  const D r = L.eval<D>(std::span<const D>(xs), std::span<const D>(vs));
  return r.top();
}

void check_finite(double d, const Lagrangian& L) {
  if (!std::isfinite(d)) throw EvaluationError("non-finite derivative of " + L.name());
}

}  // namespace

double mixed_derivative(const Lagrangian& L, const Vec& x, const Vec& v, std::span<const Vec> xdirs,
                        std::span<const Vec> vdirs) {
  const std::size_t order = xdirs.size() + vdirs.size();
  double r = 0.0;
  switch (order) {
    case 0: r = L(x, v); break;
    case 1: r = mixed_impl<1>(L, x, v, xdirs, vdirs); break;
    case 2: r = mixed_impl<2>(L, x, v, xdirs, vdirs); break;
    case 3: r = mixed_impl<3>(L, x, v, xdirs, vdirs); break;
    case 4: r = mixed_impl<4>(L, x, v, xdirs, vdirs); break;
    default: throw DomainError("mixed derivative order above 4");
  }
  check_finite(r, L);
  return r;
}

Vec fiber_gradient(const Lagrangian& L, const Vec& x, const Vec& v) {
  const int n = L.dim();
  Vec out(n);
  for (int i = 0; i < n; ++i) {
    const Vec e = unit_vector(n, i);
    out(i) = mixed_derivative(L, x, v, {}, std::span<const Vec>(&e, 1));
  }
  return out;
}

Vec base_gradient(const Lagrangian& L, const Vec& x, const Vec& v) {
  const int n = L.dim();
  Vec out(n);
  for (int i = 0; i < n; ++i) {
    const Vec e = unit_vector(n, i);
    out(i) = mixed_derivative(L, x, v, std::span<const Vec>(&e, 1), {});
  }
  return out;
}

Jet3 eval_jet3(const Lagrangian& L, const Vec& x, const Vec& v, std::span<const Vec> dirs) {
  if (dirs.size() > 3) throw DomainError("at most three fiber directions");
  require_admissible(L, x, v, "eval_jet3");
  const int k = static_cast<int>(dirs.size());
  Jet3 j;
  j.count = k;
  j.value = L(x, v);
  if (!std::isfinite(j.value)) throw EvaluationError("non-finite Lagrangian value in " + L.name());
  j.d1.resize(static_cast<std::size_t>(k));
  j.d2.resize(static_cast<std::size_t>(k * k));
  j.d3.resize(static_cast<std::size_t>(k * k * k));
  for (int a = 0; a < k; ++a) {
    const Vec d[1] = {dirs[a]};
    j.d1[a] = mixed_derivative(L, x, v, {}, d);
    for (int b = a; b < k; ++b) {
      const Vec d2[2] = {dirs[a], dirs[b]};
      const double s = mixed_derivative(L, x, v, {}, d2);
      j.d2[a * k + b] = j.d2[b * k + a] = s;
      for (int c = b; c < k; ++c) {
        const Vec d3[3] = {dirs[a], dirs[b], dirs[c]};
        const double t = mixed_derivative(L, x, v, {}, d3);
        const int idx[3] = {a, b, c};
        // all six permutations share one value
        for (int p = 0; p < 3; ++p) {
          for (int q = 0; q < 3; ++q) {
            if (q == p) continue;
            const int r = 3 - p - q;
            j.d3[(idx[p] * k + idx[q]) * k + idx[r]] = t;
          }
        }
      }
    }
  }
  return j;
}

XJet eval_xjet(const Lagrangian& L, const Vec& x, const Vec& v, std::span<const Vec> base_dirs,
               std::span<const Vec> fiber_dirs) {
  if (base_dirs.size() > 3) throw DomainError("at most three base directions");
  require_admissible(L, x, v, "eval_xjet");
  const int k = static_cast<int>(base_dirs.size());
  XJet j;
  j.count = k;
  j.value = mixed_derivative(L, x, v, {}, fiber_dirs);
  j.dx.resize(static_cast<std::size_t>(k));
  j.dxdx.resize(static_cast<std::size_t>(k * k));
  const bool second = fiber_dirs.size() + 2 <= 4;
  for (int a = 0; a < k; ++a) {
    const Vec d1[1] = {base_dirs[a]};
    j.dx[a] = mixed_derivative(L, x, v, d1, fiber_dirs);
    if (!second) continue;
    for (int b = a; b < k; ++b) {
      const Vec d2[2] = {base_dirs[a], base_dirs[b]};
      j.dxdx[a * k + b] = j.dxdx[b * k + a] = mixed_derivative(L, x, v, d2, fiber_dirs);
    }
  }
  if (!second && k > 0) {
    for (double& d : j.dxdx) d = std::nan("");
  }
  return j;
}

}  // namespace finsler
