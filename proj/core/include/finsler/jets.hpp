#pragma once

// Directional Taylor data of a Lagrangian, computed with hyper-dual numbers.

#include "finsler/lagrangian.hpp"
#include "finsler/types.hpp"

#include <span>
#include <vector>

namespace finsler {

/// Fiber (v-slot) derivatives of L at fixed x along up to three directions.
struct Jet3 {
  double value = 0.0;
  std::vector<double> d1;  // [a]
  std::vector<double> d2;  // [a * k + b], symmetric
  std::vector<double> d3;  // [(a * k + b) * k + c], symmetric
  int count = 0;

  double first(int a) const { return d1[static_cast<std::size_t>(a)]; }
  double second(int a, int b) const { return d2[static_cast<std::size_t>(a * count + b)]; }
  double third(int a, int b, int c) const {
    return d3[static_cast<std::size_t>((a * count + b) * count + c)];
  }
};

/// Base (x-slot) derivatives of the fiber derivative D_{w1..wm} L, at most
/// second order in x.
struct XJet {
  double value = 0.0;
  std::vector<double> dx;    // [a]
  std::vector<double> dxdx;  // [a * k + b], symmetric
  int count = 0;

  double first(int a) const { return dx[static_cast<std::size_t>(a)]; }
  double second(int a, int b) const { return dxdx[static_cast<std::size_t>(a * count + b)]; }
};

/// d^k/dt_1..dt_k L(x + sum_a t_a xdirs[a], v + sum_b s_b vdirs[b]) at zero,
/// differentiated once in every listed direction. Total order at most 4.
/// No cone check: callers are responsible for admissibility.
double mixed_derivative(const Lagrangian& L, const Vec& x, const Vec& v, std::span<const Vec> xdirs,
                        std::span<const Vec> vdirs);

/// Gradient of L in the fiber slot, exact.
Vec fiber_gradient(const Lagrangian& L, const Vec& x, const Vec& v);
/// Gradient of L in the base slot at fixed v, exact.
Vec base_gradient(const Lagrangian& L, const Vec& x, const Vec& v);

Jet3 eval_jet3(const Lagrangian& L, const Vec& x, const Vec& v, std::span<const Vec> dirs);

XJet eval_xjet(const Lagrangian& L, const Vec& x, const Vec& v, std::span<const Vec> base_dirs,
               std::span<const Vec> fiber_dirs);

}  // namespace finsler
