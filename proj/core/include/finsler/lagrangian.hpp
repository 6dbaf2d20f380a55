#pragma once

// Lorentz-Finsler Lagrangians L(x, v) on a single chart.
//
// A Lagrangian is built from a generic functor
//
//   struct MyL {
//     template <class T>
//     T operator()(std::span<const T> x, std::span<const T> v) const;
//   };
//
// which is instantiated for double and for HyperDual<1..4>; every derivative
// the geometry needs is then an exact jet evaluation of that functor.

#include "finsler/error.hpp"
#include "finsler/hyperdual.hpp"
#include "finsler/types.hpp"

#include <functional>
#include <memory>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace finsler {

inline constexpr int kMaxJetOrder = 4;

template <class T>
using LagrangianFn = std::function<T(std::span<const T>, std::span<const T>)>;

/// Axis-aligned coordinate box used for random sampling.
struct Region {
  std::vector<std::pair<double, double>> bounds;

  static Region cube(int n, double half_width) {
    return Region{std::vector<std::pair<double, double>>(static_cast<std::size_t>(n), {-half_width, half_width})};
  }
  bool contains(const Vec& x) const;
};

class Lagrangian {
 public:
  using ConeRefFn = std::function<Vec(const Vec&)>;

  template <class Fn>
  static Lagrangian from_generic(std::string name, int dim, Fn fn, ConeRefFn cone_ref);

  const std::string& name() const { return name_; }
  int dim() const { return dim_; }
  const Region& region() const { return region_; }

  Lagrangian with_region(Region r) const {
    Lagrangian copy = *this;
    copy.region_ = std::move(r);
    return copy;
  }
  Lagrangian with_cone_ref(ConeRefFn c) const {
    Lagrangian copy = *this;
    copy.cone_ref_ = std::move(c);
    return copy;
  }
  Lagrangian with_name(std::string n) const {
    Lagrangian copy = *this;
    copy.name_ = std::move(n);
    return copy;
  }

  /// Interior reference vector of the admissible cone at x.
  Vec cone_ref(const Vec& x) const { return cone_ref_(x); }

  double operator()(const Vec& x, const Vec& v) const;

  template <class T>
  T eval(std::span<const T> x, std::span<const T> v) const {
    if constexpr (std::is_same_v<T, double>) {
      return fns_->f0(x, v);
    } else if constexpr (std::is_same_v<T, Dual1>) {
      return fns_->f1(x, v);
    } else if constexpr (std::is_same_v<T, Dual2>) {
      return fns_->f2(x, v);
    } else if constexpr (std::is_same_v<T, Dual3>) {
      return fns_->f3(x, v);
    } else {
      static_assert(std::is_same_v<T, Dual4>, "unsupported scalar type");
      return fns_->f4(x, v);
    }
  }

 private:
  struct Evaluators {
    LagrangianFn<double> f0;
    LagrangianFn<Dual1> f1;
    LagrangianFn<Dual2> f2;
    LagrangianFn<Dual3> f3;
    LagrangianFn<Dual4> f4;
  };

  std::string name_;
  int dim_ = 0;
  std::shared_ptr<const Evaluators> fns_;
  ConeRefFn cone_ref_;
  Region region_;
};

template <class Fn>
Lagrangian Lagrangian::from_generic(std::string name, int dim, Fn fn, ConeRefFn cone_ref) {
  if (dim < 3) throw DomainError("Lagrangian dimension must be at least 3");
  Lagrangian L;
  L.name_ = std::move(name);
  L.dim_ = dim;
  auto fns = std::make_shared<Evaluators>();
  fns->f0 = [fn](std::span<const double> x, std::span<const double> v) { return fn(x, v); };
  fns->f1 = [fn](std::span<const Dual1> x, std::span<const Dual1> v) { return fn(x, v); };
  fns->f2 = [fn](std::span<const Dual2> x, std::span<const Dual2> v) { return fn(x, v); };
  fns->f3 = [fn](std::span<const Dual3> x, std::span<const Dual3> v) { return fn(x, v); };
  fns->f4 = [fn](std::span<const Dual4> x, std::span<const Dual4> v) { return fn(x, v); };
  L.fns_ = std::move(fns);
  L.cone_ref_ = std::move(cone_ref);
  L.region_ = Region::cube(dim, 1.0);
  return L;
}

struct ConeMembership {
  bool inside = false;  // L > 0 along the whole segment to cone_ref(x)
  double value = 0.0;   // L(x, v)
  double margin = 0.0;  // min of L(w)/|w|^2 over the sampled segment
};

/// Open-cone membership with the salient-component convention: v is inside
/// iff L > 0 at 16 points of the segment from v/|v| to cone_ref/|cone_ref| and at
/// its point nearest the origin, which must stay away from the apex.
ConeMembership is_admissible(const Lagrangian& L, const Vec& x, const Vec& v);

/// Closure membership: L(v) >= -rel_tol |v|^2 and every other segment sample
/// towards cone_ref is strictly inside.
bool in_closure(const Lagrangian& L, const Vec& x, const Vec& v, double rel_tol = 1e-9);

/// Throws ConeViolation unless v lies in the closure of the cone at x.
void require_admissible(const Lagrangian& L, const Vec& x, const Vec& v, const char* where);

}  // namespace finsler
