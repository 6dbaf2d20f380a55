#pragma once

// Hyper-dual numbers: truncated Taylor arithmetic in K independent nilpotent
// infinitesimals e_1..e_K with e_a^2 = 0. A value stores one coefficient per
// subset of {e_1..e_K}; the coefficient of e_1 e_2 ... e_K is the exact mixed
// partial derivative along the K seeded directions. Nesting
// HyperDual<A, HyperDual<B>> behaves like HyperDual<A + B>.

#include <array>
#include <cmath>
#include <cstddef>
#include <span>
#include <type_traits>

namespace finsler {

template <int K, class T = double>
class HyperDual;

template <class T>
struct is_hyperdual : std::false_type {};
template <int K, class T>
struct is_hyperdual<HyperDual<K, T>> : std::true_type {};
template <class T>
inline constexpr bool is_hyperdual_v = is_hyperdual<T>::value;

/// Real (double) part of a possibly nested hyper-dual value.
inline double real_part(double x) { return x; }
template <int K, class T>
double real_part(const HyperDual<K, T>& x) {
  return real_part(x[0]);
}

template <int K, class T>
class HyperDual {
  static_assert(K >= 0 && K <= 6, "hyper-dual order out of range");

 public:
  using scalar_type = T;
  static constexpr int order = K;
  static constexpr std::size_t size = std::size_t{1} << K;

  HyperDual() { c_.fill(T(0.0)); }
  HyperDual(double v) {  // NOLINT: implicit by design of generic numeric code
    c_.fill(T(0.0));
    c_[0] = T(v);
  }
  template <class U = T>
    requires(!std::is_same_v<U, double>)
  HyperDual(const T& v) {  // NOLINT
    c_.fill(T(0.0));
    c_[0] = v;
  }

  /// x + e_a for a in [0, K)
  static HyperDual variable(const T& value, int a) {
    HyperDual r(value);
    r.c_[std::size_t{1} << a] = T(1.0);
    return r;
  }

  T& operator[](std::size_t mask) { return c_[mask]; }
  const T& operator[](std::size_t mask) const { return c_[mask]; }

  const T& value() const { return c_[0]; }
  /// Coefficient of e_1 ... e_K.
  const T& top() const { return c_[size - 1]; }

  HyperDual& operator+=(const HyperDual& o) {
    for (std::size_t m = 0; m < size; ++m) c_[m] += o.c_[m];
    return *this;
  }
  HyperDual& operator-=(const HyperDual& o) {
    for (std::size_t m = 0; m < size; ++m) c_[m] -= o.c_[m];
    return *this;
  }
  HyperDual& operator*=(const HyperDual& o) { return *this = *this * o; }
  HyperDual& operator/=(const HyperDual& o) { return *this = *this / o; }

  HyperDual operator-() const {
    HyperDual r;
    for (std::size_t m = 0; m < size; ++m) r.c_[m] = -c_[m];
    return r;
  }

  friend HyperDual operator+(HyperDual a, const HyperDual& b) { return a += b; }
  friend HyperDual operator-(HyperDual a, const HyperDual& b) { return a -= b; }

  friend HyperDual operator*(const HyperDual& a, const HyperDual& b) {
    HyperDual r;
    for (std::size_t m = 0; m < size; ++m) {
      // sum over submasks s of m
      T acc = a.c_[0] * b.c_[m];
      for (std::size_t s = m; s != 0; s = (s - 1) & m) {
        acc += a.c_[s] * b.c_[m ^ s];
      }
      r.c_[m] = acc;
    }
    return r;
  }

  friend HyperDual operator/(const HyperDual& a, const HyperDual& b) { return a * reciprocal(b); }

  friend bool operator<(const HyperDual& a, const HyperDual& b) { return real_part(a) < real_part(b); }
  friend bool operator>(const HyperDual& a, const HyperDual& b) { return real_part(a) > real_part(b); }
  friend bool operator<=(const HyperDual& a, const HyperDual& b) { return real_part(a) <= real_part(b); }
  friend bool operator>=(const HyperDual& a, const HyperDual& b) { return real_part(a) >= real_part(b); }

  /// f(x) = sum_k f^(k)(x0)/k! d^k with d = x - x0, given derivs[k] = f^(k)(x0).
  template <std::size_t N>
  static HyperDual compose(const HyperDual& x, const std::array<T, N>& derivs) {
    HyperDual delta = x;
    delta.c_[0] = T(0.0);
    HyperDual result(derivs[0]);
    HyperDual power(1.0);
    double factorial = 1.0;
    for (std::size_t k = 1; k < N && k <= static_cast<std::size_t>(K); ++k) {
      power = power * delta;
      factorial *= static_cast<double>(k);
      const T coef = derivs[k] * T(1.0 / factorial);
      for (std::size_t m = 0; m < size; ++m) result.c_[m] += coef * power.c_[m];
    }
    return result;
  }

  friend HyperDual reciprocal(const HyperDual& x) {
    const T a = x.c_[0];
    const T r = T(1.0) / a;
    std::array<T, K + 1> d{};
    d[0] = r;
    for (int k = 1; k <= K; ++k) d[k] = d[k - 1] * r * T(-static_cast<double>(k));
    return compose(x, d);
  }

  friend HyperDual sqrt(const HyperDual& x) {
    using std::sqrt;
    const T a = x.c_[0];
    const T s = sqrt(a);
    const T inv = T(1.0) / a;
    std::array<T, K + 1> d{};
    d[0] = s;
    double coef = 0.5;
    for (int k = 1; k <= K; ++k) {
      d[k] = d[k - 1] * inv * T(coef);
      coef -= 1.0;
    }
    return compose(x, d);
  }

  friend HyperDual pow(const HyperDual& x, double p) {
    using std::pow;
    const T a = x.c_[0];
    const T inv = T(1.0) / a;
    std::array<T, K + 1> d{};
    d[0] = pow(a, p);
    double coef = p;
    for (int k = 1; k <= K; ++k) {
      d[k] = d[k - 1] * inv * T(coef);
      coef -= 1.0;
    }
    return compose(x, d);
  }

  friend HyperDual exp(const HyperDual& x) {
    using std::exp;
    const T e = exp(x.c_[0]);
    std::array<T, K + 1> d{};
    d.fill(e);
    return compose(x, d);
  }

  friend HyperDual log(const HyperDual& x) {
    using std::log;
    const T a = x.c_[0];
    const T inv = T(1.0) / a;
    std::array<T, K + 1> d{};
    d[0] = log(a);
    if constexpr (K >= 1) {
      T p = inv;
      for (int k = 1; k <= K; ++k) {
        d[k] = p;
        p = p * inv * T(-static_cast<double>(k));
      }
    }
    return compose(x, d);
  }

  friend HyperDual sin(const HyperDual& x) {
    using std::cos;
    using std::sin;
    const T s = sin(x.c_[0]);
    const T c = cos(x.c_[0]);
    std::array<T, K + 1> d{};
    for (int k = 0; k <= K; ++k) {
      switch (k % 4) {
        case 0: d[k] = s; break;
        case 1: d[k] = c; break;
        case 2: d[k] = -s; break;
        default: d[k] = -c; break;
      }
    }
    return compose(x, d);
  }

  friend HyperDual cos(const HyperDual& x) {
    using std::cos;
    using std::sin;
    const T s = sin(x.c_[0]);
    const T c = cos(x.c_[0]);
    std::array<T, K + 1> d{};
    for (int k = 0; k <= K; ++k) {
      switch (k % 4) {
        case 0: d[k] = c; break;
        case 1: d[k] = -s; break;
        case 2: d[k] = -c; break;
        default: d[k] = s; break;
      }
    }
    return compose(x, d);
  }

  friend HyperDual sinh(const HyperDual& x) {
    using std::cosh;
    using std::sinh;
    const T s = sinh(x.c_[0]);
    const T c = cosh(x.c_[0]);
    std::array<T, K + 1> d{};
    for (int k = 0; k <= K; ++k) d[k] = (k % 2 == 0) ? s : c;
    return compose(x, d);
  }

  friend HyperDual cosh(const HyperDual& x) {
    using std::cosh;
    using std::sinh;
    const T s = sinh(x.c_[0]);
    const T c = cosh(x.c_[0]);
    std::array<T, K + 1> d{};
    for (int k = 0; k <= K; ++k) d[k] = (k % 2 == 0) ? c : s;
    return compose(x, d);
  }

 private:
  std::array<T, size> c_;
};

// Mixed arithmetic with plain doubles and with the inner scalar type.
#define FINSLER_HD_MIXED_OP(op)                                                       \
  template <int K, class T>                                                           \
  HyperDual<K, T> operator op(const HyperDual<K, T>& a, double b) {                   \
    return a op HyperDual<K, T>(b);                                                   \
  }                                                                                   \
  template <int K, class T>                                                           \
  HyperDual<K, T> operator op(double a, const HyperDual<K, T>& b) {                   \
    return HyperDual<K, T>(a) op b;                                                   \
  }                                                                                   \
  template <int K, class T>                                                           \
    requires is_hyperdual_v<T>                                                        \
  HyperDual<K, T> operator op(const HyperDual<K, T>& a, const T& b) {                 \
    return a op HyperDual<K, T>(b);                                                   \
  }                                                                                   \
  template <int K, class T>                                                           \
    requires is_hyperdual_v<T>                                                        \
  HyperDual<K, T> operator op(const T& a, const HyperDual<K, T>& b) {                 \
    return HyperDual<K, T>(a) op b;                                                   \
  }

FINSLER_HD_MIXED_OP(+)
FINSLER_HD_MIXED_OP(-)
FINSLER_HD_MIXED_OP(*)
FINSLER_HD_MIXED_OP(/)
#undef FINSLER_HD_MIXED_OP

template <int K, class T>
bool operator<(const HyperDual<K, T>& a, double b) {
  return real_part(a) < b;
}
template <int K, class T>
bool operator>(const HyperDual<K, T>& a, double b) {
  return real_part(a) > b;
}
template <int K, class T>
bool operator<(double a, const HyperDual<K, T>& b) {
  return a < real_part(b);
}
template <int K, class T>
bool operator>(double a, const HyperDual<K, T>& b) {
  return a > real_part(b);
}

/// Smooth-branch absolute value: sign taken from the real part.
template <int K, class T>
HyperDual<K, T> abs(const HyperDual<K, T>& x) {
  return real_part(x) < 0.0 ? -x : x;
}

using Dual1 = HyperDual<1>;
using Dual2 = HyperDual<2>;
using Dual3 = HyperDual<3>;
using Dual4 = HyperDual<4>;

/// Evaluates the univariate Taylor series sum_k derivs[k]/k! (x - x0)^k
/// for a first-level hyper-dual (or double) argument.
inline double compose_series(double /*x*/, std::span<const double> derivs) { return derivs[0]; }

template <int K>
HyperDual<K> compose_series(const HyperDual<K>& x, std::span<const double> derivs) {
  std::array<double, K + 1> d{};
  for (std::size_t k = 0; k < d.size(); ++k) d[k] = k < derivs.size() ? derivs[k] : 0.0;
  return HyperDual<K>::compose(x, d);
}

/// True when (x - x0)^p vanishes identically, i.e. a series truncated at
/// degree p - 1 reproduces x exactly.
inline bool series_exact_at(double /*x*/, int /*p*/) { return true; }

template <int K>
bool series_exact_at(const HyperDual<K>& x, int p) {
  HyperDual<K> delta = x;
  delta[0] = 0.0;
  HyperDual<K> power(1.0);
  for (int k = 0; k < p; ++k) power = power * delta;
  for (std::size_t m = 0; m < HyperDual<K>::size; ++m) {
    if (power[m] != 0.0) return false;
  }
  return true;
}

}  // namespace finsler
