#include "oracles.hpp"

#include <Eigen/LU>

#include <cmath>
#include <limits>

namespace oracle {

namespace {

double second_difference(const Lagrangian& L, const Vec& x, const Vec& v, int i, int j, double h) {
  const int n = L.dim();
  const Vec ei = h * finsler::unit_vector(n, i);
  const Vec ej = h * finsler::unit_vector(n, j);
  return (L(x, v + ei + ej) - L(x, v + ei - ej) - L(x, v - ei + ej) + L(x, v - ei - ej)) / (4.0 * h * h);
}

}  // namespace

Mat fd_metric(const Lagrangian& L, const Vec& x, const Vec& v) {
  const int n = L.dim();
  const double h = 1e-3 * std::max(1.0, v.norm());
  Mat g(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const double coarse = second_difference(L, x, v, i, j, h);
      const double fine = second_difference(L, x, v, i, j, 0.5 * h);
      g(i, j) = 0.5 * (4.0 * fine - coarse) / 3.0;
    }
  }
  return g;
}

Tensor3 fd_metric_derivative(const Lagrangian& L, const Vec& x, const Vec& v) {
  const int n = L.dim();
  const double h = 1e-3;
  Tensor3 dg(n);
  for (int k = 0; k < n; ++k) {
    const Vec e = finsler::unit_vector(n, k);
    const Mat d1 = (fd_metric(L, x + h * e, v) - fd_metric(L, x - h * e, v)) / (2.0 * h);
    const Mat d2 = (fd_metric(L, x + 0.5 * h * e, v) - fd_metric(L, x - 0.5 * h * e, v)) / h;
    const Mat d = (4.0 * d2 - d1) / 3.0;
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) dg(k, i, j) = d(i, j);
    }
  }
  return dg;
}

Mat polarized_metric(const Lagrangian& L, const Vec& x) {
  const int n = L.dim();
  Mat g(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const Vec ei = finsler::unit_vector(n, i);
      const Vec ej = finsler::unit_vector(n, j);
      g(i, j) = (L(x, ei + ej) - L(x, ei - ej)) / 4.0;
    }
  }
  return g;
}

Tensor3 polarized_metric_derivative(const Lagrangian& L, const Vec& x, double step) {
  const int n = L.dim();
  static constexpr double kWeights[4] = {4.0 / 5.0, -1.0 / 5.0, 4.0 / 105.0, -1.0 / 280.0};
  Tensor3 dg(n);
  for (int k = 0; k < n; ++k) {
    const Vec e = step * finsler::unit_vector(n, k);
    Mat d = Mat::Zero(n, n);
    for (int m = 1; m <= 4; ++m) d += kWeights[m - 1] * (polarized_metric(L, x + m * e) - polarized_metric(L, x - m * e));
    d /= step;
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) dg(k, i, j) = d(i, j);
    }
  }
  return dg;
}

Tensor3 christoffel_from_metric(const Mat& g, const Tensor3& dg) {
  const auto n = static_cast<int>(g.rows());
  const Mat gi = g.inverse();
  Tensor3 G(n);
  for (int k = 0; k < n; ++k) {
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        double s = 0.0;
        for (int l = 0; l < n; ++l) s += gi(k, l) * (dg(i, l, j) + dg(j, l, i) - dg(l, i, j));
        G(k, i, j) = 0.5 * s;
      }
    }
  }
  return G;
}

Tensor3 brinkmann_symbols(const std::function<double(double, double, double)>& H, const Vec& x, double s) {
  // coordinates (v, u, x, y); derivatives of H by central differences
  const double u = x(1);
  const double p = x(2);
  const double q = x(3);
  const double h = 1e-5;
  const double Hu = (H(u + h, p, q) - H(u - h, p, q)) / (2 * h);
  const double Hx = (H(u, p + h, q) - H(u, p - h, q)) / (2 * h);
  const double Hy = (H(u, p, q + h) - H(u, p, q - h)) / (2 * h);
  Tensor3 G(4);
  G(0, 2, 1) = G(0, 1, 2) = Hx / 2;
  G(0, 3, 1) = G(0, 1, 3) = Hy / 2;
  G(0, 1, 1) = Hu / 2;
  G(2, 1, 1) = -Hx / (2 * s);
  G(3, 1, 1) = -Hy / (2 * s);
  return G;
}

Tensor4 curvature_from_symbols(const std::function<Tensor3(const Vec&)>& gamma, const Vec& x, double step) {
  const auto n = static_cast<int>(x.size());
  const Tensor3 G = gamma(x);
  std::vector<Tensor3> dG;
  for (int i = 0; i < n; ++i) {
    const Vec e = step * finsler::unit_vector(n, i);
    dG.push_back(gamma(x + e) - gamma(x - e));
  }
  Tensor4 R(n);
  for (int l = 0; l < n; ++l) {
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        for (int k = 0; k < n; ++k) {
          double r = (dG[static_cast<std::size_t>(i)](l, j, k) - dG[static_cast<std::size_t>(j)](l, i, k)) / (2 * step);
          for (int m = 0; m < n; ++m) r += G(l, i, m) * G(m, j, k) - G(l, j, m) * G(m, i, k);
          R(l, i, j, k) = r;
        }
      }
    }
  }
  return R;
}

std::vector<double> rk4(const std::function<std::vector<double>(double, const std::vector<double>&)>& f,
                        std::vector<double> y, double t0, double t1, int steps) {
  const double h = (t1 - t0) / steps;
  const auto axpy = [](const std::vector<double>& a, double c, const std::vector<double>& b) {
    std::vector<double> r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + c * b[i];
    return r;
  };
  double t = t0;
  for (int s = 0; s < steps; ++s) {
    const auto k1 = f(t, y);
    const auto k2 = f(t + h / 2, axpy(y, h / 2, k1));
    const auto k3 = f(t + h / 2, axpy(y, h / 2, k2));
    const auto k4 = f(t + h, axpy(y, h, k3));
    for (std::size_t i = 0; i < y.size(); ++i) y[i] += h / 6 * (k1[i] + 2 * k2[i] + 2 * k3[i] + k4[i]);
    t = t0 + (s + 1) * h;
  }
  return y;
}

std::vector<double> jacobi_zeros(const std::function<double(double)>& a, double t0, double t1, int steps) {
  const auto f = [&a](double t, const std::vector<double>& y) { return std::vector<double>{y[1], a(t) * y[0]}; };
  const double h = (t1 - t0) / steps;
  std::vector<double> zeros;
  std::vector<double> y{1.0, 0.0};
  for (int s = 0; s < steps; ++s) {
    const double ta = t0 + s * h;
    const std::vector<double> next = rk4(f, y, ta, ta + h, 1);
    if (y[0] != 0.0 && (y[0] > 0) != (next[0] > 0)) {
      double lo = 0.0;
      double hi = h;
      for (int it = 0; it < 80; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double e = rk4(f, y, ta, ta + mid, 1)[0];
        ((e > 0) == (y[0] > 0) ? lo : hi) = mid;
      }
      zeros.push_back(ta + 0.5 * (lo + hi));
    }
    y = next;
  }
  return zeros;
}

double first_jacobi_zero(const std::function<double(double)>& a, double t0, double t1, int steps) {
  const std::vector<double> z = jacobi_zeros(a, t0, t1, steps);
  return z.empty() ? std::numeric_limits<double>::quiet_NaN() : z.front();
}

std::function<double(double)> rosen_jacobi_coefficient(const Lagrangian& L, int axis, double floor) {
  const auto e = [L, axis](double t) {
    Vec x = Vec::Zero(L.dim());
    x(0) = t;
    return std::sqrt(std::max(0.0, -L(x, finsler::unit_vector(L.dim(), axis))));
  };
  const auto raw = [e](double t) {
    const double h = 1e-4;
    return (e(t + h) - 2 * e(t) + e(t - h)) / (h * h) / e(t);
  };
  return [e, raw, floor](double t) {
    if (e(t) >= floor) return raw(t);
    double back = t;
    while (e(back) < floor) back -= 1e-3;
    const double a1 = raw(back);
    const double a0 = raw(back - 1e-2);
    return a1 + (a1 - a0) / 1e-2 * (t - back);
  };
}

std::vector<Lagrangian> catalog() { return finsler::builtin_catalog(); }

}  // namespace oracle
