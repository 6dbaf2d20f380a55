#include "finsler/types.hpp"

#include <algorithm>
#include <cmath>

namespace finsler {

namespace {

double max_abs_of(const std::vector<double>& d) {
  double m = 0.0;
  for (double x : d) m = std::max(m, std::abs(x));
  return m;
}

}  // namespace

double Tensor3::max_abs() const { return max_abs_of(data_); }

Tensor3 Tensor3::operator-(const Tensor3& o) const {
  if (o.n_ != n_) throw std::invalid_argument("Tensor3 dimension mismatch");
  Tensor3 r(n_);
  for (std::size_t i = 0; i < data_.size(); ++i) r.data_[i] = data_[i] - o.data_[i];
  return r;
}

double Tensor4::max_abs() const { return max_abs_of(data_); }

Tensor4 Tensor4::operator-(const Tensor4& o) const {
  if (o.n_ != n_) throw std::invalid_argument("Tensor4 dimension mismatch");
  Tensor4 r(n_);
  for (std::size_t i = 0; i < data_.size(); ++i) r.data_[i] = data_[i] - o.data_[i];
  return r;
}

}  // namespace finsler
