#pragma once

// Truncated multivariate Taylor arithmetic ("jets") up to order 3.
//
// A Jet carries the value of a scalar function at a point together with its
// gradient, Hessian and third-derivative tensor with respect to `dim`
// variables. All propagation rules are exact to the stored order; higher
// derivative tensors are always symmetric bit-for-bit because only the
// canonical entries (i <= j <= k) are computed and then mirrored.
//
// A jet of dimension 0 is a plain constant and combines with jets of any
// dimension.

#include <algorithm>
#include <array>
#include <cassert>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "tbgeom/errors.hpp"

namespace tbgeom {

inline constexpr int kMaxJetOrder = 3;

class Jet {
 public:
  Jet() : Jet(0, kMaxJetOrder, 0.0) {}

  Jet(std::size_t dim, int order, double value = 0.0) : dim_(dim), order_(dim == 0 ? kMaxJetOrder : order) {
    assert(order >= 0 && order <= kMaxJetOrder);
    data_.assign(storage_size(dim_, order_), 0.0);
    data_[0] = value;
  }

  static Jet constant(double value) { return Jet(0, kMaxJetOrder, value); }

  /// The coordinate function y_index evaluated at `value`.
  static Jet variable(std::size_t dim, int order, std::size_t index, double value) {
    assert(index < dim);
    Jet j(dim, order, value);
    if (order >= 1) j.data_[1 + index] = 1.0;
    return j;
  }

  std::size_t dim() const noexcept { return dim_; }
  int order() const noexcept { return order_; }
  bool is_constant() const noexcept { return dim_ == 0; }

  double value() const noexcept { return data_[0]; }
  double d(std::size_t i) const { return dim_ == 0 ? 0.0 : data_[1 + i]; }
  double d(std::size_t i, std::size_t j) const { return dim_ == 0 ? 0.0 : data_[h_off() + i * dim_ + j]; }
  double d(std::size_t i, std::size_t j, std::size_t k) const {
    return dim_ == 0 ? 0.0 : data_[t_off() + (i * dim_ + j) * dim_ + k];
  }

  void set_value(double v) noexcept { data_[0] = v; }
  void set_d(std::size_t i, double v) { data_[1 + i] = v; }
  void set_d(std::size_t i, std::size_t j, double v) {
    data_[h_off() + i * dim_ + j] = v;
    data_[h_off() + j * dim_ + i] = v;
  }
  void set_d(std::size_t i, std::size_t j, std::size_t k, double v) {
    const std::size_t n = dim_, o = t_off();
    data_[o + (i * n + j) * n + k] = v;
    data_[o + (i * n + k) * n + j] = v;
    data_[o + (j * n + i) * n + k] = v;
    data_[o + (j * n + k) * n + i] = v;
    data_[o + (k * n + i) * n + j] = v;
    data_[o + (k * n + j) * n + i] = v;
  }

  /// d/dy_i as a jet of one order less.
  Jet partial(std::size_t i) const {
    if (dim_ == 0) return constant(0.0);
    if (order_ == 0) throw PreconditionError("cannot differentiate a jet of order 0");
    const std::size_t n = dim_;
    Jet r(n, order_ - 1, d(i));
    if (r.order_ >= 1)
      for (std::size_t j = 0; j < n; ++j) r.data_[1 + j] = d(i, j);
    if (r.order_ >= 2)
      for (std::size_t j = 0; j < n; ++j)
        for (std::size_t k = 0; k < n; ++k) r.data_[r.h_off() + j * n + k] = d(i, j, k);
    return r;
  }

  /// Derivative along the direction v, as a jet of one order less.
  Jet directional(std::span<const double> v) const {
    if (dim_ == 0) return constant(0.0);
    if (order_ == 0) throw PreconditionError("cannot differentiate a jet of order 0");
    Jet r(dim_, order_ - 1, 0.0);
    for (std::size_t i = 0; i < dim_; ++i)
      if (v[i] != 0.0) r.axpy(v[i], partial(i));
    return r;
  }

  /// Plain number: derivative along v at the expansion point.
  double directional_value(std::span<const double> v) const {
    double s = 0.0;
    if (dim_ == 0 || order_ == 0) return s;
    for (std::size_t i = 0; i < dim_; ++i) s += v[i] * data_[1 + i];
    return s;
  }

  Jet truncated(int order) const {
    if (dim_ == 0 || order >= order_) return *this;
    Jet r(dim_, order, 0.0);
    std::copy_n(data_.begin(), r.data_.size(), r.data_.begin());
    return r;
  }

  /// Re-express as a jet in `new_dim >= dim` variables whose first `dim`
  /// variables coincide with the current ones.
  Jet embedded(std::size_t new_dim) const {
    if (dim_ == 0 || new_dim == dim_) return *this;
    assert(new_dim > dim_);
    const std::size_t n = dim_, m = new_dim;
    Jet r(m, order_, value());
    if (order_ >= 1)
      for (std::size_t i = 0; i < n; ++i) r.data_[1 + i] = d(i);
    if (order_ >= 2)
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) r.data_[r.h_off() + i * m + j] = d(i, j);
    if (order_ >= 3)
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
          for (std::size_t k = 0; k < n; ++k) r.data_[r.t_off() + (i * m + j) * m + k] = d(i, j, k);
    return r;
  }

  /// Chain rule for a scalar function phi with phi', phi'', phi''' at value().
  Jet compose(double f0, double f1, double f2, double f3) const {
    if (dim_ == 0) return constant(f0);
    const std::size_t n = dim_;
    Jet r(n, order_, f0);
    if (order_ >= 1)
      for (std::size_t i = 0; i < n; ++i) r.data_[1 + i] = f1 * d(i);
    if (order_ >= 2)
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j) r.set_d(i, j, f1 * d(i, j) + f2 * d(i) * d(j));
    if (order_ >= 3)
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j)
          for (std::size_t k = j; k < n; ++k)
            r.set_d(i, j, k,
                    f1 * d(i, j, k) + f2 * (d(i, j) * d(k) + d(i, k) * d(j) + d(j, k) * d(i)) +
                        f3 * d(i) * d(j) * d(k));
    return r;
  }

  Jet& operator+=(const Jet& o) { return axpy(1.0, o); }
  Jet& operator-=(const Jet& o) { return axpy(-1.0, o); }
  Jet& operator+=(double c) {
    data_[0] += c;
    return *this;
  }
  Jet& operator-=(double c) {
    data_[0] -= c;
    return *this;
  }
  Jet& operator*=(double c) {
    for (auto& x : data_) x *= c;
    return *this;
  }

  /// this += a * o, truncating to the lower of the two orders.
  Jet& axpy(double a, const Jet& o) {
    if (o.dim_ == 0) {
      data_[0] += a * o.data_[0];
      return *this;
    }
    if (dim_ == 0) {
      Jet r = o;
      r *= a;
      r.data_[0] += data_[0];
      return *this = std::move(r);
    }
    assert(dim_ == o.dim_);
    if (o.order_ < order_) *this = truncated(o.order_);
    const std::size_t len = data_.size();
    for (std::size_t i = 0; i < len; ++i) data_[i] += a * o.data_[i];
    return *this;
  }

  friend Jet operator*(const Jet& a, const Jet& b) {
    if (a.dim_ == 0) return b * a.value();
    if (b.dim_ == 0) return a * b.value();
    assert(a.dim_ == b.dim_);
    const std::size_t n = a.dim_;
    const int ord = std::min(a.order_, b.order_);
    const double av = a.value(), bv = b.value();
    Jet c(n, ord, av * bv);
    if (ord >= 1)
      for (std::size_t i = 0; i < n; ++i) c.data_[1 + i] = a.d(i) * bv + av * b.d(i);
    if (ord >= 2)
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j)
          c.set_d(i, j, a.d(i, j) * bv + a.d(i) * b.d(j) + a.d(j) * b.d(i) + av * b.d(i, j));
    if (ord >= 3)
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j)
          for (std::size_t k = j; k < n; ++k)
            c.set_d(i, j, k,
                    a.d(i, j, k) * bv + a.d(i, j) * b.d(k) + a.d(i, k) * b.d(j) + a.d(j, k) * b.d(i) +
                        a.d(i) * b.d(j, k) + a.d(j) * b.d(i, k) + a.d(k) * b.d(i, j) + av * b.d(i, j, k));
    return c;
  }

  friend Jet operator*(Jet a, double c) { return a *= c; }
  friend Jet operator*(double c, Jet a) { return a *= c; }
  friend Jet operator+(Jet a, const Jet& b) { return a += b; }
  friend Jet operator-(Jet a, const Jet& b) { return a -= b; }
  friend Jet operator+(Jet a, double c) { return a += c; }
  friend Jet operator+(double c, Jet a) { return a += c; }
  friend Jet operator-(Jet a, double c) { return a -= c; }
  friend Jet operator-(double c, const Jet& a) { return (-a) += c; }
  friend Jet operator-(Jet a) { return a *= -1.0; }
  friend Jet operator/(const Jet& a, double c) {
    if (c == 0.0) throw DomainError("division by zero");
    return a * (1.0 / c);
  }
  friend Jet operator/(const Jet& a, const Jet& b) { return a * reciprocal(b); }
  friend Jet operator/(double c, const Jet& b) { return reciprocal(b) * c; }

  friend Jet reciprocal(const Jet& b) {
    const double x = b.value();
    if (x == 0.0) throw DomainError("division by zero");
    const double r = 1.0 / x;
    return b.compose(r, -r * r, 2.0 * r * r * r, -6.0 * r * r * r * r);
  }

 private:
  static std::size_t storage_size(std::size_t n, int order) {
    std::size_t s = 1, p = 1;
    for (int k = 1; k <= order; ++k) {
      p *= n;
      s += p;
    }
    return s;
  }
  std::size_t h_off() const noexcept { return 1 + dim_; }
  std::size_t t_off() const noexcept { return 1 + dim_ + dim_ * dim_; }

  std::size_t dim_;
  int order_;
  std::vector<double> data_;
};

inline Jet exp(const Jet& a) {
  const double e = std::exp(a.value());
  return a.compose(e, e, e, e);
}

inline Jet log(const Jet& a) {
  const double x = a.value();
  if (!(x > 0.0)) throw DomainError("log of non-positive argument");
  const double r = 1.0 / x;
  return a.compose(std::log(x), r, -r * r, 2.0 * r * r * r);
}

inline Jet sin(const Jet& a) {
  const double s = std::sin(a.value()), c = std::cos(a.value());
  return a.compose(s, c, -s, -c);
}

inline Jet cos(const Jet& a) {
  const double s = std::sin(a.value()), c = std::cos(a.value());
  return a.compose(c, -s, -c, s);
}

inline Jet sqrt(const Jet& a) {
  const double x = a.value();
  if (!(x > 0.0)) throw DomainError("sqrt of non-positive argument");
  const double s = std::sqrt(x);
  return a.compose(s, 0.5 / s, -0.25 / (s * x), 0.375 / (s * x * x));
}

/// a^p for a constant exponent. Integer exponents accept any base (except 0
/// with p < 0); non-integer exponents require a positive base.
inline Jet pow(const Jet& a, double p) {
  const double x = a.value();
  if (p == 0.0) return Jet::constant(1.0);
  const bool integral = std::floor(p) == p;
  if (!integral && !(x > 0.0)) throw DomainError("non-integer power of non-positive base");
  if (integral && p < 0.0 && x == 0.0) throw DomainError("negative power of zero");
  auto term = [&](double coeff, double e) { return coeff == 0.0 ? 0.0 : coeff * std::pow(x, e); };
  return a.compose(std::pow(x, p), term(p, p - 1), term(p * (p - 1), p - 2), term(p * (p - 1) * (p - 2), p - 3));
}

}  // namespace tbgeom
