#pragma once

// Small dense helpers shared by the engine: Eigen aliases for point values,
// a square matrix of jets, and pivoted Gauss-Jordan inversion that works for
// both doubles and jets.

#include <cmath>
#include <cstddef>
#include <type_traits>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "tbgeom/errors.hpp"
#include "tbgeom/jet.hpp"

namespace tbgeom {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

inline constexpr double kPivotThreshold = 1e-12;

inline double value_of(double x) { return x; }
inline double value_of(const Jet& x) { return x.value(); }

/// Row-major n x n matrix of T.
template <class T>
class SquareMatrix {
 public:
  SquareMatrix() = default;
  SquareMatrix(std::size_t n, const T& fill) : n_(n), a_(n * n, fill) {}

  std::size_t size() const noexcept { return n_; }
  T& operator()(std::size_t i, std::size_t j) { return a_[i * n_ + j]; }
  const T& operator()(std::size_t i, std::size_t j) const { return a_[i * n_ + j]; }

  Mat values() const {
    Mat m(n_, n_);
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = 0; j < n_; ++j) m(i, j) = value_of((*this)(i, j));
    return m;
  }

 private:
  std::size_t n_ = 0;
  std::vector<T> a_;
};

using JetMatrix = SquareMatrix<Jet>;

inline JetMatrix truncated(const JetMatrix& a, int order) {
  JetMatrix r = a;
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a.size(); ++j) r(i, j) = a(i, j).truncated(order);
  return r;
}

/// Inverse by Gauss-Jordan elimination with partial pivoting on the value
/// part. Throws SingularMetric when a pivot falls below kPivotThreshold.
template <class T>
SquareMatrix<T> invert(SquareMatrix<T> a, const T& one, const T& zero) {
  const std::size_t n = a.size();
  SquareMatrix<T> inv(n, zero);
  for (std::size_t i = 0; i < n; ++i) inv(i, i) = one;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    double best = std::abs(value_of(a(c, c)));
    for (std::size_t r = c + 1; r < n; ++r) {
      const double v = std::abs(value_of(a(r, c)));
      if (v > best) best = v, p = r;
    }
    if (!(best >= kPivotThreshold)) throw SingularMetric("metric inversion pivot below threshold");
    if (p != c)
      for (std::size_t j = 0; j < n; ++j) {
        std::swap(a(p, j), a(c, j));
        std::swap(inv(p, j), inv(c, j));
      }
    const T piv_inv = T(one / a(c, c));
    for (std::size_t j = 0; j < n; ++j) {
      a(c, j) = a(c, j) * piv_inv;
      inv(c, j) = inv(c, j) * piv_inv;
    }
    for (std::size_t r = 0; r < n; ++r) {
      if (r == c) continue;
      const T factor = a(r, c);
      // a jet with zero value can still carry derivatives
      if constexpr (std::is_same_v<T, double>)
        if (factor == 0.0) continue;
      for (std::size_t j = 0; j < n; ++j) {
        a(r, j) = a(r, j) - factor * a(c, j);
        inv(r, j) = inv(r, j) - factor * inv(c, j);
      }
    }
  }
  return inv;
}

inline Mat invert(const Mat& a) {
  SquareMatrix<double> s(static_cast<std::size_t>(a.rows()), 0.0);
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j) s(i, j) = a(i, j);
  return invert(std::move(s), 1.0, 0.0).values();
}

/// Inverse of a symmetric jet matrix, symmetrized so that entry (i,j) and
/// (j,i) agree exactly.
inline JetMatrix invert_symmetric(const JetMatrix& a) {
  const std::size_t n = a.size();
  const std::size_t dim = n ? a(0, 0).dim() : 0;
  const int order = n ? a(0, 0).order() : 0;
  JetMatrix inv = invert(a, Jet(dim, order, 1.0), Jet(dim, order, 0.0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) inv(j, i) = inv(i, j);
  return inv;
}

inline bool is_spd(const Mat& a) {
  if ((a - a.transpose()).cwiseAbs().maxCoeff() > 1e-12 * (1.0 + a.cwiseAbs().maxCoeff())) return false;
  Eigen::LLT<Mat> llt(a);
  return llt.info() == Eigen::Success;
}

inline double max_abs(const Vec& v) { return v.size() ? v.cwiseAbs().maxCoeff() : 0.0; }

}  // namespace tbgeom
