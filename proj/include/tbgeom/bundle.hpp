#pragma once

// The two rescaled bundle metrics on TM in induced coordinates
// y = (x_1..x_m, u_1..u_m), and the horizontal/vertical lift calculus.
//
// With N^a_i = Gamma^a_{ib} u^b:
//   X^h = (X, -N X),   X^v = (0, X)
//   [xx] = f G + N^T V N,   [xu] = N^T V,   [uu] = V
// where V = G for the Sasaki variant and
//   V = (G + (Gu)(Gu)^T) / alpha,  alpha = 1 + u^T G u
// for the Cheeger-Gromoll variant.

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "tbgeom/errors.hpp"
#include "tbgeom/jet.hpp"
#include "tbgeom/linalg.hpp"
#include "tbgeom/manifold.hpp"
#include "tbgeom/riemann.hpp"

namespace tbgeom {

enum class Variant { Sasaki, CheegerGromoll };

inline const char* variant_name(Variant v) { return v == Variant::Sasaki ? "sasaki" : "cg"; }

enum class Lift { H, V };

/// A tangent vector of TM written as hor^h + ver^v.
struct FrameResult {
  Vec hor, ver;

  static FrameResult zero(std::size_t m) { return {Vec::Zero(m), Vec::Zero(m)}; }
  FrameResult& operator+=(const FrameResult& o) {
    hor += o.hor;
    ver += o.ver;
    return *this;
  }
  friend FrameResult operator-(FrameResult a, const FrameResult& b) {
    a.hor -= b.hor;
    a.ver -= b.ver;
    return a;
  }
  friend FrameResult operator*(double s, FrameResult a) {
    a.hor *= s;
    a.ver *= s;
    return a;
  }
  Vec stacked() const {
    Vec r(hor.size() + ver.size());
    r << hor, ver;
    return r;
  }
};

using LiftDecomposition = FrameResult;

/// N^a_i = Gamma^a_{ib} u^b at a point.
inline Mat connection_map(const std::vector<double>& gamma, const Vec& u) {
  const std::size_t m = static_cast<std::size_t>(u.size());
  Mat N = Mat::Zero(m, m);
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t b = 0; b < m; ++b) N(a, i) += gamma[idx3(m, a, i, b)] * u[b];
  return N;
}

inline Mat connection_map(const ChartedManifold& M, const TangentPoint& tp) {
  M.require_inside(tp.x);
  return connection_map(christoffel(metric_fn(M), tp.x), tp.u);
}

inline Vec horizontal_lift(const Mat& N, const Vec& X) {
  Vec r(2 * X.size());
  r << X, -N * X;
  return r;
}
inline Vec vertical_lift(const Vec& X) {
  Vec r(2 * X.size());
  r << Vec::Zero(X.size()), X;
  return r;
}
inline Vec lift(const Mat& N, Lift k, const Vec& X) { return k == Lift::H ? horizontal_lift(N, X) : vertical_lift(X); }

inline Vec horizontal_lift(const ChartedManifold& M, const TangentPoint& tp, const Vec& X) {
  return horizontal_lift(connection_map(M, tp), X);
}
inline Vec vertical_lift(const ChartedManifold& M, const TangentPoint& tp, const Vec& X) {
  M.require_inside(tp.x);
  return vertical_lift(X);
}

inline LiftDecomposition decompose(const Mat& N, const Vec& Z) {
  const Eigen::Index m = N.rows();
  return {Z.head(m), Z.tail(m) + N * Z.head(m)};
}
inline Vec recompose(const Mat& N, const LiftDecomposition& d) { return horizontal_lift(N, d.hor) + vertical_lift(d.ver); }

inline LiftDecomposition decompose(const ChartedManifold& M, const TangentPoint& tp, const Vec& Z) {
  return decompose(connection_map(M, tp), Z);
}
inline Vec recompose(const ChartedManifold& M, const TangentPoint& tp, const LiftDecomposition& d) {
  return recompose(connection_map(M, tp), d);
}

/// The canonical vertical field U at (p, u): the vertical lift of u.
inline Vec canonical_U(const TangentPoint& tp) { return vertical_lift(tp.u); }

/// Assembled bundle metric as a metric field of dimension 2m.
class BundleMetric {
 public:
  BundleMetric(Variant v, ChartedManifold M, ScalingField f) : variant_(v), M_(std::move(M)), f_(std::move(f)) {
    if (f_.expr().dim() != M_.dim()) throw PreconditionError("scaling field dimension does not match manifold");
  }

  Variant variant() const noexcept { return variant_; }
  const ChartedManifold& base() const noexcept { return M_; }
  const ScalingField& scaling() const noexcept { return f_; }
  std::size_t dim() const noexcept { return 2 * M_.dim(); }

  static Vec point(const TangentPoint& tp) {
    Vec y(2 * tp.x.size());
    y << tp.x, tp.u;
    return y;
  }
  TangentPoint split(const Vec& y) const {
    const Eigen::Index m = static_cast<Eigen::Index>(M_.dim());
    return {y.head(m), y.tail(m)};
  }

  /// N^a_i as jets in all 2m variables.
  std::vector<Jet> connection_map_jets(const Vec& y, int order) const {
    const std::size_t m = M_.dim(), n = 2 * m;
    const TangentPoint tp = split(y);
    const std::vector<Jet> gamma = christoffel_jets(M_.metric_jets(tp.x, order + 1));
    std::vector<Jet> N(m * m, Jet(n, order, 0.0));
    for (std::size_t b = 0; b < m; ++b) {
      const Jet ub = Jet::variable(n, order, m + b, tp.u[b]);
      for (std::size_t a = 0; a < m; ++a)
        for (std::size_t i = 0; i < m; ++i) N[a * m + i] += gamma[idx3(m, a, i, b)].embedded(n) * ub;
    }
    return N;
  }

  /// The fiber block V as jets in all 2m variables.
  JetMatrix fiber_jets(const Vec& y, int order) const { return fiber_block(split(y), M_.metric_jets(split(y).x, order), order); }

  JetMatrix jets(const Vec& y, int order) const {
    if (order > kMaxJetOrder - 1) throw PreconditionError("bundle metric jets are available up to order 2");
    const std::size_t m = M_.dim(), n = 2 * m;
    const TangentPoint tp = split(y);
    const JetMatrix Gb = M_.metric_jets(tp.x, order + 1);
    const std::vector<Jet> gamma = christoffel_jets(Gb);
    const Jet f = f_.jet(tp.x, order).embedded(n);

    std::vector<Jet> U;
    for (std::size_t b = 0; b < m; ++b) U.push_back(Jet::variable(n, order, m + b, tp.u[b]));
    std::vector<Jet> N(m * m, Jet(n, order, 0.0));
    for (std::size_t a = 0; a < m; ++a)
      for (std::size_t i = 0; i < m; ++i)
        for (std::size_t b = 0; b < m; ++b) N[a * m + i] += gamma[idx3(m, a, i, b)].embedded(n) * U[b];

    const JetMatrix V = fiber_block(tp, truncated(Gb, order), order);
    // VN(a, i) = sum_b V(a, b) N(b, i) is also the [xu] block entry (i, a)
    std::vector<Jet> VN(m * m, Jet(n, order, 0.0));
    for (std::size_t a = 0; a < m; ++a)
      for (std::size_t i = 0; i < m; ++i)
        for (std::size_t b = 0; b < m; ++b) VN[a * m + i] += V(a, b) * N[b * m + i];

    JetMatrix H(n, Jet(n, order, 0.0));
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = i; j < m; ++j) {
        Jet s = f * Gb(i, j).truncated(order).embedded(n);
        for (std::size_t a = 0; a < m; ++a) s += N[a * m + i] * VN[a * m + j];
        H(i, j) = s;
        H(j, i) = std::move(s);
      }
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t a = 0; a < m; ++a) H(i, m + a) = H(m + a, i) = VN[a * m + i];
    for (std::size_t a = 0; a < m; ++a)
      for (std::size_t b = 0; b < m; ++b) H(m + a, m + b) = V(a, b);
    return H;
  }

  Mat value(const Vec& y) const { return jets(y, 0).values(); }
  Mat value(const TangentPoint& tp) const { return value(point(tp)); }

  MetricFn metric_fn() const {
    return MetricFn{dim(), [this](const Vec& y, int order) { return jets(y, order); }};
  }

 private:
  // V(a,b) in 2m variables from base metric jets in m variables.
  JetMatrix fiber_block(const TangentPoint& tp, const JetMatrix& Gb, int order) const {
    const std::size_t m = M_.dim(), n = 2 * m;
    JetMatrix V(m, Jet(n, order, 0.0));
    for (std::size_t a = 0; a < m; ++a)
      for (std::size_t b = 0; b < m; ++b) V(a, b) = Gb(a, b).truncated(order).embedded(n);
    if (variant_ == Variant::Sasaki) return V;
    std::vector<Jet> U, Gu(m, Jet(n, order, 0.0));
    for (std::size_t b = 0; b < m; ++b) U.push_back(Jet::variable(n, order, m + b, tp.u[b]));
    for (std::size_t a = 0; a < m; ++a)
      for (std::size_t b = 0; b < m; ++b) Gu[a] += V(a, b) * U[b];
    Jet alpha(n, order, 1.0);
    for (std::size_t a = 0; a < m; ++a) alpha += U[a] * Gu[a];
    const Jet inv_alpha = reciprocal(alpha);
    JetMatrix W(m, Jet(n, order, 0.0));
    for (std::size_t a = 0; a < m; ++a)
      for (std::size_t b = a; b < m; ++b) W(a, b) = W(b, a) = (V(a, b) + Gu[a] * Gu[b]) * inv_alpha;
    return W;
  }

  Variant variant_;
  ChartedManifold M_;
  ScalingField f_;
};

inline BundleMetric assemble(Variant v, const ChartedManifold& M, const ScalingField& f) { return BundleMetric(v, M, f); }

}  // namespace tbgeom
