#pragma once

// Coordinate Riemannian calculus for a metric given as jets.
//
// Conventions used everywhere in the library:
//   gamma[(k*n + i)*n + j]            = Gamma^k_{ij}
//   R[((l*n + i)*n + j)*n + k]        = R^l_{ijk} = (R(d_i, d_j) d_k)^l
//   R(X,Y)Z = nabla_X nabla_Y Z - nabla_Y nabla_X Z - nabla_[X,Y] Z
// so R^l_{ijk} = d_i Gamma^l_{jk} - d_j Gamma^l_{ik}
//              + Gamma^l_{im} Gamma^m_{jk} - Gamma^l_{jm} Gamma^m_{ik}.

#include <cmath>
#include <cstddef>
#include <functional>
#include <utility>
#include <vector>

#include "tbgeom/errors.hpp"
#include "tbgeom/jet.hpp"
#include "tbgeom/linalg.hpp"

namespace tbgeom {

/// A metric field over R^n, evaluable as jets of the requested order.
struct MetricFn {
  std::size_t n = 0;
  std::function<JetMatrix(const Vec& y, int order)> eval;
};

inline std::size_t idx3(std::size_t n, std::size_t a, std::size_t b, std::size_t c) { return (a * n + b) * n + c; }
inline std::size_t idx4(std::size_t n, std::size_t a, std::size_t b, std::size_t c, std::size_t d) {
  return ((a * n + b) * n + c) * n + d;
}

/// Christoffel symbols as jets one order below the metric jets.
inline std::vector<Jet> christoffel_jets(const JetMatrix& G) {
  const std::size_t n = G.size();
  const std::size_t dim = G(0, 0).dim();
  const int order = G(0, 0).order();
  if (order < 1) throw PreconditionError("christoffel symbols need first derivatives of the metric");
  const JetMatrix Ginv = invert_symmetric(truncated(G, order - 1));
  // dg[(l*n + i)*n + j] = d_l g_ij
  std::vector<Jet> dg(n * n * n);
  for (std::size_t l = 0; l < n; ++l)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i; j < n; ++j) dg[idx3(n, l, i, j)] = dg[idx3(n, l, j, i)] = G(i, j).partial(l);
  std::vector<Jet> gamma(n * n * n, Jet(dim, order - 1, 0.0));
  std::vector<Jet> lowered(n);  // Gamma_{l,ij} for fixed i, j
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) {
      for (std::size_t l = 0; l < n; ++l) {
        lowered[l] = dg[idx3(n, i, j, l)] + dg[idx3(n, j, i, l)] - dg[idx3(n, l, i, j)];
        lowered[l] *= 0.5;
      }
      for (std::size_t k = 0; k < n; ++k) {
        Jet s(dim, order - 1, 0.0);
        for (std::size_t l = 0; l < n; ++l) s += Ginv(k, l) * lowered[l];
        gamma[idx3(n, k, i, j)] = s;
        gamma[idx3(n, k, j, i)] = std::move(s);
      }
    }
  return gamma;
}

/// Riemann tensor as jets one order below the Christoffel jets.
inline std::vector<Jet> riemann_jets(const std::vector<Jet>& gamma, std::size_t n) {
  const std::size_t dim = gamma[0].dim();
  const int order = gamma[0].order();
  if (order < 1) throw PreconditionError("curvature needs derivatives of the Christoffel symbols");
  std::vector<Jet> g0(gamma.size());
  for (std::size_t a = 0; a < gamma.size(); ++a) g0[a] = gamma[a].truncated(order - 1);
  std::vector<Jet> R(n * n * n * n, Jet(dim, order - 1, 0.0));
  for (std::size_t l = 0; l < n; ++l)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j)
        for (std::size_t k = 0; k < n; ++k) {
          Jet s = gamma[idx3(n, l, j, k)].partial(i) - gamma[idx3(n, l, i, k)].partial(j);
          for (std::size_t p = 0; p < n; ++p) {
            s += g0[idx3(n, l, i, p)] * g0[idx3(n, p, j, k)];
            s -= g0[idx3(n, l, j, p)] * g0[idx3(n, p, i, k)];
          }
          R[idx4(n, l, j, i, k)] = -s;
          R[idx4(n, l, i, j, k)] = std::move(s);
        }
  return R;
}

inline std::vector<double> values(const std::vector<Jet>& js) {
  std::vector<double> v(js.size());
  for (std::size_t a = 0; a < js.size(); ++a) v[a] = js[a].value();
  return v;
}

/// Gamma^k_{ij} at y from first-order metric jets and a plain inverse.
inline std::vector<double> christoffel(const MetricFn& mf, const Vec& y) {
  const std::size_t n = mf.n;
  const JetMatrix G = mf.eval(y, 1);
  const Mat Ginv = invert(G.values());
  std::vector<double> gamma(n * n * n, 0.0);
  std::vector<double> lowered(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) {
      for (std::size_t l = 0; l < n; ++l)
        lowered[l] = 0.5 * (G(j, l).d(i) + G(i, l).d(j) - G(i, j).d(l));
      for (std::size_t k = 0; k < n; ++k) {
        double s = 0.0;
        for (std::size_t l = 0; l < n; ++l) s += Ginv(k, l) * lowered[l];
        gamma[idx3(n, k, i, j)] = gamma[idx3(n, k, j, i)] = s;
      }
    }
  return gamma;
}

inline std::vector<double> riemann(const MetricFn& mf, const Vec& y) {
  return values(riemann_jets(christoffel_jets(mf.eval(y, 2)), mf.n));
}

/// Gamma(a, b)^k = Gamma^k_{ij} a^i b^j.
inline Vec contract_gamma(const std::vector<double>& gamma, const Vec& a, const Vec& b) {
  const std::size_t n = static_cast<std::size_t>(a.size());
  Vec r = Vec::Zero(n);
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i) {
      if (a[i] == 0.0) continue;
      double s = 0.0;
      for (std::size_t j = 0; j < n; ++j) s += gamma[idx3(n, k, i, j)] * b[j];
      r[k] += a[i] * s;
    }
  return r;
}

/// R(a, b)c.
inline Vec contract_riemann(const std::vector<double>& R, const Vec& a, const Vec& b, const Vec& c) {
  const std::size_t n = static_cast<std::size_t>(a.size());
  Vec r = Vec::Zero(n);
  for (std::size_t l = 0; l < n; ++l) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        const double ab = a[i] * b[j];
        if (ab == 0.0) continue;
        for (std::size_t k = 0; k < n; ++k) s += R[idx4(n, l, i, j, k)] * ab * c[k];
      }
    r[l] = s;
  }
  return r;
}

/// <R(v,w)w, v> / (|v|^2 |w|^2 - <v,w>^2).
inline double sectional_from(const Mat& G, const std::vector<double>& R, const Vec& v, const Vec& w) {
  const double vv = v.dot(G * v), ww = w.dot(G * w), vw = v.dot(G * w);
  const double det = vv * ww - vw * vw;
  if (!(det > 1e-12 * std::max(1.0, vv * ww))) throw DegeneratePlane("vectors span a degenerate plane");
  return contract_riemann(R, v, w, w).dot(G * v) / det;
}

inline double sectional(const MetricFn& mf, const Vec& y, const Vec& v, const Vec& w) {
  return sectional_from(mf.eval(y, 0).values(), riemann(mf, y), v, w);
}

/// g^{jk} Ric_{jk} with Ric_{jk} = R^i_{ijk}.
inline double scalar_from(const Mat& Ginv, const std::vector<double>& R, std::size_t n) {
  double s = 0.0;
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t k = 0; k < n; ++k) {
      double ric = 0.0;
      for (std::size_t i = 0; i < n; ++i) ric += R[idx4(n, i, i, j, k)];
      s += Ginv(j, k) * ric;
    }
  return s;
}

inline double scalar(const MetricFn& mf, const Vec& y) {
  return scalar_from(invert(mf.eval(y, 0).values()), riemann(mf, y), mf.n);
}

/// (nabla_i V)^k = d_i V^k + Gamma^k_{ij} V^j for a vector field given as
/// jets in the same variables as the metric. Column i holds nabla_i V.
inline Mat covariant_deriv_field(const MetricFn& mf, const Vec& y, const std::vector<Jet>& field) {
  const std::size_t n = mf.n;
  const std::vector<double> gamma = christoffel(mf, y);
  Mat out(n, n);
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i) {
      double s = field[k].d(i);
      for (std::size_t j = 0; j < n; ++j) s += gamma[idx3(n, k, i, j)] * field[j].value();
      out(k, i) = s;
    }
  return out;
}

/// Position, velocity, acceleration and jerk of a curve at one parameter.
struct CurveJet {
  Vec x, v, a, j;
};

/// x'' + Gamma(x', x'): the covariant acceleration of a curve.
inline Vec curve_accel(const MetricFn& mf, const CurveJet& c) {
  return c.a + contract_gamma(christoffel(mf, c.x), c.v, c.v);
}

/// First-order geodesic system: (y', v') = (v, -Gamma(v, v)).
inline std::pair<Vec, Vec> geodesic_rhs(const MetricFn& mf, const Vec& y, const Vec& v) {
  return {v, -contract_gamma(christoffel(mf, y), v, v)};
}

/// Metric field of a charted base manifold.
template <class Manifold>
MetricFn metric_fn(const Manifold& M) {
  return MetricFn{M.dim(), [&M](const Vec& y, int order) { return M.metric_jets(y, order); }};
}

}  // namespace tbgeom
