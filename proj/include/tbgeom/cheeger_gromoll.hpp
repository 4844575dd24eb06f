#pragma once

// Closed-form geometry of TM with the rescaled Cheeger-Gromoll metric
//   g(X^h, Y^h) = f g(X, Y),  g(X^h, Y^v) = 0,
//   g(X^v, Y^v) = (g(X, Y) + g(X, u) g(Y, u)) / alpha,  alpha = 1 + |u|^2.
//
// The curvature and sectional formulas are evaluated as written, including
// the places where alternative coefficient readings exist; callers pick the
// reading with the enums below. U denotes the vertical lift of u, and
// g(W^v, U) = g(W, u).

#include <cmath>
#include <vector>

#include "tbgeom/bundle.hpp"
#include "tbgeom/errors.hpp"
#include "tbgeom/local_geometry.hpp"
#include "tbgeom/manifold.hpp"
#include "tbgeom/sasaki.hpp"

namespace tbgeom::cg {

inline FrameResult connection(const LocalGeometry& L, Lift a, const Vec& X, Lift b, const Vec& Y) {
  const double f = L.f(), al = L.alpha();
  const Vec& u = L.u();
  if (a == Lift::H && b == Lift::H) return sasaki::connection(L, a, X, b, Y);
  FrameResult r = FrameResult::zero(L.dim());
  if (a == Lift::H) {
    r.ver = L.nabla_const(X, Y);
    r.hor = L.R(u, Y, X) / (2 * al * f);
  } else if (b == Lift::H) {
    r.hor = L.R(u, X, Y) / (2 * al * f);
  } else {
    const double gx = L.g(X, u), gy = L.g(Y, u);
    r.ver = -(gx * Y + gy * X) / al + ((1 + al) / al) * L.V_cg(X, Y) * u - (gx * gy / al) * u;
  }
  return r;
}

/// Direction of the first derivative term in R(X^h,Y^h)Z^v: the formula as
/// stated differentiates along Z, its derivation along X.
enum class HhvDerivative { AlongZ, AlongX };

inline FrameResult curvature(const LocalGeometry& L, Pattern p, const Vec& X, const Vec& Y, const Vec& Z,
                             HhvDerivative hhv = HhvDerivative::AlongZ) {
  const std::size_t m = L.dim();
  const double f = L.f(), al = L.alpha();
  const Vec& u = L.u();
  FrameResult r = FrameResult::zero(m);
  switch (p) {
    case Pattern::HHH: {
      const Field U = L.parallel_u();
      const Field Xf = L.constant(X), Yf = L.constant(Y), Zf = L.constant(Z);
      const Field WY = LocalGeometry::sum(L.Gamma(Yf, Zf), L.A(Yf, Zf));
      const Field WX = LocalGeometry::sum(L.Gamma(Xf, Zf), L.A(Xf, Zf));
      const Vec wy = LocalGeometry::value(WY), wx = LocalGeometry::value(WX);
      r.hor = L.nabla(X, WY) + L.A(X, wy) - L.nabla(Y, WX) - L.A(Y, wx) + L.R(u, L.R(X, Y, u), Z) / (2 * al * f) +
              L.R(u, L.R(X, Z, u), Y) / (4 * al * f) - L.R(u, L.R(Y, Z, u), X) / (4 * al * f);
      r.ver = -0.5 * L.R(X, wy, u) + 0.5 * L.R(Y, wx, u) + 0.5 * L.nabla(Y, L.R(Xf, Zf, U)) -
              0.5 * L.nabla(X, L.R(Yf, Zf, U));
      break;
    }
    case Pattern::HHV: {
      const Field U = L.parallel_u();
      const Field FY = LocalGeometry::scaled(L.inv_f_jet(), L.R(U, L.constant(Z), L.constant(Y)));
      const Field FX = LocalGeometry::scaled(L.inv_f_jet(), L.R(U, L.constant(Z), L.constant(X)));
      const Vec& D = hhv == HhvDerivative::AlongZ ? Z : X;
      const Vec rxy_u = L.R(X, Y, u);
      r.hor = (L.nabla(D, FY) - L.nabla(Y, FX)) / (2 * al) +
              (L.A(X, L.R(u, Z, Y) / (2 * f)) - L.A(Y, L.R(u, Z, X) / (2 * f))) / al;
      r.ver = L.R(X, Y, Z) - (L.R(X, L.R(u, Z, Y), u) - L.R(Y, L.R(u, Z, X), u)) / (4 * al * f) -
              (L.g(Z, u) / al) * rxy_u + ((1 + al) / al) * L.V_cg(rxy_u, Z) * u;
      break;
    }
    case Pattern::HVH: {
      const Field U = L.parallel_u();
      const Field W = LocalGeometry::scaled(L.inv_f_jet(), L.R(U, L.constant(Y), L.constant(Z)));
      const Vec w = LocalGeometry::value(W);
      const Vec rxz_u = L.R(X, Z, u);
      const double gy = L.g(Y, u), gr = L.g(rxz_u, u);
      // (1/2 alpha) times the horizontal-horizontal connection applied to W^h
      r.hor = (L.nabla(X, W) + L.A(X, w)) / (2 * al);
      r.ver = -0.5 * L.R(X, w, u) / (2 * al);
      r.hor += -L.R(u, L.nabla_const(X, Y), Z) / (2 * al * f) - L.R(u, Y, L.nabla_const(X, Z)) / (2 * al * f) -
               L.R(u, Y, L.A(X, Z)) / (2 * al * f);
      r.ver += 0.5 * L.R(X, Z, Y) - (gy / (2 * al)) * rxz_u - (gr / (2 * al)) * Y +
               ((1 + al) / (2 * al)) * L.V_cg(rxz_u, Y) * u - (gy * gr / (2 * al)) * u;
      break;
    }
    case Pattern::HVV:
      r.hor = -L.R(Y, Z, X) / (2 * al * f) - L.R(u, Y, L.R(u, Z, X)) / (4 * al * al * f * f) +
              (L.g(Y, u) * L.R(u, Z, X) - L.g(Z, u) * L.R(u, Y, X)) / (2 * al * al * f);
      break;
    case Pattern::VVH:
      r.hor = -L.R(X, Y, Z) / (2 * al * f) - L.R(u, X, L.R(u, Y, Z)) / (4 * al * al * f * f) +
              L.R(Y, X, Z) / (2 * al * f) + L.R(u, Y, L.R(u, X, Z)) / (4 * al * al * f * f);
      break;
    case Pattern::VVV: {
      const double c1 = (1 + al + al * al) / (al * al), c2 = (2 + al) / (al * al);
      const double a = L.g(X, u), b = L.g(Y, u), c = L.g(Z, u);
      const double vyz = L.V_cg(Y, Z), vxz = L.V_cg(X, Z);
      r.ver = c1 * (vyz * X - vxz * Y) + c2 * (vxz * b - vyz * a) * u + c2 * (a * c * Y - b * c * X);
      break;
    }
  }
  return r;
}

/// Squared area of the plane spanned by lifts of g-orthonormal X, Y.
inline double q_area(const LocalGeometry& L, Plane p, const Vec& X, const Vec& Y) {
  const double f = L.f(), al = L.alpha();
  const double a = L.g(X, L.u()), b = L.g(Y, L.u());
  switch (p) {
    case Plane::HH: return f * f;
    case Plane::HV: return f / al * (1 + b * b);
    case Plane::VV: return (1 + a * a + b * b) / (al * al);
  }
  return 0.0;
}

/// |V|^2 |W|^2 - <V, W>^2 straight from a metric matrix.
inline double q_area_direct(const Mat& H, const Vec& V, const Vec& W) {
  const double vv = V.dot(H * V), ww = W.dot(H * W), vw = V.dot(H * W);
  return vv * ww - vw * vw;
}

/// Closed form of g(R(V,W)W, V) for lifts of g-orthonormal X, Y. The
/// horizontal correction term uses the Sasaki L_f.
inline double g_form(const LocalGeometry& L, Plane p, const Vec& X, const Vec& Y) {
  const double f = L.f(), al = L.alpha();
  const Vec& u = L.u();
  const double a = L.g(X, u), b = L.g(Y, u);
  switch (p) {
    case Plane::HH:
      return L.K(X, Y) / f - 3.0 * L.norm2(L.R(X, Y, u)) / (4 * al * al * f * f) + sasaki::l_f(L, X, Y);
    case Plane::HV: return L.norm2(L.R(u, Y, X)) / (4 * al * al * f * f);
    case Plane::VV:
      return (1 + al + al * al) / (al * al) * q_area(L, Plane::VV, X, Y) - (2 + al) / (al * al * al) * (a * a + b * b);
  }
  return 0.0;
}

/// Coefficient of |R(X,Y)u|^2 in the horizontal sectional curvature: as
/// stated 3/(4 alpha f^4), or 3/(4 alpha^2 f^4) as obtained by dividing the
/// curvature form by the area.
enum class HhCoefficient { Stated, FromAreaDivision };

inline double sectional(const LocalGeometry& L, Plane p, const Vec& X, const Vec& Y,
                        HhCoefficient hh = HhCoefficient::Stated) {
  const double f = L.f(), al = L.alpha();
  const Vec& u = L.u();
  const double a = L.g(X, u), b = L.g(Y, u);
  switch (p) {
    case Plane::HH: {
      const double c = hh == HhCoefficient::Stated ? al : al * al;
      return L.K(X, Y) / (f * f * f) - 3.0 * L.norm2(L.R(X, Y, u)) / (4 * c * f * f * f * f) +
             sasaki::l_f(L, X, Y) / (f * f);
    }
    case Plane::HV: return L.norm2(L.R(u, Y, X)) / (4 * al * f * f * f * (1 + b * b));
    case Plane::VV: return (1 - al) / (al * al) + (2 + al) / al / (1 + a * a + b * b);
  }
  return 0.0;
}

/// Sectional curvature on a base of constant curvature kappa; gXu = g(X,u),
/// gYu = g(Y,u).
inline double sectional_constant_kappa(double kappa, double f, double gXu, double gYu, double alpha, Plane p,
                                       double l_tilde = 0.0) {
  switch (p) {
    case Plane::HH:
      return kappa / (f * f * f) - 3 * kappa * kappa * (gXu * gXu + gYu * gYu) / (4 * alpha * f * f * f * f) +
             l_tilde / (f * f);
    case Plane::HV: return kappa * kappa * gXu * gXu / (4 * alpha * f * f * f * (1 + gYu * gYu));
    case Plane::VV: return (1 - alpha) / (alpha * alpha) + (2 + alpha) / alpha / (1 + gXu * gXu + gYu * gYu);
  }
  return 0.0;
}

/// g-orthonormal base frame with e_1 = u/|u|, completed by Gram-Schmidt over
/// the coordinate vectors in index order.
inline std::vector<Vec> base_frame_along_u(const Mat& G, const Vec& u) {
  const std::size_t m = static_cast<std::size_t>(u.size());
  const double r = std::sqrt(u.dot(G * u));
  if (!(r > 1e-12)) throw ZeroFiber("adapted frame needs u != 0");
  std::vector<Vec> e{u / r};
  for (std::size_t i = 0; i < m && e.size() < m; ++i) {
    Vec v = Vec::Unit(m, i);
    const double n0 = std::sqrt(v.dot(G * v));
    for (const Vec& b : e) v -= b.dot(G * v) * b;
    const double n = std::sqrt(v.dot(G * v));
    if (n < 1e-3 * n0) continue;
    e.push_back(v / n);
  }
  return e;
}

struct AdaptedFrame {
  std::vector<Vec> base;  // e_1 .. e_m
  std::vector<Vec> t;     // 2m bundle vectors
};

/// Orthonormal frame of TM at (p, u): e_i^h / sqrt(f), e_1^v and
/// sqrt(alpha) e_k^v for k >= 2.
inline AdaptedFrame adapted_frame(const LocalGeometry& L, const Mat& N) {
  AdaptedFrame fr;
  fr.base = base_frame_along_u(L.G(), L.u());
  const double sf = std::sqrt(L.f()), sa = std::sqrt(L.alpha());
  for (const Vec& e : fr.base) fr.t.push_back(horizontal_lift(N, e) / sf);
  for (std::size_t k = 0; k < fr.base.size(); ++k)
    fr.t.push_back(k == 0 ? vertical_lift(fr.base[k]) : Vec(sa * vertical_lift(fr.base[k])));
  return fr;
}

inline AdaptedFrame adapted_frame(const ChartedManifold& M, const ScalingField& f, const TangentPoint& tp) {
  return adapted_frame(LocalGeometry(M, f, tp), connection_map(M, tp));
}

/// Sectional curvatures of the adapted frame planes (t_a, t_b), a < b, by
/// the frame formulas. Ordering matches adapted_frame().t.
inline Mat adapted_frame_sectionals(const LocalGeometry& L, const std::vector<Vec>& e) {
  const std::size_t m = e.size();
  const double f = L.f(), al = L.alpha();
  const Vec& u = L.u();
  Mat K = Mat::Zero(2 * m, 2 * m);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) {
      if (i != j)
        K(i, j) = L.K(e[i], e[j]) / (f * f * f) - 3 * L.norm2(L.R(e[i], e[j], u)) / (4 * al * f * f * f * f) +
                  sasaki::l_f(L, e[i], e[j]) / (f * f);
      K(i, m + j) = j == 0 ? 0.0 : L.norm2(L.R(u, e[j], e[i])) / (4 * f * f * f);
    }
  for (std::size_t k = 1; k < m; ++k) {
    K(m, m + k) = 3.0 / (al * al);
    for (std::size_t l = 1; l < m; ++l)
      if (l != k) K(m + k, m + l) = (al * al + al + 1) / (al * al);
  }
  for (std::size_t a = 0; a < 2 * m; ++a)
    for (std::size_t b = 0; b < a; ++b) K(a, b) = K(b, a);
  return K;
}

/// Scalar curvature of TM from a g-orthonormal base frame. `base_scaled`
/// selects S/f instead of S for the base term.
inline double scalar(const LocalGeometry& L, const std::vector<Vec>& e, bool base_scaled = false) {
  const double f = L.f(), al = L.alpha();
  const double m = static_cast<double>(e.size());
  double rsum = 0.0, lsum = 0.0;
  for (const Vec& a : e)
    for (const Vec& b : e) {
      rsum += L.norm2(L.R(a, b, L.u()));
      lsum += sasaki::l_f(L, a, b);
    }
  const double S = base_scaled ? L.scalar() / f : L.scalar();
  return S + (2 * al - 3) / (4 * al * f * f * f * f) * rsum + lsum / (f * f) +
         (m - 1) / (al * al) * (6 + (m - 2) * (al * al + al + 1));
}

}  // namespace tbgeom::cg
