#pragma once

// Closed-form connection and curvature of TM with the rescaled Sasaki metric
//   g(X^h, Y^h) = f g(X, Y),  g(X^h, Y^v) = 0,  g(X^v, Y^v) = g(X, Y).
//
// Formulas take base vectors; see local_geometry.hpp for how they are
// extended to fields. All brackets of the extended fields vanish, so every
// [X, Y] term drops out.

#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "tbgeom/bundle.hpp"
#include "tbgeom/errors.hpp"
#include "tbgeom/local_geometry.hpp"
#include "tbgeom/manifold.hpp"

namespace tbgeom {

/// Six slot patterns (A, B)C for the curvature of TM.
enum class Pattern { VVV, HVV, VVH, HVH, HHV, HHH };
/// Plane types for sectional curvature.
enum class Plane { HH, HV, VV };

inline const char* pattern_name(Pattern p) {
  switch (p) {
    case Pattern::VVV: return "vvv";
    case Pattern::HVV: return "hvv";
    case Pattern::VVH: return "vvh";
    case Pattern::HVH: return "hvh";
    case Pattern::HHV: return "hhv";
    case Pattern::HHH: return "hhh";
  }
  return "?";
}
inline const char* plane_name(Plane p) { return p == Plane::HH ? "hh" : p == Plane::HV ? "hv" : "vv"; }

inline Pattern parse_pattern(const std::string& s) {
  for (Pattern p : {Pattern::VVV, Pattern::HVV, Pattern::VVH, Pattern::HVH, Pattern::HHV, Pattern::HHH})
    if (s == pattern_name(p)) return p;
  throw PreconditionError("unknown pattern '" + s + "'");
}
inline Plane parse_plane(const std::string& s) {
  for (Plane p : {Plane::HH, Plane::HV, Plane::VV})
    if (s == plane_name(p)) return p;
  throw PreconditionError("unknown plane '" + s + "'");
}

/// Lift kinds of the three slots of a pattern.
inline std::array<Lift, 3> pattern_lifts(Pattern p) {
  const std::string s = pattern_name(p);
  std::array<Lift, 3> out{};
  for (int k = 0; k < 3; ++k) out[k] = s[k] == 'h' ? Lift::H : Lift::V;
  return out;
}
inline std::array<Lift, 2> plane_lifts(Plane p) {
  return {p == Plane::VV ? Lift::V : Lift::H, p == Plane::HH ? Lift::H : Lift::V};
}

/// (1/2f)(df(X) Y + df(Y) X - g(X,Y) grad f).
inline Vec a_f(const ChartedManifold& M, const ScalingField& f, const Vec& x, const Vec& X, const Vec& Y) {
  return LocalGeometry(M, f, {x, Vec::Zero(M.dim())}).A(X, Y);
}

namespace sasaki {

/// nabla_A B for pure lifts A = X^a, B = Y^b.
inline FrameResult connection(const LocalGeometry& L, Lift a, const Vec& X, Lift b, const Vec& Y) {
  const std::size_t m = L.dim();
  FrameResult r = FrameResult::zero(m);
  const Vec& u = L.u();
  const double f = L.f();
  if (a == Lift::H && b == Lift::H) {
    r.hor = L.nabla_const(X, Y) + L.A(X, Y);
    r.ver = -0.5 * L.R(X, Y, u);
  } else if (a == Lift::H) {
    r.ver = L.nabla_const(X, Y);
    r.hor = L.R(u, Y, X) / (2.0 * f);
  } else if (b == Lift::H) {
    r.hor = L.R(u, X, Y) / (2.0 * f);
  }
  return r;
}

/// Which coefficient reading to use where the formula for R(X^h,Y^v)Z^h is
/// stated in two ways: vertical term (1/2)(R(X,Z)u)^v, or (1/2f)(R(X,Z)Y)^v.
enum class HvhVertical { RXZu, RXZY };

inline FrameResult curvature(const LocalGeometry& L, Pattern p, const Vec& X, const Vec& Y, const Vec& Z,
                             HvhVertical hvh = HvhVertical::RXZu) {
  const std::size_t m = L.dim();
  FrameResult r = FrameResult::zero(m);
  const Vec& u = L.u();
  const double f = L.f();
  switch (p) {
    case Pattern::VVV: break;
    case Pattern::HVV:
      r.hor = -L.R(Y, Z, X) / (2 * f) - L.R(u, Y, L.R(u, Z, X)) / (4 * f * f);
      break;
    case Pattern::VVH:
      r.hor = -L.R(Y, X, Z) / (2 * f) - L.R(u, Y, L.R(u, X, Z)) / (4 * f * f) + L.R(X, Y, Z) / (2 * f) +
              L.R(u, X, L.R(u, Y, Z)) / (4 * f * f);
      break;
    case Pattern::HVH: {
      const Field U = L.parallel_u();
      const Field F1 = LocalGeometry::scaled(L.inv_f_jet() * 0.5, L.R(U, L.constant(Y), L.constant(Z)));
      const Vec f1 = LocalGeometry::value(F1);
      r.hor = L.nabla(X, F1) + L.A(X, f1) - L.R(u, Y, L.nabla_const(X, Z) + L.A(X, Z)) / (2 * f) -
              L.R(u, L.nabla_const(X, Y), Z) / (2 * f);
      r.ver = L.R(L.R(u, Y, Z), X, u) / (4 * f);
      r.ver += hvh == HvhVertical::RXZu ? Vec(0.5 * L.R(X, Z, u)) : Vec(L.R(X, Z, Y) / (2 * f));
      break;
    }
    case Pattern::HHV: {
      const Field U = L.parallel_u();
      const Jet half_inv_f = L.inv_f_jet() * 0.5;
      const Field FY = LocalGeometry::scaled(half_inv_f, L.R(U, L.constant(Z), L.constant(Y)));
      const Field FX = LocalGeometry::scaled(half_inv_f, L.R(U, L.constant(Z), L.constant(X)));
      r.hor = L.nabla(X, FY) - L.nabla(Y, FX) + L.A(X, L.R(u, Z, Y)) / (2 * f) - L.A(Y, L.R(u, Z, X)) / (2 * f) +
              L.R(u, L.nabla_const(Y, Z), X) / (2 * f) - L.R(u, L.nabla_const(X, Z), Y) / (2 * f);
      r.ver = L.R(L.R(u, Z, Y), X, u) / (4 * f) - L.R(L.R(u, Z, X), Y, u) / (4 * f) + L.R(X, Y, u);
      break;
    }
    case Pattern::HHH: {
      const Field U = L.parallel_u();
      const Field Xf = L.constant(X), Yf = L.constant(Y), Zf = L.constant(Z);
      // W_Y = nabla_Y Z + A(Y, Z), W_X = nabla_X Z + A(X, Z) as fields
      const Field WY = LocalGeometry::sum(L.Gamma(Yf, Zf), L.A(Yf, Zf));
      const Field WX = LocalGeometry::sum(L.Gamma(Xf, Zf), L.A(Xf, Zf));
      const Vec wy = LocalGeometry::value(WY), wx = LocalGeometry::value(WX);
      r.hor = L.nabla(X, WY) + L.A(X, wy) - L.nabla(Y, WX) - L.A(Y, wx) + L.R(u, L.R(X, Y, u), Z) / (2 * f) +
              L.R(u, L.R(X, Z, u), Y) / (4 * f) - L.R(u, L.R(Y, Z, u), X) / (4 * f);
      r.ver = -0.5 * L.R(X, wy, u) + 0.5 * L.R(Y, wx, u) + 0.5 * L.nabla(Y, L.R(Xf, Zf, U)) -
              0.5 * L.nabla(X, L.R(Yf, Zf, U));
      break;
    }
  }
  return r;
}

/// The correction term L_f(X, Y) of the horizontal sectional curvature, as
/// displayed: (1/f)( g(nabla_X A(Y,Y) - nabla_Y A(X,Y), X)
///   - g(A(X, nabla_Y Y + A(Y,Y)), X) - g(A(Y, nabla_X Y + A(X,Y)), X) ).
inline double l_f(const LocalGeometry& L, const Vec& X, const Vec& Y) {
  const Field Xf = L.constant(X), Yf = L.constant(Y);
  const Vec t1 = L.nabla(X, L.A(Yf, Yf)) - L.nabla(Y, L.A(Xf, Yf));
  const Vec t2 = L.A(X, L.nabla_const(Y, Y) + L.A(Y, Y));
  const Vec t3 = L.A(Y, L.nabla_const(X, Y) + L.A(X, Y));
  return (L.g(t1, X) - L.g(t2, X) - L.g(t3, X)) / L.f();
}

/// Sectional curvature for g-orthonormal X, Y. The formulas do not divide by
/// the area, so they can be evaluated formally for X = Y as well.
inline double sectional(const LocalGeometry& L, Plane p, const Vec& X, const Vec& Y) {
  const double f = L.f();
  const Vec& u = L.u();
  switch (p) {
    case Plane::VV: return 0.0;
    case Plane::HV: return L.norm2(L.R(u, Y, X)) / (4 * f * f);
    case Plane::HH: return L.K(X, Y) / f - 3.0 * L.norm2(L.R(X, Y, u)) / (4 * f * f) + l_f(L, X, Y);
  }
  return 0.0;
}

/// Scalar curvature of TM from a g-orthonormal frame of the base.
inline double scalar(const LocalGeometry& L, const std::vector<Vec>& frame) {
  const double f = L.f();
  double rsum = 0.0, lsum = 0.0;
  for (const Vec& a : frame)
    for (const Vec& b : frame) {
      rsum += L.norm2(L.R(a, b, L.u()));
      lsum += l_f(L, a, b);
    }
  return L.scalar() / f - rsum / (4 * f * f) + lsum;
}

/// Sum over the frame of the plane formulas: hh + 2 hv + vv for every
/// ordered pair, diagonal included.
inline double scalar_frame_sum(const LocalGeometry& L, const std::vector<Vec>& frame) {
  double s = 0.0;
  for (const Vec& a : frame)
    for (const Vec& b : frame)
      s += sectional(L, Plane::HH, a, b) + 2.0 * sectional(L, Plane::HV, a, b) + sectional(L, Plane::VV, a, b);
  return s;
}

/// Horizontal sectional formula at (x, t u) for each t.
inline std::vector<double> sectional_sweep(const ChartedManifold& M, const ScalingField& f, const TangentPoint& tp,
                                           const Vec& X, const Vec& Y, const std::vector<double>& t_grid) {
  std::vector<double> out;
  for (double t : t_grid) out.push_back(sectional(LocalGeometry(M, f, {tp.x, t * tp.u}), Plane::HH, X, Y));
  return out;
}

}  // namespace sasaki
}  // namespace tbgeom
