#pragma once

// Geodesics of TM (fixed-step RK4 on the assembled metric) and residual
// probes for lifted base curves.

#include <cmath>
#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "tbgeom/bundle.hpp"
#include "tbgeom/errors.hpp"
#include "tbgeom/local_geometry.hpp"
#include "tbgeom/manifold.hpp"
#include "tbgeom/riemann.hpp"

namespace tbgeom {

struct BundleState {
  Vec x, u, xdot, udot;
  double t = 0.0;
};

struct Trajectory {
  double h = 0.0;
  std::vector<BundleState> states;
  std::vector<double> energy;

  double max_relative_energy_drift() const {
    double worst = 0.0;
    const double e0 = energy.front();
    for (double e : energy) worst = std::max(worst, std::abs(e - e0) / std::abs(e0));
    return worst;
  }
};

namespace detail {

inline void require_finite(const Vec& v, double t) {
  if (!v.allFinite()) throw NonFiniteState("non-finite state at t=" + std::to_string(t));
}

/// Classic RK4 for y'' = -Gamma(y', y') on a metric field; calls `visit`
/// after every step with the new position and velocity.
template <class Visit>
void rk4_geodesic(const MetricFn& mf, Vec y, Vec v, double t_end, double h, const std::function<bool(const Vec&)>& inside,
                  Visit&& visit) {
  if (!(h > 0.0)) throw PreconditionError("step size must be positive");
  if (!(t_end >= 0.0)) throw PreconditionError("end time must be non-negative");
  require_finite(y, 0.0);
  require_finite(v, 0.0);
  const long steps = std::lround(t_end / h);
  auto acc = [&](const Vec& yy, const Vec& vv) { return geodesic_rhs(mf, yy, vv).second; };
  for (long s = 1; s <= steps; ++s) {
    const double t = static_cast<double>(s) * h;
    const Vec k1y = v, k1v = acc(y, v);
    require_finite(k1v, t - h);
    const Vec y2 = y + 0.5 * h * k1y, v2 = v + 0.5 * h * k1v;
    if (!inside(y2)) throw ChartExit(t - 0.5 * h);
    const Vec k2y = v2, k2v = acc(y2, v2);
    const Vec y3 = y + 0.5 * h * k2y, v3 = v + 0.5 * h * k2v;
    if (!inside(y3)) throw ChartExit(t - 0.5 * h);
    const Vec k3y = v3, k3v = acc(y3, v3);
    const Vec y4 = y + h * k3y, v4 = v + h * k3v;
    if (!inside(y4)) throw ChartExit(t);
    const Vec k4y = v4, k4v = acc(y4, v4);
    y += (h / 6.0) * (k1y + 2.0 * k2y + 2.0 * k3y + k4y);
    v += (h / 6.0) * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
    require_finite(y, t);
    require_finite(v, t);
    if (!inside(y)) throw ChartExit(t);
    visit(t, y, v);
  }
}

}  // namespace detail

/// Integrates a geodesic of the bundle metric from s0 over [0, t_end].
inline Trajectory integrate(const BundleMetric& bm, const BundleState& s0, double t_end, double h) {
  const std::size_t m = bm.base().dim();
  const auto em = static_cast<Eigen::Index>(m);
  const MetricFn mf = bm.metric_fn();
  Trajectory tr;
  tr.h = h;
  Vec y(2 * m), v(2 * m);
  y << s0.x, s0.u;
  v << s0.xdot, s0.udot;
  auto inside = [&](const Vec& yy) { return bm.base().contains(yy.head(em)); };
  if (!inside(y)) throw OutsideChart("start point outside chart");
  auto record = [&](double t, const Vec& yy, const Vec& vv) {
    tr.states.push_back({yy.head(em), yy.tail(em), vv.head(em), vv.tail(em), t});
    tr.energy.push_back(vv.dot(bm.value(yy) * vv));
  };
  record(s0.t, y, v);
  detail::rk4_geodesic(mf, y, v, t_end, h, inside, [&](double t, const Vec& yy, const Vec& vv) { record(s0.t + t, yy, vv); });
  return tr;
}

/// Bundle acceleration (xddot, uddot) at a state.
inline std::pair<Vec, Vec> bundle_accel(const BundleMetric& bm, const BundleState& s) {
  const std::size_t m = bm.base().dim();
  const auto em = static_cast<Eigen::Index>(m);
  Vec y(2 * m), v(2 * m);
  y << s.x, s.u;
  v << s.xdot, s.udot;
  const Vec a = geodesic_rhs(bm.metric_fn(), y, v).second;
  return {a.head(em), a.tail(em)};
}

/// Position, velocity, acceleration and jerk of a base geodesic at (x, v):
/// x'' = -Gamma(v, v), x''' = -(dGamma . v)(v, v) - 2 Gamma(x'', v).
inline CurveJet geodesic_jet(const ChartedManifold& M, const Vec& x, const Vec& v) {
  const std::size_t m = M.dim();
  const std::vector<Jet> gamma = christoffel_jets(M.metric_jets(x, 2));
  const std::vector<double> gv = values(gamma);
  CurveJet c{x, v, -contract_gamma(gv, v, v), Vec::Zero(m)};
  std::vector<double> vv(v.data(), v.data() + v.size());
  Vec dg = Vec::Zero(m);
  for (std::size_t k = 0; k < m; ++k)
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < m; ++j) dg[k] += gamma[idx3(m, k, i, j)].directional_value(vv) * v[i] * v[j];
  c.j = -dg - 2.0 * contract_gamma(gv, c.a, v);
  return c;
}

/// Samples a base geodesic every h up to t_end, each node re-jetted from the
/// geodesic equation itself.
inline std::vector<CurveJet> base_geodesic(const ChartedManifold& M, const Vec& x0, const Vec& v0, double t_end,
                                           double h) {
  std::vector<CurveJet> out{geodesic_jet(M, x0, v0)};
  auto inside = [&](const Vec& y) { return M.contains(y); };
  detail::rk4_geodesic(metric_fn(M), x0, v0, t_end, h, inside,
                       [&](double, const Vec& y, const Vec& v) { out.push_back(geodesic_jet(M, y, v)); });
  return out;
}

/// Straight coordinate line x0 + s v.
inline std::vector<CurveJet> line_curve(const Vec& x0, const Vec& v, const std::vector<double>& s) {
  std::vector<CurveJet> out;
  const Vec z = Vec::Zero(x0.size());
  for (double t : s) out.push_back({x0 + t * v, v, z, z});
  return out;
}

/// Circle of radius rho in the (x_1, x_2) coordinate plane centred at c.
inline std::vector<CurveJet> circle_curve(const Vec& c, double rho, const std::vector<double>& s) {
  std::vector<CurveJet> out;
  for (double t : s) {
    Vec p = c, v = Vec::Zero(c.size()), a = Vec::Zero(c.size()), j = Vec::Zero(c.size());
    const double co = std::cos(t), si = std::sin(t);
    p[0] += rho * co, p[1] += rho * si;
    v[0] = -rho * si, v[1] = rho * co;
    a[0] = -rho * co, a[1] = -rho * si;
    j[0] = rho * si, j[1] = -rho * co;
    out.push_back({p, v, a, j});
  }
  return out;
}

/// Geodesic defect of the lift s -> (x(s), x'(s)) at one curve point.
struct LiftResidual {
  double oracle = 0.0;      // |nabla_T T| in the bundle metric
  double a = 0.0, b = 0.0;  // base norms of the two components below
  Vec a_vec, b_vec;         // horizontal and vertical parts from base data
  FrameResult oracle_parts; // decomposition of the oracle's nabla_T T
};

inline LiftResidual lift_residual(const BundleMetric& bm, const CurveJet& c) {
  const ChartedManifold& M = bm.base();
  const std::size_t m = M.dim();
  const TangentPoint tp{c.x, c.v};
  const Vec y = BundleMetric::point(tp);
  Vec T(2 * m), dT(2 * m);
  T << c.v, c.a;
  dT << c.a, c.j;
  const Vec acc = dT + contract_gamma(christoffel(bm.metric_fn(), y), T, T);
  LiftResidual r;
  r.oracle = std::sqrt(std::max(0.0, acc.dot(bm.value(y) * acc)));
  r.oracle_parts = decompose(connection_map(M, tp), acc);

  const LocalGeometry L(M, bm.scaling(), tp);
  const Vec& v = c.v;
  const Vec nv = c.a + L.Gamma(v, v);  // nabla_{x'} y with y = x'
  std::vector<double> vs(v.data(), v.data() + v.size());
  Vec dnv = c.j + L.Gamma(c.a, v) + L.Gamma(v, c.a);
  for (std::size_t k = 0; k < m; ++k)
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < m; ++j) dnv[k] += L.gamma_jets()[idx3(m, k, i, j)].directional_value(vs) * v[i] * v[j];
  r.b_vec = dnv + L.Gamma(v, nv);
  r.a_vec = nv + L.R(v, nv, v) / L.f() + L.A(v, v);
  r.a = std::sqrt(L.norm2(r.a_vec));
  r.b = std::sqrt(L.norm2(r.b_vec));
  return r;
}

inline std::vector<LiftResidual> lift_residual(const BundleMetric& bm, const std::vector<CurveJet>& curve) {
  std::vector<LiftResidual> out;
  for (const auto& c : curve) out.push_back(lift_residual(bm, c));
  return out;
}

struct ConstantSpeedReport {
  bool applicable = false;
  double speed_drift = 0.0;  // max | |u(t)| - |u(0)| |
  double residual = 0.0;     // max |x'' + Gamma(x',x') + A(x',x')|
};

inline ConstantSpeedReport constant_speed_check(const BundleMetric& bm, const Trajectory& tr) {
  const ChartedManifold& M = bm.base();
  ConstantSpeedReport rep;
  const double r0 = std::sqrt(inner(M, tr.states.front().x, tr.states.front().u, tr.states.front().u));
  for (const auto& s : tr.states)
    rep.speed_drift = std::max(rep.speed_drift, std::abs(std::sqrt(inner(M, s.x, s.u, s.u)) - r0));
  rep.applicable = rep.speed_drift <= 1e-6;
  if (!rep.applicable) return rep;
  for (const auto& s : tr.states) {
    const LocalGeometry L(M, bm.scaling(), {s.x, s.u});
    const Vec w = bundle_accel(bm, s).first + L.Gamma(s.xdot, s.xdot) + L.A(s.xdot, s.xdot);
    rep.residual = std::max(rep.residual, std::sqrt(L.norm2(w)));
  }
  return rep;
}

/// Base covariant acceleration of the projection of a TM trajectory.
inline double submersion_check(const BundleMetric& bm, const Trajectory& tr) {
  const ChartedManifold& M = bm.base();
  const MetricFn mf = metric_fn(M);
  double worst = 0.0;
  for (const auto& s : tr.states) {
    const Vec w = bundle_accel(bm, s).first + contract_gamma(christoffel(mf, s.x), s.xdot, s.xdot);
    worst = std::max(worst, std::sqrt(inner(M, s.x, w, w)));
  }
  return worst;
}

struct TwoGeodesicReport {
  double residual1 = 0.0, residual2 = 0.0;  // max oracle lift defect along each
  double grad_norm = 0.0;                   // |grad f| at the shared start
};

/// Lifts two base geodesics leaving p along non-parallel v1, v2 and measures
/// how far each lift is from a geodesic of TM.
inline TwoGeodesicReport two_geodesic_probe(const BundleMetric& bm, const Vec& p, const Vec& v1, const Vec& v2,
                                            double t_end = 0.2, double h = 0.01) {
  const ChartedManifold& M = bm.base();
  const Mat G = M.metric(p);
  const double a = v1.dot(G * v1), b = v2.dot(G * v2), c = v1.dot(G * v2);
  if (!(a * b - c * c >= 1e-10)) throw ParallelVectors("initial vectors are parallel");
  TwoGeodesicReport rep;
  for (const auto& r : lift_residual(bm, base_geodesic(M, p, v1, t_end, h))) rep.residual1 = std::max(rep.residual1, r.oracle);
  for (const auto& r : lift_residual(bm, base_geodesic(M, p, v2, t_end, h))) rep.residual2 = std::max(rep.residual2, r.oracle);
  const Vec g = grad_f(M, bm.scaling(), p);
  rep.grad_norm = std::sqrt(g.dot(G * g));
  return rep;
}

}  // namespace tbgeom
