#pragma once

// Base-manifold data around one point of TM, arranged for evaluating the
// closed-form bundle formulas.
//
// Base vector fields are carried as m jets in the m chart variables. The
// vectors X, Y, Z of a formula are extended with constant coordinate
// components (so all their brackets vanish and nabla_X Y = Gamma(X, Y)), and
// the fiber vector u is extended parallel along every direction at x:
// d_i u^a = -Gamma^a_{ib} u^b. The oracle uses the same extensions for its
// lift fields, so non-tensorial intermediate terms pair up consistently.

#include <cmath>
#include <cstddef>
#include <vector>

#include "tbgeom/bundle.hpp"
#include "tbgeom/jet.hpp"
#include "tbgeom/linalg.hpp"
#include "tbgeom/manifold.hpp"
#include "tbgeom/riemann.hpp"

namespace tbgeom {

using Field = std::vector<Jet>;

class LocalGeometry {
 public:
  LocalGeometry(const ChartedManifold& M, const ScalingField& f, const TangentPoint& tp)
      : m_(M.dim()), x_(tp.x), u_(tp.u) {
    if (static_cast<std::size_t>(tp.u.size()) != m_) throw PreconditionError("fiber vector has wrong dimension");
    G_ = M.metric_jets(tp.x, 3);
    Gval_ = G_.values();
    Ginv_ = invert_symmetric(truncated(G_, 2));
    Ginv_val_ = Ginv_.values();
    gamma_ = christoffel_jets(G_);
    gamma_val_ = values(gamma_);
    R_ = riemann_jets(gamma_, m_);
    R_val_ = values(R_);
    f_ = f.jet(tp.x, 3);
    inv_f_ = reciprocal(f_);
    df_.resize(m_);
    for (std::size_t i = 0; i < m_; ++i) df_[i] = f_.partial(i);
    grad_.assign(m_, Jet(m_, 2, 0.0));
    for (std::size_t k = 0; k < m_; ++k)
      for (std::size_t l = 0; l < m_; ++l) grad_[k] += Ginv_(k, l) * df_[l];
    gu_ = Gval_ * u_;
    alpha_ = 1.0 + u_.dot(gu_);
  }

  std::size_t dim() const noexcept { return m_; }
  const Vec& x() const noexcept { return x_; }
  const Vec& u() const noexcept { return u_; }
  const Mat& G() const noexcept { return Gval_; }
  const Mat& Ginv() const noexcept { return Ginv_val_; }
  const std::vector<double>& gamma() const noexcept { return gamma_val_; }
  const std::vector<double>& riemann() const noexcept { return R_val_; }
  double f() const noexcept { return f_.value(); }
  double alpha() const noexcept { return alpha_; }
  const Vec& gu() const noexcept { return gu_; }
  Vec df() const {
    Vec v(m_);
    for (std::size_t i = 0; i < m_; ++i) v[i] = df_[i].value();
    return v;
  }
  Vec grad_f() const { return value(grad_); }

  // ---- point values ----

  double g(const Vec& a, const Vec& b) const { return a.dot(Gval_ * b); }
  double norm2(const Vec& a) const { return g(a, a); }
  Vec R(const Vec& a, const Vec& b, const Vec& c) const { return contract_riemann(R_val_, a, b, c); }
  Vec Gamma(const Vec& a, const Vec& b) const { return contract_gamma(gamma_val_, a, b); }
  /// nabla_a b for constant-coefficient b.
  Vec nabla_const(const Vec& a, const Vec& b) const { return Gamma(a, b); }
  /// Sectional numerator g(R(a,b)b, a).
  double K(const Vec& a, const Vec& b) const { return g(R(a, b, b), a); }
  double scalar() const { return scalar_from(Ginv_val_, R_val_, m_); }

  /// (1/2f)(df(a) b + df(b) a - g(a,b) grad f).
  Vec A(const Vec& a, const Vec& b) const {
    const Vec d = df();
    return (d.dot(a) * b + d.dot(b) * a - g(a, b) * grad_f()) / (2.0 * f());
  }

  /// Cheeger-Gromoll fiber pairing (g(a,b) + g(a,u) g(b,u)) / alpha.
  double V_cg(const Vec& a, const Vec& b) const { return (g(a, b) + gu_.dot(a) * gu_.dot(b)) / alpha_; }
  double V(Variant v, const Vec& a, const Vec& b) const { return v == Variant::Sasaki ? g(a, b) : V_cg(a, b); }

  // ---- fields ----

  Field constant(const Vec& a) const {
    Field F;
    F.reserve(m_);
    for (std::size_t i = 0; i < m_; ++i) F.push_back(Jet(m_, 2, a[i]));
    return F;
  }

  /// u extended parallel at x.
  Field parallel_u() const {
    Field F;
    for (std::size_t a = 0; a < m_; ++a) {
      Jet j(m_, 1, u_[a]);
      for (std::size_t i = 0; i < m_; ++i) {
        double s = 0.0;
        for (std::size_t b = 0; b < m_; ++b) s += gamma_val_[idx3(m_, a, i, b)] * u_[b];
        j.set_d(i, -s);
      }
      F.push_back(j);
    }
    return F;
  }

  const Jet& f_jet() const noexcept { return f_; }
  /// Gamma^k_{ij} as second-order jets, indexed as in riemann.hpp.
  const std::vector<Jet>& gamma_jets() const noexcept { return gamma_; }
  const Jet& inv_f_jet() const noexcept { return inv_f_; }

  static Vec value(const Field& F) {
    Vec v(F.size());
    for (std::size_t k = 0; k < F.size(); ++k) v[k] = F[k].value();
    return v;
  }

  Field Gamma(const Field& a, const Field& b) const {
    Field r(m_, Jet(m_, 2, 0.0));
    for (std::size_t k = 0; k < m_; ++k)
      for (std::size_t i = 0; i < m_; ++i)
        for (std::size_t j = 0; j < m_; ++j) r[k] += gamma_[idx3(m_, k, i, j)] * a[i] * b[j];
    return r;
  }

  Field R(const Field& a, const Field& b, const Field& c) const {
    Field r(m_, Jet(m_, 1, 0.0));
    for (std::size_t l = 0; l < m_; ++l)
      for (std::size_t i = 0; i < m_; ++i)
        for (std::size_t j = 0; j < m_; ++j) {
          if (i == j) continue;
          const Jet ab = a[i] * b[j];
          for (std::size_t k = 0; k < m_; ++k) r[l] += R_[idx4(m_, l, i, j, k)] * ab * c[k];
        }
    return r;
  }

  Jet g(const Field& a, const Field& b) const {
    Jet s(m_, 2, 0.0);
    for (std::size_t i = 0; i < m_; ++i)
      for (std::size_t j = 0; j < m_; ++j) s += G_(i, j) * a[i] * b[j];
    return s;
  }

  Field A(const Field& a, const Field& b) const {
    Jet dfa(m_, 2, 0.0), dfb(m_, 2, 0.0);
    for (std::size_t i = 0; i < m_; ++i) {
      dfa += df_[i] * a[i];
      dfb += df_[i] * b[i];
    }
    const Jet gab = g(a, b);
    const Jet half_inv_f = inv_f_ * 0.5;
    Field r(m_);
    for (std::size_t k = 0; k < m_; ++k) r[k] = (dfa * b[k] + dfb * a[k] - gab * grad_[k]) * half_inv_f;
    return r;
  }

  static Field scaled(const Jet& s, Field F) {
    for (auto& c : F) c = s * c;
    return F;
  }
  static Field scaled(double s, Field F) {
    for (auto& c : F) c *= s;
    return F;
  }
  static Field sum(Field a, const Field& b) {
    for (std::size_t k = 0; k < a.size(); ++k) a[k] += b[k];
    return a;
  }

  /// nabla_a W at x for a base field W: a(W) + Gamma(a, W).
  Vec nabla(const Vec& a, const Field& W) const {
    std::vector<double> av(a.data(), a.data() + a.size());
    Vec d(m_);
    for (std::size_t k = 0; k < m_; ++k) d[k] = W[k].directional_value(av);
    return d + Gamma(a, value(W));
  }

 private:
  std::size_t m_;
  Vec x_, u_;
  JetMatrix G_, Ginv_;
  Mat Gval_, Ginv_val_;
  std::vector<Jet> gamma_, R_;
  std::vector<double> gamma_val_, R_val_;
  Jet f_, inv_f_;
  Field df_, grad_;
  Vec gu_;
  double alpha_ = 1.0;
};

}  // namespace tbgeom
