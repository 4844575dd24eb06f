#pragma once

// Brute-force geometry of the assembled 2m x 2m bundle metric at one point of
// TM. Nothing here knows about lifts beyond building lift fields as jets; the
// connection and curvature come straight from the coordinate formulas.

#include <cmath>
#include <cstddef>
#include <vector>

#include "tbgeom/bundle.hpp"
#include "tbgeom/jet.hpp"
#include "tbgeom/linalg.hpp"
#include "tbgeom/riemann.hpp"

namespace tbgeom {

/// A vector field on TM near the evaluation point: 2m jets in 2m variables.
using BundleField = std::vector<Jet>;

class BundleOracle {
 public:
  BundleOracle(const BundleMetric& bm, const TangentPoint& tp) : bm_(bm), tp_(tp), m_(bm.base().dim()), n_(2 * m_) {
    bm.base().require_inside(tp.x);
    y_ = BundleMetric::point(tp);
    const JetMatrix H = bm.jets(y_, 2);
    H_ = H.values();
    Hinv_ = invert(H_);
    const std::vector<Jet> gam = christoffel_jets(H);
    gamma_ = values(gam);
    R_ = values(riemann_jets(gam, n_));
    Njets_ = bm.connection_map_jets(y_, 1);
    N_ = Mat(m_, m_);
    for (std::size_t a = 0; a < m_; ++a)
      for (std::size_t i = 0; i < m_; ++i) N_(a, i) = Njets_[a * m_ + i].value();
  }

  const BundleMetric& metric() const noexcept { return bm_; }
  const TangentPoint& point() const noexcept { return tp_; }
  const Vec& coords() const noexcept { return y_; }
  const Mat& H() const noexcept { return H_; }
  const Mat& N() const noexcept { return N_; }
  const std::vector<double>& gamma() const noexcept { return gamma_; }
  const std::vector<double>& riemann() const noexcept { return R_; }

  double inner(const Vec& a, const Vec& b) const { return a.dot(H_ * b); }

  Vec lift(Lift k, const Vec& X) const { return tbgeom::lift(N_, k, X); }
  FrameResult decompose(const Vec& Z) const { return tbgeom::decompose(N_, Z); }
  Vec recompose(const FrameResult& r) const { return tbgeom::recompose(N_, r); }

  /// Lift of a base vector extended with constant coordinate components.
  BundleField lift_field(Lift k, const Vec& X) const {
    BundleField F(n_, Jet(n_, 1, 0.0));
    if (k == Lift::V) {
      for (std::size_t a = 0; a < m_; ++a) F[m_ + a] = Jet(n_, 1, X[a]);
      return F;
    }
    for (std::size_t i = 0; i < m_; ++i) F[i] = Jet(n_, 1, X[i]);
    for (std::size_t a = 0; a < m_; ++a)
      for (std::size_t i = 0; i < m_; ++i)
        if (X[i] != 0.0) F[m_ + a] -= Njets_[a * m_ + i] * X[i];
    return F;
  }

  static Vec value(const BundleField& F) {
    Vec v(F.size());
    for (std::size_t k = 0; k < F.size(); ++k) v[k] = F[k].value();
    return v;
  }

  /// Derivative of each component of F along A.
  static Vec directional(const BundleField& F, const Vec& A) {
    Vec v(F.size());
    std::vector<double> a(A.data(), A.data() + A.size());
    for (std::size_t k = 0; k < F.size(); ++k) v[k] = F[k].directional_value(a);
    return v;
  }

  /// nabla_A B = A(B) + Gamma(A, B).
  Vec nabla(const Vec& A, const BundleField& B) const {
    return directional(B, A) + contract_gamma(gamma_, A, value(B));
  }

  /// [A, B] for two fields.
  static Vec bracket(const BundleField& A, const BundleField& B) {
    return directional(B, value(A)) - directional(A, value(B));
  }

  Vec curvature(const Vec& A, const Vec& B, const Vec& C) const { return contract_riemann(R_, A, B, C); }

  double sectional(const Vec& A, const Vec& B) const { return sectional_from(H_, R_, A, B); }
  double scalar() const { return scalar_from(Hinv_, R_, n_); }
  double max_abs_riemann(std::size_t* where = nullptr) const {
    double best = 0.0;
    for (std::size_t k = 0; k < R_.size(); ++k)
      if (std::abs(R_[k]) > best) {
        best = std::abs(R_[k]);
        if (where) *where = k;
      }
    return best;
  }

  /// g-bar(R(A,B)B, A) without dividing by the area.
  double curvature_form(const Vec& A, const Vec& B) const { return inner(curvature(A, B, B), A); }

 private:
  const BundleMetric& bm_;
  TangentPoint tp_;
  std::size_t m_, n_;
  Vec y_;
  Mat H_, Hinv_, N_;
  std::vector<double> gamma_, R_;
  std::vector<Jet> Njets_;
};

}  // namespace tbgeom
