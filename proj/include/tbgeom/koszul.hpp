#pragma once

// Pairings g(nabla_A B, C) of lifts for any natural bundle metric, from
// base data and derivatives of the fiber pairing V. Horizontal pairings are
// taken without the factor f (g(X^h, Y^h) = g(X, Y)).

#include <string>

#include "tbgeom/bundle.hpp"
#include "tbgeom/local_geometry.hpp"

namespace tbgeom {

/// Slot pattern (A, B, C) of a connection pairing.
struct KoszulCase {
  Lift a, b, c;
};

inline std::string koszul_name(const KoszulCase& k) {
  auto ch = [](Lift l) { return l == Lift::H ? 'h' : 'v'; };
  return std::string{ch(k.a), ch(k.b), '_', ch(k.c)};
}

inline std::vector<KoszulCase> koszul_cases() {
  std::vector<KoszulCase> out;
  for (Lift a : {Lift::H, Lift::V})
    for (Lift b : {Lift::H, Lift::V})
      for (Lift c : {Lift::H, Lift::V}) out.push_back({a, b, c});
  return out;
}

class KoszulPairings {
 public:
  KoszulPairings(const BundleMetric& bm, const TangentPoint& tp)
      : bm_(bm), L_(bm.base(), bm.scaling(), tp), N_(connection_map(bm.base(), tp)),
        V_(bm.fiber_jets(BundleMetric::point(tp), 1)) {}

  const LocalGeometry& local() const noexcept { return L_; }

  double V(const Vec& a, const Vec& b) const { return L_.V(bm_.variant(), a, b); }

  /// Derivative of V(Y, Z) along the bundle vector D, with Y, Z held fixed.
  double dV(const Vec& D, const Vec& Y, const Vec& Z) const {
    const std::size_t m = L_.dim();
    std::vector<double> d(D.data(), D.data() + D.size());
    double s = 0.0;
    for (std::size_t a = 0; a < m; ++a)
      for (std::size_t b = 0; b < m; ++b) s += Y[a] * Z[b] * V_(a, b).directional_value(d);
    return s;
  }

  /// `printed_vvv` selects the vertical-vertical-vertical formula in the form
  /// (1/2)(X^v V(X,Z) + Y^v V(Z,X) - Y^v V(X,Y)).
  double pairing(const KoszulCase& k, const Vec& X, const Vec& Y, const Vec& Z, bool printed_vvv = false) const {
    const LocalGeometry& L = L_;
    const Vec& u = L.u();
    const double f = L.f();
    const Vec df = L.df();
    auto hor = [&](const Vec& w) { return horizontal_lift(N_, w); };
    auto ver = [](const Vec& w) { return vertical_lift(w); };
    const bool h1 = k.a == Lift::H, h2 = k.b == Lift::H, h3 = k.c == Lift::H;
    if (h1 && h2 && h3)
      return (df.dot(X) * L.g(Y, Z) + df.dot(Y) * L.g(Z, X) - df.dot(Z) * L.g(X, Y)) / (2 * f) +
             L.g(L.Gamma(X, Y), Z);
    if (h1 && h2) return -0.5 * V(L.R(X, Y, u), Z);
    if (h1 && h3) return V(L.R(X, Z, u), Y) / (2 * f);
    if (h1) return 0.5 * (dV(hor(X), Y, Z) - V(Y, L.Gamma(X, Z)) + V(Z, L.Gamma(X, Y)));
    if (h2 && h3) return V(L.R(Y, Z, u), X) / (2 * f);
    if (h2) return 0.5 * (dV(hor(Y), Z, X) - V(X, L.Gamma(Y, Z)) - V(Z, L.Gamma(Y, X)));
    if (h3) return (-dV(hor(Z), X, Y) + V(Y, L.Gamma(Z, X)) + V(X, L.Gamma(Z, Y))) / (2 * f);
    if (printed_vvv) return 0.5 * (dV(ver(X), X, Z) + dV(ver(Y), Z, X) - dV(ver(Y), X, Y));
    return 0.5 * (dV(ver(X), Y, Z) + dV(ver(Y), Z, X) - dV(ver(Z), X, Y));
  }

 private:
  const BundleMetric& bm_;
  LocalGeometry L_;
  Mat N_;
  JetMatrix V_;
};

}  // namespace tbgeom
