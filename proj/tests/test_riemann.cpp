#include <cmath>
#include <random>
#include <string>

#include <gtest/gtest.h>

#include "tbgeom/manifold.hpp"
#include "tbgeom/riemann.hpp"

using namespace tbgeom;

namespace {

std::string config(const std::string& name) { return std::string(TBGEOM_CONFIG_DIR) + "/" + name; }

Vec random_in(std::mt19937_64& rng, const ChartedManifold& M, double shrink = 0.9) {
  Vec x(M.dim());
  for (std::size_t i = 0; i < M.dim(); ++i) {
    std::uniform_real_distribution<double> d(shrink * M.box()[i].lo, shrink * M.box()[i].hi);
    x[i] = d(rng);
  }
  return x;
}

Vec random_vec(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  Vec v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = d(rng);
  return v;
}

// Christoffel symbols of phi^2 delta with phi = 2/(1 + kappa |x|^2):
// Gamma^k_ij = delta_ik s_j + delta_jk s_i - delta_ij s_k, s = grad log phi.
std::vector<double> conformal_gamma(double kappa, const Vec& x) {
  const std::size_t n = static_cast<std::size_t>(x.size());
  const Vec s = -2.0 * kappa * x / (1.0 + kappa * x.squaredNorm());
  std::vector<double> g(n * n * n, 0.0);
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        g[idx3(n, k, i, j)] = (i == k ? s[j] : 0.0) + (j == k ? s[i] : 0.0) - (i == j ? s[k] : 0.0);
  return g;
}

}  // namespace

TEST(Christoffel, ConformalClosedForm) {
  std::mt19937_64 rng(1);
  for (const char* spec : {"sphere_stereo(1)", "poincare_disk(3)", "space_form(0.3, 4)"}) {
    const ChartedManifold M = catalog(spec);
    const MetricFn mf = metric_fn(M);
    for (int k = 0; k < 10; ++k) {
      const Vec x = random_in(rng, M);
      const auto got = christoffel(mf, x);
      const auto ref = conformal_gamma(*M.kappa(), x);
      for (std::size_t a = 0; a < got.size(); ++a) EXPECT_NEAR(got[a], ref[a], 1e-13) << spec;
      const auto jets = values(christoffel_jets(M.metric_jets(x, 2)));
      for (std::size_t a = 0; a < got.size(); ++a) EXPECT_NEAR(jets[a], ref[a], 1e-13) << spec;
    }
  }
}

TEST(Curvature, SpaceFormsHaveConstantSectionalCurvature) {
  std::mt19937_64 rng(2);
  for (const char* spec : {"sphere_stereo(1)", "sphere_stereo(2, 3)", "poincare_disk", "space_form(-0.5, 3)",
                           "euclidean(3)"}) {
    const ChartedManifold M = catalog(spec);
    const MetricFn mf = metric_fn(M);
    const double kappa = *M.kappa();
    const double m = static_cast<double>(M.dim());
    for (int k = 0; k < 10; ++k) {
      const Vec x = random_in(rng, M);
      const Vec v = random_vec(rng, M.dim()), w = random_vec(rng, M.dim());
      EXPECT_NEAR(sectional(mf, x, v, w), kappa, 1e-11) << spec;
      EXPECT_NEAR(scalar(mf, x), kappa * m * (m - 1), 1e-10) << spec;
    }
  }
}

TEST(Curvature, WarpedHyperbolicPlane) {
  // dx^2 + exp(2x) dy^2 has curvature -1 everywhere
  const ChartedManifold M = manifold_from_file(config("warped_hyperbolic.json"));
  const MetricFn mf = metric_fn(M);
  std::mt19937_64 rng(3);
  for (int k = 0; k < 10; ++k) {
    const Vec x = random_in(rng, M);
    EXPECT_NEAR(sectional(mf, x, Vec::Unit(2, 0), Vec::Unit(2, 1)), -1.0, 1e-12);
    EXPECT_NEAR(scalar(mf, x), -2.0, 1e-12);
  }
}

TEST(Curvature, ExplicitSphereComponent) {
  // R(e1, e2)e2 = kappa (g(e2,e2) e1 - g(e1,e2) e2) = kappa G11 e1 at the origin
  const ChartedManifold M = catalog("sphere_stereo(1)");
  const auto R = riemann(metric_fn(M), Vec::Zero(2));
  EXPECT_NEAR(R[idx4(2, 0, 0, 1, 1)], 4.0, 1e-13);
  EXPECT_NEAR(R[idx4(2, 1, 0, 1, 0)], -4.0, 1e-13);
  EXPECT_NEAR(R[idx4(2, 0, 0, 1, 0)], 0.0, 1e-13);
}

TEST(Curvature, GenericMetricSymmetries) {
  const ChartedManifold M = manifold_from_file(config("generic3.json"));
  const MetricFn mf = metric_fn(M);
  const std::size_t n = 3;
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 10; ++trial) {
    const Vec x = random_in(rng, M);
    const Mat G = M.metric(x);
    const auto R = riemann(mf, x);
    auto lower = [&](std::size_t a, std::size_t i, std::size_t j, std::size_t k) {
      double s = 0.0;
      for (std::size_t l = 0; l < n; ++l) s += G(a, l) * R[idx4(n, l, i, j, k)];
      return s;
    };
    double scale = 0.0;
    for (double r : R) scale = std::max(scale, std::abs(r));
    ASSERT_GT(scale, 1e-3);
    const double tol = 1e-12 * scale;
    for (std::size_t l = 0; l < n; ++l)
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
          for (std::size_t k = 0; k < n; ++k) {
            EXPECT_NEAR(R[idx4(n, l, i, j, k)], -R[idx4(n, l, j, i, k)], tol);
            EXPECT_NEAR(R[idx4(n, l, i, j, k)] + R[idx4(n, l, j, k, i)] + R[idx4(n, l, k, i, j)], 0.0, tol);
            EXPECT_NEAR(lower(l, i, j, k), -lower(k, i, j, l), tol);
            EXPECT_NEAR(lower(l, i, j, k), lower(j, k, l, i), tol);
          }
  }
}

TEST(Curvature, MatchesFiniteDifferencesOfChristoffel) {
  const ChartedManifold M = manifold_from_file(config("generic3.json"));
  const MetricFn mf = metric_fn(M);
  const std::size_t n = 3;
  const Vec x = (Vec(3) << 0.2, -0.1, 0.35).finished();
  const auto g0 = christoffel(mf, x);
  const double h = 1e-5;
  std::vector<std::vector<double>> dg(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto gp = christoffel(mf, x + h * Vec::Unit(3, i));
    const auto gm = christoffel(mf, x - h * Vec::Unit(3, i));
    dg[i].resize(gp.size());
    for (std::size_t a = 0; a < gp.size(); ++a) dg[i][a] = (gp[a] - gm[a]) / (2 * h);
  }
  const auto R = riemann(mf, x);
  for (std::size_t l = 0; l < n; ++l)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        for (std::size_t k = 0; k < n; ++k) {
          double ref = dg[i][idx3(n, l, j, k)] - dg[j][idx3(n, l, i, k)];
          for (std::size_t p = 0; p < n; ++p)
            ref += g0[idx3(n, l, i, p)] * g0[idx3(n, p, j, k)] - g0[idx3(n, l, j, p)] * g0[idx3(n, p, i, k)];
          EXPECT_NEAR(R[idx4(n, l, i, j, k)], ref, 1e-8);
        }
}

TEST(Curvature, DegeneratePlaneIsRejected) {
  const ChartedManifold M = catalog("sphere_stereo(1)");
  const Vec v = Vec::Unit(2, 0);
  EXPECT_THROW(sectional(metric_fn(M), Vec::Zero(2), v, 3.0 * v), DegeneratePlane);
  EXPECT_THROW(sectional(metric_fn(M), Vec::Zero(2), v, Vec::Zero(2)), DegeneratePlane);
}

TEST(Geodesic, RightHandSideOnSphere) {
  // x'' = -Gamma(x', x') with the conformal symbols
  const ChartedManifold M = catalog("sphere_stereo(1)");
  const Vec x = (Vec(2) << 0.3, -0.2).finished(), v = (Vec(2) << 0.5, 0.7).finished();
  const auto [dx, dv] = geodesic_rhs(metric_fn(M), x, v);
  EXPECT_TRUE(dx.isApprox(v));
  const Vec ref = -contract_gamma(conformal_gamma(1.0, x), v, v);
  EXPECT_NEAR((dv - ref).norm(), 0.0, 1e-14);
}

TEST(Geodesic, CurveAccelerationVanishesForStraightLinesInFlatSpace) {
  const ChartedManifold M = catalog("euclidean(3)");
  const CurveJet c{Vec::Zero(3), Vec::Ones(3), Vec::Zero(3), Vec::Zero(3)};
  EXPECT_EQ(curve_accel(metric_fn(M), c).norm(), 0.0);
}
