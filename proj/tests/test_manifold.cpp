#include <cmath>
#include <string>

#include <gtest/gtest.h>

#include "tbgeom/manifold.hpp"

using namespace tbgeom;

namespace {

std::string config(const std::string& name) { return std::string(TBGEOM_CONFIG_DIR) + "/" + name; }

Vec vec(std::initializer_list<double> v) {
  Vec r(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double a : v) r[i++] = a;
  return r;
}

}  // namespace

TEST(Catalog, ParsesEveryEntry) {
  const ChartedManifold e = catalog("euclidean(3)");
  EXPECT_EQ(e.dim(), 3u);
  EXPECT_TRUE(e.constant_metric());
  EXPECT_EQ(*e.kappa(), 0.0);
  EXPECT_TRUE(e.metric(vec({0.1, 0.2, 0.3})).isApprox(Mat::Identity(3, 3)));

  const ChartedManifold s = catalog("sphere_stereo(2)");
  EXPECT_EQ(s.dim(), 2u);
  EXPECT_DOUBLE_EQ(*s.kappa(), 0.25);
  EXPECT_FALSE(s.constant_metric());

  EXPECT_DOUBLE_EQ(*catalog("poincare_disk").kappa(), -1.0);
  EXPECT_EQ(catalog("poincare_disk(4)").dim(), 4u);
  EXPECT_EQ(catalog("space_form(-0.5, 3)").dim(), 3u);
  EXPECT_EQ(catalog("euclidean").dim(), 2u);
}

TEST(Catalog, ConformalFactor) {
  // 4/(1+kappa|x|^2)^2 at x = (0.5, 0.5), kappa = 1: 4/1.5^2
  const Mat G = catalog("sphere_stereo(1)").metric(vec({0.5, 0.5}));
  EXPECT_NEAR(G(0, 0), 4.0 / 2.25, 1e-15);
  EXPECT_NEAR(G(1, 1), 4.0 / 2.25, 1e-15);
  EXPECT_EQ(G(0, 1), 0.0);
  EXPECT_NEAR(catalog("space_form(1)").metric(Vec::Zero(2))(0, 0), 4.0, 1e-15);
}

TEST(Catalog, ChartBoxes) {
  const ChartedManifold p = catalog("poincare_disk");
  // the chart must stay strictly inside the unit disk
  for (const auto& iv : p.box()) EXPECT_LT(iv.hi * iv.hi * 2, 1.0);
  EXPECT_TRUE(p.contains(Vec::Zero(2)));
  EXPECT_FALSE(p.contains(vec({0.9, 0.9})));
  EXPECT_THROW(p.metric(vec({0.9, 0.9})), OutsideChart);
  EXPECT_FALSE(p.contains(Vec::Zero(3)));
  EXPECT_TRUE(catalog("euclidean").contains(vec({1.0, -1.0})));
}

TEST(Catalog, Errors) {
  EXPECT_THROW(catalog("torus(2)"), UnknownManifold);
  EXPECT_THROW(catalog("euclidean(1)"), BadParams);
  EXPECT_THROW(catalog("euclidean(2.5)"), BadParams);
  EXPECT_THROW(catalog("euclidean(2,3)"), BadParams);
  EXPECT_THROW(catalog("sphere_stereo(-1)"), BadParams);
  EXPECT_THROW(catalog("sphere_stereo(0)"), BadParams);
  EXPECT_THROW(catalog("space_form()"), BadParams);
  EXPECT_THROW(catalog("space_form(1"), BadParams);
  EXPECT_THROW(catalog("space_form(abc)"), BadParams);
}

TEST(MetricFile, LoadsAndMatchesCatalog) {
  const ChartedManifold a = manifold_from_file(config("sphere_stereo.json"));
  const ChartedManifold b = catalog("sphere_stereo(1)");
  EXPECT_EQ(a.dim(), 2u);
  EXPECT_DOUBLE_EQ(*a.kappa(), 1.0);
  const Vec x = vec({0.3, -0.4});
  EXPECT_TRUE(a.metric(x).isApprox(b.metric(x), 1e-15));

  const ChartedManifold g = manifold_from_file(config("generic3.json"));
  EXPECT_EQ(g.dim(), 3u);
  EXPECT_FALSE(g.kappa().has_value());
  const Mat G = g.metric(vec({0.2, 0.1, -0.4}));
  EXPECT_TRUE(is_spd(G));
  EXPECT_NEAR(G(0, 1), 0.2 * std::sin(0.2 * -0.4), 1e-15);
  EXPECT_EQ(G(0, 1), G(1, 0));
}

TEST(MetricFile, Rejections) {
  using nlohmann::json;
  const json good = json::parse(R"({"dimension": 2, "metric": [["1", "0"], ["0", "1"]], "box": [[-1, 1], [-1, 1]]})");
  EXPECT_NO_THROW(manifold_from_json(good));

  json asym = good;
  asym["metric"] = json::parse(R"([["1", "x1"], ["0", "1"]])");
  EXPECT_THROW(manifold_from_json(asym), ConfigError);

  json rows = good;
  rows["metric"] = json::parse(R"([["1", "0"]])");
  EXPECT_THROW(manifold_from_json(rows), ConfigError);

  json missing = good;
  missing.erase("box");
  EXPECT_THROW(manifold_from_json(missing), ConfigError);

  json bad_expr = good;
  bad_expr["metric"] = json::parse(R"([["1+", "0"], ["0", "1"]])");
  EXPECT_THROW(manifold_from_json(bad_expr), SyntaxError);

  json bad_box = good;
  bad_box["box"] = json::parse("[[1, -1], [-1, 1]]");
  EXPECT_THROW(manifold_from_json(bad_box), BadParams);

  EXPECT_THROW(manifold_from_file(config("no_such_file.json")), ConfigError);
}

TEST(ScalingFieldTest, ValuesAndPositivity) {
  const ScalingField f("exp(x1)", 2);
  EXPECT_NEAR(f.value(vec({0.5, 0.0})), std::exp(0.5), 1e-15);
  EXPECT_TRUE(ScalingField("3", 2).is_constant());
  EXPECT_THROW(ScalingField("x1", 2).value(vec({-0.5, 0.0})), NonPositiveScaling);
  EXPECT_THROW(ScalingField("x3", 2), UnknownSymbol);
}

TEST(Helpers, GradientOfScalingField) {
  // grad f = G^{-1} df; on the sphere chart at 0, G = 4 I
  const ChartedManifold M = catalog("sphere_stereo(1)");
  const Vec g = grad_f(M, ScalingField("exp(x1)", 2), Vec::Zero(2));
  EXPECT_NEAR(g[0], 0.25, 1e-15);
  EXPECT_NEAR(g[1], 0.0, 1e-15);
}

TEST(Helpers, GramSchmidt) {
  const ChartedManifold M = manifold_from_file(config("generic3.json"));
  const Vec x = vec({0.1, -0.3, 0.5});
  const Mat G = M.metric(x);
  const auto e = gram_schmidt(M, x, {vec({1, 2, 0}), vec({0, 1, 1}), vec({1, 0, 1})});
  ASSERT_EQ(e.size(), 3u);
  for (std::size_t a = 0; a < 3; ++a)
    for (std::size_t b = 0; b < 3; ++b) EXPECT_NEAR(e[a].dot(G * e[b]), a == b ? 1.0 : 0.0, 1e-13);
  EXPECT_THROW(gram_schmidt(M, x, {vec({1, 2, 0}), vec({2, 4, 0})}), DegenerateInput);
}

TEST(Helpers, NormAndAlpha) {
  const ChartedManifold M = catalog("space_form(1)");
  const FiberScalars s = norm_r(M, {Vec::Zero(2), vec({0.5, 0.0})});
  EXPECT_NEAR(s.r, 1.0, 1e-15);
  EXPECT_NEAR(s.alpha, 2.0, 1e-15);
}
