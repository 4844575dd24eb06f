#pragma once

// Charted base manifolds (M, g), the scaling field f and tangent points.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "tbgeom/errors.hpp"
#include "tbgeom/expr.hpp"
#include "tbgeom/jet.hpp"
#include "tbgeom/linalg.hpp"

namespace tbgeom {

struct Interval {
  double lo = 0.0, hi = 0.0;
};

/// A single chart x in a box of R^m with metric components given as
/// expressions. Only the upper triangle is stored; G is symmetric by
/// construction.
class ChartedManifold {
 public:
  ChartedManifold(std::string name, std::size_t m, std::vector<Expr> upper, std::vector<Interval> box,
                  std::optional<double> kappa = std::nullopt)
      : name_(std::move(name)), m_(m), upper_(std::move(upper)), box_(std::move(box)), kappa_(kappa) {
    if (m_ < 2) throw BadParams("dimension must be at least 2");
    if (upper_.size() != m_ * (m_ + 1) / 2) throw BadParams("metric needs m(m+1)/2 components");
    if (box_.size() != m_) throw BadParams("box needs one interval per axis");
    for (const auto& iv : box_)
      if (!(iv.lo < iv.hi)) throw BadParams("empty chart interval");
    flat_ = true;
    for (const auto& e : upper_) flat_ = flat_ && e.is_constant();
  }

  const std::string& name() const noexcept { return name_; }
  std::size_t dim() const noexcept { return m_; }
  const std::vector<Interval>& box() const noexcept { return box_; }
  const std::optional<double>& kappa() const noexcept { return kappa_; }
  /// True when every metric component is a constant expression.
  bool constant_metric() const noexcept { return flat_; }

  const Expr& component(std::size_t i, std::size_t j) const {
    if (i > j) std::swap(i, j);
    return upper_[i * m_ - i * (i - 1) / 2 + (j - i)];
  }

  bool contains(const Vec& x) const {
    if (static_cast<std::size_t>(x.size()) != m_) return false;
    for (std::size_t i = 0; i < m_; ++i)
      if (!(x[i] >= box_[i].lo && x[i] <= box_[i].hi)) return false;
    return true;
  }

  void require_inside(const Vec& x) const {
    if (!contains(x)) throw OutsideChart("point outside chart box of " + name_);
  }

  /// G(x) with derivatives up to `order` in the m chart variables.
  JetMatrix metric_jets(const Vec& x, int order) const {
    require_inside(x);
    std::vector<Jet> vars;
    vars.reserve(m_);
    for (std::size_t i = 0; i < m_; ++i) vars.push_back(Jet::variable(m_, order, i, x[i]));
    JetMatrix g(m_, Jet(m_, order, 0.0));
    for (std::size_t i = 0; i < m_; ++i)
      for (std::size_t j = i; j < m_; ++j) {
        Jet v = eval_jet(component(i, j), vars);
        if (v.is_constant()) v = Jet(m_, order, v.value());
        g(i, j) = v;
        g(j, i) = v;
      }
    return g;
  }

  Mat metric(const Vec& x) const {
    require_inside(x);
    Mat g(m_, m_);
    std::vector<double> xs(x.data(), x.data() + x.size());
    for (std::size_t i = 0; i < m_; ++i)
      for (std::size_t j = i; j < m_; ++j) g(i, j) = g(j, i) = eval(component(i, j), xs);
    return g;
  }

 private:
  std::string name_;
  std::size_t m_;
  std::vector<Expr> upper_;
  std::vector<Interval> box_;
  std::optional<double> kappa_;
  bool flat_ = false;
};

/// The positive function f rescaling the horizontal part of the bundle metric.
class ScalingField {
 public:
  ScalingField(Expr e) : expr_(std::move(e)) {}
  ScalingField(std::string_view text, std::size_t m) : expr_(parse(text, m)) {}

  const Expr& expr() const noexcept { return expr_; }
  bool is_constant() const { return expr_.is_constant(); }

  Jet jet(const Vec& x, int order) const {
    std::vector<double> xs(x.data(), x.data() + x.size());
    Jet v = eval_jet(expr_, xs, order);
    if (!(v.value() > 0.0)) throw NonPositiveScaling("scaling field is not positive at sample point");
    return v;
  }
  double value(const Vec& x) const { return jet(x, 0).value(); }

 private:
  Expr expr_;
};

struct TangentPoint {
  Vec x, u;
};

struct FiberScalars {
  double r = 0.0, alpha = 1.0;
};

inline double inner(const ChartedManifold& M, const Vec& x, const Vec& v, const Vec& w) {
  return v.dot(M.metric(x) * w);
}

inline FiberScalars norm_r(const ChartedManifold& M, const TangentPoint& tp) {
  const double r2 = inner(M, tp.x, tp.u, tp.u);
  return {std::sqrt(r2), 1.0 + r2};
}

/// Metric dual of df at x.
inline Vec grad_f(const ChartedManifold& M, const ScalingField& f, const Vec& x) {
  const Jet fj = f.jet(x, 1);
  Vec df(M.dim());
  for (std::size_t i = 0; i < M.dim(); ++i) df[i] = fj.d(i);
  return invert(M.metric(x)) * df;
}

/// Modified Gram-Schmidt in the metric G(x), in input order.
inline std::vector<Vec> gram_schmidt(const Mat& G, const std::vector<Vec>& vs) {
  std::vector<Vec> out;
  for (const Vec& v0 : vs) {
    Vec v = v0;
    for (const Vec& e : out) v -= e.dot(G * v) * e;
    const double n2 = v.dot(G * v);
    if (!(n2 > 0.0) || std::sqrt(n2) < 1e-10) throw DegenerateInput("vectors are numerically dependent");
    out.push_back(v / std::sqrt(n2));
  }
  return out;
}

inline std::vector<Vec> gram_schmidt(const ChartedManifold& M, const Vec& x, const std::vector<Vec>& vs) {
  return gram_schmidt(M.metric(x), vs);
}

namespace detail {

inline std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::string squared_norm_expr(std::size_t m) {
  std::string s;
  for (std::size_t i = 1; i <= m; ++i) s += (i > 1 ? "+" : "") + ("x" + std::to_string(i)) + "^2";
  return s;
}

inline ChartedManifold conformal(std::string name, double kappa, std::size_t m) {
  const std::string lambda =
      "4/(1+(" + fmt_double(kappa) + ")*(" + squared_norm_expr(m) + "))^2";
  std::vector<Expr> upper;
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = i; j < m; ++j) upper.push_back(parse(i == j ? lambda : "0", m));
  // stay where 1 + kappa |x|^2 is comfortably positive
  double half = 0.5;
  if (kappa < 0.0) half = std::min(half, std::sqrt(0.75 / (-kappa * static_cast<double>(m))));
  return ChartedManifold(std::move(name), m, std::move(upper), std::vector<Interval>(m, {-half, half}), kappa);
}

inline std::vector<double> parse_params(const std::string& spec, std::string& name) {
  const auto open = spec.find('(');
  std::vector<double> out;
  if (open == std::string::npos) {
    name = spec;
    return out;
  }
  if (spec.back() != ')') throw BadParams("missing ')' in manifold spec '" + spec + "'");
  name = spec.substr(0, open);
  std::stringstream ss(spec.substr(open + 1, spec.size() - open - 2));
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    const auto b = tok.find_first_not_of(" \t");
    if (b == std::string::npos) {
      if (out.empty() && ss.eof()) break;
      throw BadParams("empty parameter in '" + spec + "'");
    }
    tok = tok.substr(b, tok.find_last_not_of(" \t") - b + 1);
    const auto eq = tok.find('=');
    if (eq != std::string::npos) tok = tok.substr(eq + 1);
    try {
      std::size_t used = 0;
      out.push_back(std::stod(tok, &used));
      if (used != tok.size()) throw BadParams("bad number '" + tok + "'");
    } catch (const std::logic_error&) {
      throw BadParams("bad number '" + tok + "'");
    }
  }
  return out;
}

inline std::size_t as_dim(double v) {
  if (!(v >= 2.0) || std::floor(v) != v || v > 16.0) throw BadParams("dimension must be an integer in [2,16]");
  return static_cast<std::size_t>(v);
}

}  // namespace detail

/// Built-in test manifolds:
///   euclidean(m)                flat R^m on [-1,1]^m
///   space_form(kappa[, m])      4/(1+kappa|x|^2)^2 * I, curvature kappa
///   sphere_stereo(R[, m])       space_form(1/R^2, m)
///   poincare_disk([m])          space_form(-1, m)
/// m defaults to 2.
inline ChartedManifold catalog(const std::string& spec) {
  std::string name;
  const std::vector<double> p = detail::parse_params(spec, name);
  auto dim_at = [&](std::size_t k) { return p.size() > k ? detail::as_dim(p[k]) : std::size_t{2}; };
  if (name == "euclidean") {
    if (p.size() > 1) throw BadParams("euclidean takes one parameter");
    const std::size_t m = dim_at(0);
    std::vector<Expr> upper;
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = i; j < m; ++j) upper.push_back(parse(i == j ? "1" : "0", m));
    return ChartedManifold(spec, m, std::move(upper), std::vector<Interval>(m, {-1.0, 1.0}), 0.0);
  }
  if (name == "space_form") {
    if (p.empty() || p.size() > 2) throw BadParams("space_form takes (kappa[, m])");
    if (!std::isfinite(p[0])) throw BadParams("kappa must be finite");
    return detail::conformal(spec, p[0], dim_at(1));
  }
  if (name == "sphere_stereo") {
    if (p.empty() || p.size() > 2) throw BadParams("sphere_stereo takes (radius[, m])");
    if (!(p[0] > 0.0) || !std::isfinite(p[0])) throw BadParams("radius must be positive");
    return detail::conformal(spec, 1.0 / (p[0] * p[0]), dim_at(1));
  }
  if (name == "poincare_disk") {
    if (p.size() > 1) throw BadParams("poincare_disk takes at most (m)");
    return detail::conformal(spec, -1.0, dim_at(0));
  }
  throw UnknownManifold("unknown manifold '" + name + "'");
}

inline std::vector<std::string> catalog_names() {
  return {"euclidean(m)", "space_form(kappa[,m])", "sphere_stereo(radius[,m])", "poincare_disk([m])"};
}

/// Custom metric document:
///   {"dimension": m, "metric": [[expr, ...], ...], "box": [[lo, hi], ...], "kappa": k}
/// "kappa" is optional. The metric matrix must be symmetric as text.
inline ChartedManifold manifold_from_json(const nlohmann::json& doc, std::string name = "custom") {
  try {
    const std::size_t m = doc.at("dimension").get<std::size_t>();
    const auto& rows = doc.at("metric");
    if (rows.size() != m) throw ConfigError("metric must have m rows");
    std::vector<Expr> upper;
    for (std::size_t i = 0; i < m; ++i) {
      if (rows[i].size() != m) throw ConfigError("metric must have m columns");
      for (std::size_t j = i; j < m; ++j) {
        const Expr a = parse(rows[i][j].get<std::string>(), m);
        const Expr b = parse(rows[j][i].get<std::string>(), m);
        if (!(a == b)) throw ConfigError("metric entries (" + std::to_string(i + 1) + "," + std::to_string(j + 1) +
                                         ") and its transpose differ");
        upper.push_back(a);
      }
    }
    std::vector<Interval> box;
    for (const auto& iv : doc.at("box")) {
      if (iv.size() != 2) throw ConfigError("box entries are [lo, hi]");
      box.push_back({iv[0].get<double>(), iv[1].get<double>()});
    }
    std::optional<double> kappa;
    if (doc.contains("kappa")) kappa = doc["kappa"].get<double>();
    return ChartedManifold(std::move(name), m, std::move(upper), std::move(box), kappa);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("bad metric document: ") + e.what());
  }
}

inline ChartedManifold manifold_from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path);
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("invalid JSON in ") + path + ": " + e.what());
  }
  return manifold_from_json(doc, "file:" + path);
}

}  // namespace tbgeom
