#pragma once

// Adjudication harness: every registered item compares a closed-form
// statement against the brute-force bundle geometry (or checks an identity)
// on a seeded sample stream, and the results go into a JSON report.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <ctime>
#include <functional>
#include <future>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "tbgeom/bundle.hpp"
#include "tbgeom/cheeger_gromoll.hpp"
#include "tbgeom/errors.hpp"
#include "tbgeom/geodesics.hpp"
#include "tbgeom/koszul.hpp"
#include "tbgeom/local_geometry.hpp"
#include "tbgeom/manifold.hpp"
#include "tbgeom/oracle.hpp"
#include "tbgeom/sampling.hpp"
#include "tbgeom/sasaki.hpp"

namespace tbgeom {

enum class Status { Confirmed, Deviation, NotApplicable, Error };

inline const char* status_name(Status s) {
  switch (s) {
    case Status::Confirmed: return "CONFIRMED";
    case Status::Deviation: return "DEVIATION";
    case Status::NotApplicable: return "NOT_APPLICABLE";
    case Status::Error: return "ERROR";
  }
  return "?";
}

struct RunConfig {
  std::string manifold = "sphere_stereo(1)";
  std::optional<std::string> metric_config;  // JSON file, overrides `manifold`
  std::string f = "exp(x1)";
  std::uint64_t seed = 42;
  std::size_t samples = 20;
  double tol = 1e-6;
  std::string suite = "all";
};

inline const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"all", "oracle", "sasaki", "cg", "geodesic"};
  return names;
}

struct ItemResult {
  std::string id;
  Status status = Status::Error;
  double max_abs_err = 0.0;
  double max_rel_err = 0.0;
  double tol = 0.0;
  nlohmann::json worst_sample;  // null when there is nothing to point at
  std::size_t n_samples = 0;
  bool must_confirm = false;
  std::string note;
};

/// Everything an item needs, built once per run.
struct Context {
  RunConfig cfg;
  ChartedManifold M;
  ScalingField f;
  BundleMetric sasaki, cg;
  std::vector<Sample> samples;

  const BundleMetric& bundle(Variant v) const { return v == Variant::Sasaki ? sasaki : cg; }
};

inline ChartedManifold manifold_of(const RunConfig& cfg) {
  if (cfg.metric_config) return manifold_from_file(*cfg.metric_config);
  return catalog(cfg.manifold);
}

inline std::unique_ptr<Context> make_context(const RunConfig& cfg) {
  if (cfg.samples == 0) throw ConfigError("samples must be positive");
  if (!(cfg.tol > 0.0)) throw ConfigError("tolerance must be positive");
  if (std::find(suite_names().begin(), suite_names().end(), cfg.suite) == suite_names().end())
    throw ConfigError("unknown suite '" + cfg.suite + "'");
  try {
    ChartedManifold M = manifold_of(cfg);
    ScalingField f(cfg.f, M.dim());
    auto samples = sample_stream(cfg.seed, M, cfg.samples, &f);
    return std::unique_ptr<Context>(new Context{cfg, M, f, BundleMetric(Variant::Sasaki, M, f),
                                                BundleMetric(Variant::CheegerGromoll, M, f), std::move(samples)});
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError(e.what());
  }
}

inline nlohmann::json to_json(const Vec& v) {
  nlohmann::json a = nlohmann::json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

inline nlohmann::json sample_json(const Sample& s, std::size_t index) {
  nlohmann::json j{{"index", index}, {"x", to_json(s.tp.x)}, {"u", to_json(s.tp.u)}, {"z", to_json(s.z)}};
  j["frame"] = nlohmann::json::array();
  for (const Vec& e : s.frame) j["frame"].push_back(to_json(e));
  return j;
}

/// Running maximum of errors, relative to max(|reference|, floor).
class ErrorTally {
 public:
  explicit ErrorTally(double floor) : floor_(floor) {}

  void add(std::size_t index, double abs_err, double ref_scale, std::string detail = {}) {
    if (std::isnan(abs_err)) abs_err = std::numeric_limits<double>::infinity();
    const double rel = abs_err / std::max(std::abs(ref_scale), floor_);
    max_abs_ = std::max(max_abs_, abs_err);
    if (!worst_ || rel > max_rel_) {
      max_rel_ = rel;
      worst_ = index;
      detail_ = std::move(detail);
    }
  }
  void add(std::size_t index, const Vec& diff, const Vec& ref, std::string detail = {}) {
    add(index, max_abs(diff), max_abs(ref), std::move(detail));
  }

  bool empty() const { return !worst_; }
  double max_abs() const { return max_abs_; }
  double max_rel() const { return max_rel_; }
  std::size_t worst() const { return *worst_; }
  const std::string& detail() const { return detail_; }

 private:
  static double max_abs(const Vec& v) { return tbgeom::max_abs(v); }
  double floor_;
  double max_abs_ = 0.0, max_rel_ = 0.0;
  std::optional<std::size_t> worst_;
  std::string detail_;
};

struct ItemSpec;
using Evaluator = std::function<ItemResult(const Context&, const ItemSpec&)>;

struct ItemSpec {
  std::string id;
  std::string suite;
  bool must_confirm = false;
  double tol = -1.0;    // negative: use the run tolerance
  double floor = 1e-3;  // relative errors divide by max(|ref|, floor)
  Evaluator eval;

  double tolerance(const RunConfig& cfg) const { return tol > 0.0 ? tol : cfg.tol; }
};

inline ItemResult blank_result(const ItemSpec& spec, const Context& ctx) {
  ItemResult r;
  r.id = spec.id;
  r.tol = spec.tolerance(ctx.cfg);
  r.must_confirm = spec.must_confirm;
  return r;
}

/// Adjudicates a tally against the item tolerance; `samples` resolves the
/// worst index to a sample point (null for indices into other streams).
inline ItemResult finish(const ItemSpec& spec, const Context& ctx, const ErrorTally& t, std::size_t n,
                         const std::vector<Sample>* samples = nullptr, std::string note = {}) {
  ItemResult r = blank_result(spec, ctx);
  r.n_samples = n;
  r.note = std::move(note);
  if (t.empty()) {
    r.status = Status::NotApplicable;
    return r;
  }
  r.max_abs_err = t.max_abs();
  r.max_rel_err = t.max_rel();
  r.status = r.max_rel_err <= r.tol ? Status::Confirmed : Status::Deviation;
  if (samples) r.worst_sample = sample_json((*samples)[t.worst()], t.worst());
  else r.worst_sample = nlohmann::json{{"index", t.worst()}};
  if (!t.detail().empty()) r.worst_sample["detail"] = t.detail();
  return r;
}

/// Lower-bound check: confirmed when the largest observed value reaches
/// `threshold`. Reported as max_rel_err = threshold / observed against tol 1.
inline ItemResult finish_lower_bound(const ItemSpec& spec, const Context& ctx, double observed, double threshold,
                                     std::size_t n, nlohmann::json worst, std::string note) {
  ItemResult r = blank_result(spec, ctx);
  r.n_samples = n;
  r.tol = 1.0;
  r.max_abs_err = observed;
  r.max_rel_err = observed > 0.0 ? threshold / observed : std::numeric_limits<double>::infinity();
  r.status = r.max_rel_err <= r.tol ? Status::Confirmed : Status::Deviation;
  r.worst_sample = std::move(worst);
  r.note = std::move(note);
  return r;
}

namespace items {

inline const Vec& X_of(const Sample& s) { return s.frame[0]; }
inline const Vec& Y_of(const Sample& s) { return s.frame[1]; }

inline BundleField add_fields(BundleField a, const BundleField& b) {
  for (std::size_t k = 0; k < a.size(); ++k) a[k] += b[k];
  return a;
}

inline std::vector<Variant> both_variants() { return {Variant::Sasaki, Variant::CheegerGromoll}; }

// ---- identities of the brute-force geometry ----

inline ItemResult torsion_free(const Context& ctx, const ItemSpec& spec) {
  ErrorTally t(spec.floor);
  for (std::size_t k = 0; k < ctx.samples.size(); ++k) {
    const Sample& s = ctx.samples[k];
    for (Variant var : both_variants()) {
      const BundleOracle O(ctx.bundle(var), s.tp);
      for (Lift a : {Lift::H, Lift::V})
        for (Lift b : {Lift::H, Lift::V}) {
          const BundleField A = O.lift_field(a, X_of(s)), B = O.lift_field(b, s.z);
          const Vec nab = O.nabla(BundleOracle::value(A), B), nba = O.nabla(BundleOracle::value(B), A);
          t.add(k, nab - nba - BundleOracle::bracket(A, B), nab, variant_name(var));
        }
    }
  }
  return finish(spec, ctx, t, ctx.samples.size(), &ctx.samples);
}

inline ItemResult metric_compatibility(const Context& ctx, const ItemSpec& spec) {
  ErrorTally t(spec.floor);
  for (std::size_t k = 0; k < ctx.samples.size(); ++k) {
    const Sample& s = ctx.samples[k];
    for (Variant var : both_variants()) {
      const BundleMetric& bm = ctx.bundle(var);
      const BundleOracle O(bm, s.tp);
      const JetMatrix H = bm.jets(O.coords(), 1);
      const std::size_t n = bm.dim();
      for (Lift a : {Lift::H, Lift::V})
        for (Lift b : {Lift::H, Lift::V})
          for (Lift c : {Lift::H, Lift::V}) {
            const Vec A = O.lift(a, X_of(s));
            const BundleField B = add_fields(O.lift_field(b, Y_of(s)), O.lift_field(Lift::V, s.z));
            const BundleField C = O.lift_field(c, s.z);
            Jet pair(n, 1, 0.0);
            for (std::size_t i = 0; i < n; ++i)
              for (std::size_t j = 0; j < n; ++j) pair += H(i, j) * B[i] * C[j];
            std::vector<double> av(A.data(), A.data() + A.size());
            const double lhs = pair.directional_value(av);
            const double rhs = O.inner(O.nabla(A, B), BundleOracle::value(C)) + O.inner(BundleOracle::value(B), O.nabla(A, C));
            t.add(k, std::abs(lhs - rhs), std::abs(lhs), variant_name(var));
          }
    }
  }
  return finish(spec, ctx, t, ctx.samples.size(), &ctx.samples);
}

/// Four generic bundle vectors built from the sample.
inline std::array<Vec, 4> generic_vectors(const Sample& s) {
  auto stack = [](const Vec& a, const Vec& b) {
    Vec v(a.size() + b.size());
    v << a, b;
    return v;
  };
  return {stack(X_of(s), s.z), stack(s.z, Y_of(s)), stack(Y_of(s), s.tp.u), stack(s.tp.u, X_of(s))};
}

inline ItemResult first_bianchi(const Context& ctx, const ItemSpec& spec) {
  ErrorTally t(spec.floor);
  for (std::size_t k = 0; k < ctx.samples.size(); ++k) {
    const Sample& s = ctx.samples[k];
    const auto [A, B, C, D] = generic_vectors(s);
    (void)D;
    for (Variant var : both_variants()) {
      const BundleOracle O(ctx.bundle(var), s.tp);
      const Vec t1 = O.curvature(A, B, C), t2 = O.curvature(B, C, A), t3 = O.curvature(C, A, B);
      const double ref = std::max({max_abs(t1), max_abs(t2), max_abs(t3)});
      t.add(k, max_abs(t1 + t2 + t3), ref, variant_name(var));
    }
  }
  return finish(spec, ctx, t, ctx.samples.size(), &ctx.samples);
}

inline ItemResult pair_symmetry(const Context& ctx, const ItemSpec& spec) {
  ErrorTally t(spec.floor);
  for (std::size_t k = 0; k < ctx.samples.size(); ++k) {
    const Sample& s = ctx.samples[k];
    const auto [A, B, C, D] = generic_vectors(s);
    for (Variant var : both_variants()) {
      const BundleOracle O(ctx.bundle(var), s.tp);
      const double lhs = O.inner(O.curvature(A, B, C), D), rhs = O.inner(O.curvature(C, D, A), B);
      t.add(k, std::abs(lhs - rhs), std::abs(lhs), variant_name(var));
    }
  }
  return finish(spec, ctx, t, ctx.samples.size(), &ctx.samples);
}

/// Brackets of lifts of constant-coefficient fields:
/// [X^h, Y^h] = -(R(X,Y)u)^v, [X^h, Y^v] = (nabla_X Y)^v, [X^v, Y^v] = 0.
inline ItemResult bracket_identity(const Context& ctx, const ItemSpec& spec) {
  ErrorTally t(spec.floor);
  for (std::size_t k = 0; k < ctx.samples.size(); ++k) {
    const Sample& s = ctx.samples[k];
    const BundleOracle O(ctx.sasaki, s.tp);
    const LocalGeometry L(ctx.M, ctx.f, s.tp);
    const Vec &X = X_of(s), &Y = s.z;
    const Vec hh = BundleOracle::bracket(O.lift_field(Lift::H, X), O.lift_field(Lift::H, Y));
    const Vec want_hh = vertical_lift(-L.R(X, Y, s.tp.u));
    t.add(k, hh - want_hh, want_hh, "hh");
    const Vec hv = BundleOracle::bracket(O.lift_field(Lift::H, X), O.lift_field(Lift::V, Y));
    const Vec want_hv = vertical_lift(L.Gamma(X, Y));
    t.add(k, hv - want_hv, want_hv, "hv");
    const Vec vv = BundleOracle::bracket(O.lift_field(Lift::V, X), O.lift_field(Lift::V, Y));
    t.add(k, vv, Vec::Zero(vv.size()), "vv");
  }
  return finish(spec, ctx, t, ctx.samples.size(), &ctx.samples);
}

// ---- connection pairings of lifts ----

inline Evaluator koszul(Variant var, KoszulCase kc, bool printed) {
  return [=](const Context& ctx, const ItemSpec& spec) {
    ErrorTally t(spec.floor);
    const BundleMetric& bm = ctx.bundle(var);
    for (std::size_t k = 0; k < ctx.samples.size(); ++k) {
      const Sample& s = ctx.samples[k];
      const BundleOracle O(bm, s.tp);
      const KoszulPairings P(bm, s.tp);
      const Vec &X = X_of(s), &Y = Y_of(s), &Z = s.z;
      const double scale = kc.c == Lift::H ? P.local().f() : 1.0;
      const double lhs = O.inner(O.nabla(O.lift(kc.a, X), O.lift_field(kc.b, Y)), O.lift(kc.c, Z)) / scale;
      const double rhs = P.pairing(kc, X, Y, Z, printed);
      t.add(k, std::abs(lhs - rhs), std::abs(lhs));
    }
    return finish(spec, ctx, t, ctx.samples.size(), &ctx.samples);
  };
}

inline Evaluator connection(Variant var, Lift a, Lift b) {
  return [=](const Context& ctx, const ItemSpec& spec) {
    ErrorTally t(spec.floor);
    const BundleMetric& bm = ctx.bundle(var);
    for (std::size_t k = 0; k < ctx.samples.size(); ++k) {
      const Sample& s = ctx.samples[k];
      const BundleOracle O(bm, s.tp);
      const LocalGeometry L(ctx.M, ctx.f, s.tp);
      const Vec &X = X_of(s), &Y = s.z;
      const FrameResult closed =
          var == Variant::Sasaki ? sasaki::connection(L, a, X, b, Y) : cg::connection(L, a, X, b, Y);
      const FrameResult ref = O.decompose(O.nabla(O.lift(a, X), O.lift_field(b, Y)));
      t.add(k, (closed - ref).stacked(), ref.stacked());
    }
    return finish(spec, ctx, t, ctx.samples.size(), &ctx.samples);
  };
}

// ---- curvature ----

inline Evaluator curvature(Variant var, Pattern p, int variant_flag) {
  return [=](const Context& ctx, const ItemSpec& spec) {
    ErrorTally t(spec.floor);
    const BundleMetric& bm = ctx.bundle(var);
    const auto lifts = pattern_lifts(p);
    for (std::size_t k = 0; k < ctx.samples.size(); ++k) {
      const Sample& s = ctx.samples[k];
      const BundleOracle O(bm, s.tp);
      const LocalGeometry L(ctx.M, ctx.f, s.tp);
      const Vec &X = X_of(s), &Y = Y_of(s), &Z = s.z;
      const FrameResult closed =
          var == Variant::Sasaki
              ? sasaki::curvature(L, p, X, Y, Z, variant_flag ? sasaki::HvhVertical::RXZY : sasaki::HvhVertical::RXZu)
              : cg::curvature(L, p, X, Y, Z, variant_flag ? cg::HhvDerivative::AlongX : cg::HhvDerivative::AlongZ);
      const FrameResult ref = O.decompose(O.curvature(O.lift(lifts[0], X), O.lift(lifts[1], Y), O.lift(lifts[2], Z)));
      const FrameResult d = closed - ref;
      t.add(k, d.stacked(), ref.stacked(), "hor " + std::to_string(max_abs(d.hor)) + " ver " + std::to_string(max_abs(d.ver)));
    }
    return finish(spec, ctx, t, ctx.samples.size(), &ctx.samples);
  };
}

// ---- sectional and scalar curvature, rescaled Sasaki ----

inline Evaluator sasaki_sectional(Plane p) {
  return [=](const Context& ctx, const ItemSpec& spec) {
    ErrorTally t(spec.floor);
    const auto lifts = plane_lifts(p);
    for (std::size_t k = 0; k < ctx.samples.size(); ++k) {
      const Sample& s = ctx.samples[k];
      const BundleOracle O(ctx.sasaki, s.tp);
      const LocalGeometry L(ctx.M, ctx.f, s.tp);
      const double closed = sasaki::sectional(L, p, X_of(s), Y_of(s));
      const double ref = O.sectional(O.lift(lifts[0], X_of(s)), O.lift(lifts[1], Y_of(s)));
      t.add(k, std::abs(closed - ref), ref);
    }
    return finish(spec, ctx, t, ctx.samples.size(), &ctx.samples);
  };
}

inline ItemResult sasaki_scalar(const Context& ctx, const ItemSpec& spec) {
  ErrorTally t(spec.floor);
  for (std::size_t k = 0; k < ctx.samples.size(); ++k) {
    const Sample& s = ctx.samples[k];
    const BundleOracle O(ctx.sasaki, s.tp);
    const LocalGeometry L(ctx.M, ctx.f, s.tp);
    const double closed = sasaki::scalar(L, s.frame), ref = O.scalar();
    t.add(k, std::abs(closed - ref), ref);
  }
  return finish(spec, ctx, t, ctx.samples.size(), &ctx.samples);
}

inline ItemResult sasaki_frame_sum(const Context& ctx, const ItemSpec& spec) {
  ErrorTally t(spec.floor);
  for (std::size_t k = 0; k < ctx.samples.size(); ++k) {
    const Sample& s = ctx.samples[k];
    const LocalGeometry L(ctx.M, ctx.f, s.tp);
    const double a = sasaki::scalar(L, s.frame), b = sasaki::scalar_frame_sum(L, s.frame);
    t.add(k, std::abs(a - b), a);
  }
  return finish(spec, ctx, t, ctx.samples.size(), &ctx.samples);
}

/// Mixed sectional curvature along the fiber ray (x, t u): the oracle value
/// against t^2 |R(u,Y)X|^2 / 4f^2, which grows without bound unless R vanishes.
inline ItemResult sasaki_sectional_sweep(const Context& ctx, const ItemSpec& spec) {
  ErrorTally t(spec.floor);
  const std::vector<double> ts{1.0, 2.0, 4.0, 8.0};
  for (std::size_t k = 0; k < ctx.samples.size(); ++k) {
    const Sample& s = ctx.samples[k];
    const LocalGeometry L(ctx.M, ctx.f, s.tp);
    const double base = sasaki::sectional(L, Plane::HV, X_of(s), Y_of(s));
    for (double tt : ts) {
      const TangentPoint tp{s.tp.x, tt * s.tp.u};
      const BundleOracle O(ctx.sasaki, tp);
      const double ref = O.sectional(O.lift(Lift::H, X_of(s)), O.lift(Lift::V, Y_of(s)));
      t.add(k, std::abs(tt * tt * base - ref), ref, "t=" + std::to_string(tt));
    }
  }
  return finish(spec, ctx, t, ctx.samples.size(), &ctx.samples);
}

inline ItemResult sasaki_flatness(const Context& ctx, const ItemSpec& spec) {
  const ChartedManifold E = catalog("euclidean(" + std::to_string(ctx.M.dim()) + ")");
  const ScalingField one("1", E.dim());
  const BundleMetric bm(Variant::Sasaki, E, one);
  const auto samples = sample_stream(derive_seed(ctx.cfg.seed, "flatness"), E, 10, &one);
  ErrorTally t(spec.floor);
  for (std::size_t k = 0; k < samples.size(); ++k) t.add(k, BundleOracle(bm, samples[k].tp).max_abs_riemann(), 0.0);
  return finish(spec, ctx, t, samples.size(), &samples, "euclidean base, f = 1");
}

inline ItemResult sasaki_unflat(const Context& ctx, const ItemSpec& spec) {
  const ChartedManifold E = catalog("euclidean(" + std::to_string(ctx.M.dim()) + ")");
  const ScalingField f("1+0.5*x1^2", E.dim());
  const BundleMetric bm(Variant::Sasaki, E, f);
  const auto samples = sample_stream(derive_seed(ctx.cfg.seed, "unflat"), E, 10, &f);
  double best = -1.0;
  nlohmann::json worst;
  const std::size_t n = bm.dim();
  for (std::size_t k = 0; k < samples.size(); ++k) {
    std::size_t where = 0;
    const double v = BundleOracle(bm, samples[k].tp).max_abs_riemann(&where);
    if (v > best) {
      best = v;
      worst = sample_json(samples[k], k);
      // idx4 = ((l n + i) n + j) n + c
      worst["component"] = {{"l", where / (n * n * n)}, {"i", where / (n * n) % n}, {"j", where / n % n}, {"k", where % n}};
    }
  }
  return finish_lower_bound(spec, ctx, best, 1e-3, samples.size(), worst,
                            "euclidean base, f = 1+0.5*x1^2; largest |R^l_ijk| must reach 1e-3");
}

// ---- rescaled Cheeger-Gromoll ----

inline Evaluator cg_area(Plane p) {
  return [=](const Context& ctx, const ItemSpec& spec) {
    ErrorTally t(spec.floor);
    const auto lifts = plane_lifts(p);
    for (std::size_t k = 0; k < ctx.samples.size(); ++k) {
      const Sample& s = ctx.samples[k];
      const LocalGeometry L(ctx.M, ctx.f, s.tp);
      const Mat N = connection_map(ctx.M, s.tp);
      const double closed = cg::q_area(L, p, X_of(s), Y_of(s));
      const double direct =
          cg::q_area_direct(ctx.cg.value(s.tp), lift(N, lifts[0], X_of(s)), lift(N, lifts[1], Y_of(s)));
      t.add(k, std::abs(closed - direct), direct);
    }
    return finish(spec, ctx, t, ctx.samples.size(), &ctx.samples);
  };
}

inline Evaluator cg_g_form(Plane p) {
  return [=](const Context& ctx, const ItemSpec& spec) {
    ErrorTally t(spec.floor);
    const auto lifts = plane_lifts(p);
    for (std::size_t k = 0; k < ctx.samples.size(); ++k) {
      const Sample& s = ctx.samples[k];
      const BundleOracle O(ctx.cg, s.tp);
      const LocalGeometry L(ctx.M, ctx.f, s.tp);
      const double closed = cg::g_form(L, p, X_of(s), Y_of(s));
      const double ref = O.curvature_form(O.lift(lifts[0], X_of(s)), O.lift(lifts[1], Y_of(s)));
      t.add(k, std::abs(closed - ref), ref);
    }
    return finish(spec, ctx, t, ctx.samples.size(), &ctx.samples);
  };
}

inline Evaluator cg_sectional(Plane p, cg::HhCoefficient hh) {
  return [=](const Context& ctx, const ItemSpec& spec) {
    ErrorTally t(spec.floor);
    const auto lifts = plane_lifts(p);
    for (std::size_t k = 0; k < ctx.samples.size(); ++k) {
      const Sample& s = ctx.samples[k];
      const BundleOracle O(ctx.cg, s.tp);
      const LocalGeometry L(ctx.M, ctx.f, s.tp);
      const double closed = cg::sectional(L, p, X_of(s), Y_of(s), hh);
      const double ref = O.sectional(O.lift(lifts[0], X_of(s)), O.lift(lifts[1], Y_of(s)));
      t.add(k, std::abs(closed - ref), ref);
    }
    return finish(spec, ctx, t, ctx.samples.size(), &ctx.samples);
  };
}

/// Sectional formulas against curvature form divided by squared area, both
/// closed form.
inline Evaluator cg_division(cg::HhCoefficient hh) {
  return [=](const Context& ctx, const ItemSpec& spec) {
    ErrorTally t(spec.floor);
    for (std::size_t k = 0; k < ctx.samples.size(); ++k) {
      const Sample& s = ctx.samples[k];
      const LocalGeometry L(ctx.M, ctx.f, s.tp);
      for (Plane p : {Plane::HH, Plane::HV, Plane::VV}) {
        const double sec = cg::sectional(L, p, X_of(s), Y_of(s), hh);
        const double ratio = cg::g_form(L, p, X_of(s), Y_of(s)) / cg::q_area(L, p, X_of(s), Y_of(s));
        t.add(k, std::abs(sec - ratio), ratio, plane_name(p));
      }
    }
    return finish(spec, ctx, t, ctx.samples.size(), &ctx.samples);
  };
}

inline Evaluator cg_space_form(Plane p) {
  return [=](const Context& ctx, const ItemSpec& spec) {
    if (!ctx.M.kappa()) {
      ItemResult r = blank_result(spec, ctx);
      r.status = Status::NotApplicable;
      r.note = "base is not a catalog space form";
      return r;
    }
    const double kappa = *ctx.M.kappa();
    ErrorTally t(spec.floor);
    for (std::size_t k = 0; k < ctx.samples.size(); ++k) {
      const Sample& s = ctx.samples[k];
      const LocalGeometry L(ctx.M, ctx.f, s.tp);
      const Vec &X = X_of(s), &Y = Y_of(s), &u = s.tp.u;
      const double l = p == Plane::HH ? sasaki::l_f(L, X, Y) : 0.0;
      const double closed = cg::sectional_constant_kappa(kappa, L.f(), L.g(X, u), L.g(Y, u), L.alpha(), p, l);
      const double general = cg::sectional(L, p, X, Y);
      t.add(k, std::abs(closed - general), general);
    }
    return finish(spec, ctx, t, ctx.samples.size(), &ctx.samples);
  };
}

inline ItemResult cg_space_form_identity(const Context& ctx, const ItemSpec& spec) {
  if (!ctx.M.kappa()) {
    ItemResult r = blank_result(spec, ctx);
    r.status = Status::NotApplicable;
    r.note = "base is not a catalog space form";
    return r;
  }
  const double kappa = *ctx.M.kappa();
  ErrorTally t(spec.floor);
  for (std::size_t k = 0; k < ctx.samples.size(); ++k) {
    const Sample& s = ctx.samples[k];
    const LocalGeometry L(ctx.M, ctx.f, s.tp);
    const Vec &X = X_of(s), &Y = Y_of(s), &u = s.tp.u;
    const double lhs = L.norm2(L.R(u, Y, X)), gxu = L.g(X, u);
    const double rhs = kappa * kappa * gxu * gxu;
    t.add(k, std::abs(lhs - rhs), rhs);
  }
  return finish(spec, ctx, t, ctx.samples.size(), &ctx.samples);
}

inline ItemResult cg_u_pairing(const Context& ctx, const ItemSpec& spec) {
  ErrorTally t(spec.floor);
  for (std::size_t k = 0; k < ctx.samples.size(); ++k) {
    const Sample& s = ctx.samples[k];
    const Mat H = ctx.cg.value(s.tp);
    const double lhs = vertical_lift(s.z).dot(H * canonical_U(s.tp));
    const double rhs = inner(ctx.M, s.tp.x, s.z, s.tp.u);
    t.add(k, std::abs(lhs - rhs), rhs);
  }
  return finish(spec, ctx, t, ctx.samples.size(), &ctx.samples);
}

inline ItemResult cg_adapted_frame(const Context& ctx, const ItemSpec& spec) {
  ErrorTally t(spec.floor);
  for (std::size_t k = 0; k < ctx.samples.size(); ++k) {
    const Sample& s = ctx.samples[k];
    const cg::AdaptedFrame fr = cg::adapted_frame(ctx.M, ctx.f, s.tp);
    const Mat H = ctx.cg.value(s.tp);
    Mat T(H.rows(), static_cast<Eigen::Index>(fr.t.size()));
    for (std::size_t a = 0; a < fr.t.size(); ++a) T.col(static_cast<Eigen::Index>(a)) = fr.t[a];
    const Mat gram = T.transpose() * H * T;
    t.add(k, (gram - Mat::Identity(gram.rows(), gram.cols())).cwiseAbs().maxCoeff(), 1.0);
  }
  return finish(spec, ctx, t, ctx.samples.size(), &ctx.samples);
}

inline ItemResult cg_adapted_frame_sectional(const Context& ctx, const ItemSpec& spec) {
  ErrorTally t(spec.floor);
  for (std::size_t k = 0; k < ctx.samples.size(); ++k) {
    const Sample& s = ctx.samples[k];
    const LocalGeometry L(ctx.M, ctx.f, s.tp);
    const BundleOracle O(ctx.cg, s.tp);
    const cg::AdaptedFrame fr = cg::adapted_frame(L, O.N());
    const Mat K = cg::adapted_frame_sectionals(L, fr.base);
    for (std::size_t a = 0; a < fr.t.size(); ++a)
      for (std::size_t b = a + 1; b < fr.t.size(); ++b) {
        const double ref = O.sectional(fr.t[a], fr.t[b]);
        t.add(k, std::abs(K(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) - ref), ref,
              "t" + std::to_string(a + 1) + ",t" + std::to_string(b + 1));
      }
  }
  return finish(spec, ctx, t, ctx.samples.size(), &ctx.samples);
}

inline Evaluator cg_scalar(bool base_scaled) {
  return [=](const Context& ctx, const ItemSpec& spec) {
    ErrorTally t(spec.floor);
    for (std::size_t k = 0; k < ctx.samples.size(); ++k) {
      const Sample& s = ctx.samples[k];
      const LocalGeometry L(ctx.M, ctx.f, s.tp);
      const BundleOracle O(ctx.cg, s.tp);
      const auto e = cg::base_frame_along_u(L.G(), s.tp.u);
      const double closed = cg::scalar(L, e, base_scaled), ref = O.scalar();
      t.add(k, std::abs(closed - ref), ref);
    }
    return finish(spec, ctx, t, ctx.samples.size(), &ctx.samples);
  };
}

// ---- geodesics ----

inline constexpr std::size_t kGeodesicStarts = 4;

/// Start states for TM geodesics, drawn from their own stream: x in the
/// middle half of the chart box, u in [-1,1]^m, velocities in [-1/4, 1/4].
inline std::vector<BundleState> geodesic_starts(const Context& ctx, std::size_t n) {
  Rng rng(derive_seed(ctx.cfg.seed, "geodesic"));
  std::vector<BundleState> out;
  const std::size_t m = ctx.M.dim();
  for (std::size_t k = 0; k < n; ++k) {
    BundleState s;
    s.x = Vec(m);
    for (std::size_t i = 0; i < m; ++i) {
      const Interval& iv = ctx.M.box()[i];
      const double c = 0.5 * (iv.lo + iv.hi), h = 0.25 * (iv.hi - iv.lo);
      s.x[i] = rng.uniform(c - h, c + h);
    }
    s.u = rng.uniform_vec(m, -1.0, 1.0);
    s.xdot = rng.uniform_vec(m, -0.25, 0.25);
    s.udot = rng.uniform_vec(m, -0.25, 0.25);
    out.push_back(s);
  }
  return out;
}

/// Integrates from s, halving the start velocity whenever the chart is left.
inline Trajectory integrate_in_chart(const BundleMetric& bm, BundleState s, double t_end, double h) {
  for (int attempt = 0;; ++attempt) {
    try {
      return integrate(bm, s, t_end, h);
    } catch (const ChartExit&) {
      if (attempt >= 10) throw;
      s.xdot *= 0.5;
      s.udot *= 0.5;
    }
  }
}

inline nlohmann::json state_json(const BundleState& s, std::size_t index) {
  return {{"index", index}, {"x", to_json(s.x)}, {"u", to_json(s.u)}, {"xdot", to_json(s.xdot)}, {"udot", to_json(s.udot)}};
}

inline ItemResult finish_states(const ItemSpec& spec, const Context& ctx, const ErrorTally& t,
                                 const std::vector<BundleState>& starts, std::string note = {}) {
  ItemResult r = finish(spec, ctx, t, starts.size(), nullptr, std::move(note));
  if (!t.empty()) {
    nlohmann::json w = state_json(starts[t.worst()], t.worst());
    if (!t.detail().empty()) w["detail"] = t.detail();
    r.worst_sample = w;
  }
  return r;
}

inline ItemResult energy_conservation(const Context& ctx, const ItemSpec& spec) {
  const auto starts = geodesic_starts(ctx, kGeodesicStarts);
  ErrorTally t(spec.floor);
  for (std::size_t k = 0; k < starts.size(); ++k)
    for (Variant var : both_variants()) {
      const Trajectory tr = integrate_in_chart(ctx.bundle(var), starts[k], 1.0, 1e-3);
      t.add(k, tr.max_relative_energy_drift(), 0.0, variant_name(var));
    }
  return finish_states(spec, ctx, t, starts, "relative energy drift, t in [0,1], h = 1e-3");
}

inline constexpr double kOrderCheckStep = 0.1;

/// Ratio of energy drifts at steps h and h/2.
inline double drift_ratio(const BundleMetric& bm, const BundleState& s, double h, double t_end = 1.0) {
  const double coarse = integrate(bm, s, t_end, h).max_relative_energy_drift();
  const double fine = integrate(bm, s, t_end, 0.5 * h).max_relative_energy_drift();
  return coarse / fine;
}

inline ItemResult order_check(const Context& ctx, const ItemSpec& spec) {
  const auto starts = geodesic_starts(ctx, kGeodesicStarts);
  double worst_ratio = std::numeric_limits<double>::infinity();
  std::size_t worst = 0;
  for (std::size_t k = 0; k < starts.size(); ++k) {
    BundleState s = starts[k];
    // the halving retry of integrate_in_chart picks a start that stays inside
    const Trajectory probe = integrate_in_chart(ctx.sasaki, s, 1.0, kOrderCheckStep);
    s.xdot = probe.states.front().xdot;
    s.udot = probe.states.front().udot;
    const double r = drift_ratio(ctx.sasaki, s, kOrderCheckStep);
    if (!(r >= worst_ratio)) worst_ratio = r, worst = k;
  }
  ItemResult r = finish_lower_bound(spec, ctx, worst_ratio, 8.0, starts.size(), state_json(starts[worst], worst),
                                    "smallest drift ratio between h = 0.1 and h = 0.05 must reach 8");
  return r;
}

inline ItemResult oracle_consistency(const Context& ctx, const ItemSpec& spec) {
  const auto starts = geodesic_starts(ctx, kGeodesicStarts);
  ErrorTally t(spec.floor);
  const double h = 1e-3;
  for (std::size_t k = 0; k < starts.size(); ++k) {
    const Trajectory tr = integrate_in_chart(ctx.sasaki, starts[k], 1.0, h);
    const std::size_t n = tr.states.size();
    for (std::size_t q = 1; q <= 10; ++q) {
      const std::size_t i = q * (n - 1) / 11;
      const BundleState &a = tr.states[i - 1], &b = tr.states[i], &c = tr.states[i + 1];
      const Vec y = BundleMetric::point({b.x, b.u});
      Vec v(y.size()), dv(y.size());
      v << b.xdot, b.udot;
      dv << (c.xdot - a.xdot) / (2 * h), (c.udot - a.udot) / (2 * h);
      const Vec acc = dv + contract_gamma(christoffel(ctx.sasaki.metric_fn(), y), v, v);
      t.add(k, std::sqrt(std::max(0.0, acc.dot(ctx.sasaki.value(y) * acc))), 0.0, "t=" + std::to_string(b.t));
    }
  }
  return finish_states(spec, ctx, t, starts, "central-difference acceleration along RK4 trajectories");
}

/// Points of the test curves through a sample: a coordinate line, a
/// coordinate circle and a base geodesic, all near half the sample point.
inline std::vector<CurveJet> test_curves(const Context& ctx, const Sample& s) {
  const Vec x0 = 0.5 * s.tp.x;
  std::vector<CurveJet> out;
  for (const auto& c : line_curve(x0, 0.3 * X_of(s), {0.0, 0.05, 0.1})) out.push_back(c);
  for (const auto& c : circle_curve(x0, 0.1, {0.0, 1.0, 2.0, 3.0})) out.push_back(c);
  const auto g = base_geodesic(ctx.M, x0, 0.3 * Y_of(s), 0.2, 0.01);
  for (std::size_t i = 0; i < g.size(); i += 5) out.push_back(g[i]);
  std::erase_if(out, [&](const CurveJet& c) { return !ctx.M.contains(c.x); });
  return out;
}

inline ItemResult accel_decomposition(const Context& ctx, const ItemSpec& spec) {
  ErrorTally t(spec.floor);
  for (std::size_t k = 0; k < ctx.samples.size(); ++k)
    for (const CurveJet& c : test_curves(ctx, ctx.samples[k])) {
      const LiftResidual r = lift_residual(ctx.sasaki, c);
      Vec ref(2 * c.x.size()), mine(2 * c.x.size());
      ref << r.oracle_parts.hor, r.oracle_parts.ver;
      mine << r.a_vec, r.b_vec;
      t.add(k, mine - ref, ref);
    }
  return finish(spec, ctx, t, ctx.samples.size(), &ctx.samples);
}

inline ItemResult lift_residual_item(const Context& ctx, const ItemSpec& spec) {
  ErrorTally t(1.0);
  for (std::size_t k = 0; k < ctx.samples.size(); ++k) {
    const Sample& s = ctx.samples[k];
    for (const auto& r : lift_residual(ctx.sasaki, base_geodesic(ctx.M, 0.5 * s.tp.x, 0.3 * X_of(s), 0.2, 0.01)))
      t.add(k, r.oracle, 0.0);
  }
  if (ctx.f.is_constant())
    return finish(spec, ctx, t, ctx.samples.size(), &ctx.samples,
                  "constant f: lifts of base geodesics must be geodesics");
  return finish_lower_bound(spec, ctx, t.max_abs(), 1e-3, ctx.samples.size(),
                            sample_json(ctx.samples[t.worst()], t.worst()),
                            "non-constant f: some lifted base geodesic must have |nabla_T T| >= 1e-3");
}

inline ItemResult constant_speed(const Context& ctx, const ItemSpec& spec) {
  auto starts = geodesic_starts(ctx, kGeodesicStarts);
  for (auto& s : starts) s.u.setZero(), s.udot.setZero();
  ErrorTally t(spec.floor);
  std::size_t used = 0;
  for (std::size_t k = 0; k < starts.size(); ++k) {
    const ConstantSpeedReport rep = constant_speed_check(ctx.sasaki, integrate_in_chart(ctx.sasaki, starts[k], 0.5, 1e-2));
    if (!rep.applicable) continue;
    ++used;
    t.add(k, rep.residual, 0.0);
  }
  return finish_states(spec, ctx, t, starts,
                       "zero-section starts; " + std::to_string(used) + " trajectories kept |u| constant");
}

inline ItemResult two_geodesics(const Context& ctx, const ItemSpec& spec) {
  ErrorTally t(spec.floor);
  double closest = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < ctx.samples.size(); ++k) {
    const Sample& s = ctx.samples[k];
    const TwoGeodesicReport rep = two_geodesic_probe(ctx.sasaki, 0.5 * s.tp.x, 0.3 * X_of(s), 0.3 * Y_of(s));
    const double res = std::max(rep.residual1, rep.residual2);
    closest = std::min(closest, res);
    if (res > spec.tolerance(ctx.cfg)) continue;  // hypothesis not met here
    t.add(k, rep.grad_norm, 0.0);
  }
  if (t.empty()) {
    ItemResult r = blank_result(spec, ctx);
    r.status = Status::NotApplicable;
    r.n_samples = ctx.samples.size();
    r.max_abs_err = closest;
    r.note = "no pair of lifted geodesics was geodesic; smallest lift residual in max_abs_err";
    return r;
  }
  return finish(spec, ctx, t, ctx.samples.size(), &ctx.samples, "|grad f| where both lifts are geodesic");
}

inline ItemResult submersion(const Context& ctx, const ItemSpec& spec) {
  const auto starts = geodesic_starts(ctx, kGeodesicStarts);
  double worst = 0.0;
  std::size_t at = 0;
  for (std::size_t k = 0; k < starts.size(); ++k) {
    const double v = submersion_check(ctx.sasaki, integrate_in_chart(ctx.sasaki, starts[k], 0.5, 1e-2));
    if (v > worst) worst = v, at = k;
  }
  ItemResult r = blank_result(spec, ctx);
  r.status = Status::NotApplicable;
  r.n_samples = starts.size();
  r.max_abs_err = r.max_rel_err = worst;
  r.worst_sample = state_json(starts[at], at);
  r.note = "measurement only: base acceleration of projected TM geodesics";
  return r;
}

}  // namespace items

/// The item registry in report order.
inline const std::vector<ItemSpec>& registry() {
  static const std::vector<ItemSpec> reg = [] {
    std::vector<ItemSpec> r;
    auto add = [&](std::string id, std::string suite, bool must, double tol, double floor, Evaluator e) {
      r.push_back({std::move(id), std::move(suite), must, tol, floor, std::move(e)});
    };
    constexpr double kRun = -1.0;  // run tolerance
    add("oracle.torsion_free", "oracle", true, 1e-12, 1.0, items::torsion_free);
    add("oracle.metric_compatibility", "oracle", true, 1e-9, 1.0, items::metric_compatibility);
    add("oracle.first_bianchi", "oracle", true, 1e-8, 1.0, items::first_bianchi);
    add("oracle.pair_symmetry", "oracle", true, 1e-8, 1.0, items::pair_symmetry);
    add("oracle.bracket_identity", "oracle", true, 1e-7, 1.0, items::bracket_identity);

    for (Variant var : {Variant::Sasaki, Variant::CheegerGromoll}) {
      const std::string v = variant_name(var);
      for (const KoszulCase& kc : koszul_cases())
        add("koszul." + v + "." + koszul_name(kc), v, true, kRun, 1e-3, items::koszul(var, kc, false));
      add("koszul." + v + ".vv_v.alt", v, false, kRun, 1e-3, items::koszul(var, {Lift::V, Lift::V, Lift::V}, true));

      if (var == Variant::Sasaki) {
        add("sasaki.flatness", v, true, 1e-9, 1.0, items::sasaki_flatness);
        add("sasaki.unflat", v, false, kRun, 1.0, items::sasaki_unflat);
      }
      const std::pair<const char*, std::pair<Lift, Lift>> conn[] = {{"hh", {Lift::H, Lift::H}},
                                                                     {"hv", {Lift::H, Lift::V}},
                                                                     {"vh", {Lift::V, Lift::H}},
                                                                     {"vv", {Lift::V, Lift::V}}};
      for (const auto& [name, ab] : conn)
        add(v + ".connection." + name, v, true, kRun, 1e-3, items::connection(var, ab.first, ab.second));

      if (var == Variant::Sasaki) {
        for (Pattern p : {Pattern::VVV, Pattern::HVV, Pattern::VVH, Pattern::HVH})
          add(v + ".curvature." + pattern_name(p), v, false, kRun, 1e-3, items::curvature(var, p, 0));
        add(v + ".curvature.hvh.alt", v, false, kRun, 1e-3, items::curvature(var, Pattern::HVH, 1));
        for (Pattern p : {Pattern::HHV, Pattern::HHH})
          add(v + ".curvature." + pattern_name(p), v, false, kRun, 1e-3, items::curvature(var, p, 0));
        for (Plane p : {Plane::VV, Plane::HV, Plane::HH})
          add(v + ".sectional." + plane_name(p), v, false, kRun, 1e-3, items::sasaki_sectional(p));
        add("sasaki.scalar", v, false, kRun, 1e-3, items::sasaki_scalar);
        add("sasaki.scalar.frame_sum", v, false, 1e-9, 1.0, items::sasaki_frame_sum);
        add("sasaki.sectional_sweep", v, false, kRun, 1e-3, items::sasaki_sectional_sweep);
      } else {
        for (Pattern p : {Pattern::HHH, Pattern::HHV})
          add(v + ".curvature." + pattern_name(p), v, false, kRun, 1e-3, items::curvature(var, p, 0));
        add(v + ".curvature.hhv.alt", v, false, kRun, 1e-3, items::curvature(var, Pattern::HHV, 1));
        for (Pattern p : {Pattern::HVH, Pattern::HVV, Pattern::VVH, Pattern::VVV})
          add(v + ".curvature." + pattern_name(p), v, false, kRun, 1e-3, items::curvature(var, p, 0));
        for (Plane p : {Plane::HH, Plane::HV, Plane::VV})
          add("cg.area." + std::string(plane_name(p)), v, true, 1e-10, 1.0, items::cg_area(p));
        for (Plane p : {Plane::HH, Plane::HV, Plane::VV})
          add("cg.g_form." + std::string(plane_name(p)), v, false, kRun, 1e-3, items::cg_g_form(p));
        add("cg.sectional.hh", v, false, kRun, 1e-3, items::cg_sectional(Plane::HH, cg::HhCoefficient::Stated));
        add("cg.sectional.hh.alt", v, false, kRun, 1e-3,
            items::cg_sectional(Plane::HH, cg::HhCoefficient::FromAreaDivision));
        add("cg.sectional.hv", v, false, kRun, 1e-3, items::cg_sectional(Plane::HV, cg::HhCoefficient::Stated));
        add("cg.sectional.vv", v, false, kRun, 1e-3, items::cg_sectional(Plane::VV, cg::HhCoefficient::Stated));
        add("cg.sectional.division", v, false, 1e-9, 1.0, items::cg_division(cg::HhCoefficient::FromAreaDivision));
        add("cg.sectional.division.as_printed", v, false, 1e-9, 1.0, items::cg_division(cg::HhCoefficient::Stated));
        for (Plane p : {Plane::HH, Plane::HV, Plane::VV})
          add("cg.space_form." + std::string(plane_name(p)), v, false, 1e-9, 1.0, items::cg_space_form(p));
        add("cg.space_form.identity", v, false, 1e-9, 1.0, items::cg_space_form_identity);
        add("cg.u_pairing", v, false, 1e-12, 1.0, items::cg_u_pairing);
        add("cg.adapted_frame", v, false, 1e-10, 1.0, items::cg_adapted_frame);
        add("cg.adapted_frame.sectional", v, false, kRun, 1e-3, items::cg_adapted_frame_sectional);
        add("cg.scalar", v, false, kRun, 1e-3, items::cg_scalar(false));
        add("cg.scalar.alt", v, false, kRun, 1e-3, items::cg_scalar(true));
      }
    }

    add("geodesic.energy_conservation", "geodesic", true, 1e-6, 1.0, items::energy_conservation);
    add("geodesic.order_check", "geodesic", false, kRun, 1.0, items::order_check);
    add("geodesic.oracle_consistency", "geodesic", false, 1e-5, 1.0, items::oracle_consistency);
    add("geodesic.accel_decomposition", "geodesic", false, kRun, 1e-3, items::accel_decomposition);
    add("geodesic.lift_residual", "geodesic", false, kRun, 1.0, items::lift_residual_item);
    add("geodesic.constant_speed", "geodesic", false, kRun, 1.0, items::constant_speed);
    add("geodesic.two_geodesics", "geodesic", false, kRun, 1.0, items::two_geodesics);
    add("geodesic.submersion", "geodesic", false, kRun, 1.0, items::submersion);
    return r;
  }();
  return reg;
}

inline const ItemSpec& find_item(const std::string& id) {
  for (const auto& s : registry())
    if (s.id == id) return s;
  throw PreconditionError("unknown item '" + id + "'");
}

/// Runs one item; failures become an ERROR result instead of propagating.
inline ItemResult run_item(const ItemSpec& spec, const Context& ctx) {
  try {
    return spec.eval(ctx, spec);
  } catch (const std::exception& e) {
    ItemResult r = blank_result(spec, ctx);
    r.status = Status::Error;
    r.note = e.what();
    return r;
  }
}

struct VerificationReport {
  RunConfig cfg;
  std::string manifold_name;
  std::vector<ItemResult> items;

  std::size_t count(Status s) const {
    return static_cast<std::size_t>(std::count_if(items.begin(), items.end(), [&](const ItemResult& r) { return r.status == s; }));
  }
  /// 0 iff every must-confirm item in the report is CONFIRMED.
  int exit_code() const {
    for (const auto& r : items)
      if (r.must_confirm && r.status != Status::Confirmed) return 1;
    return 0;
  }
};

inline VerificationReport run_suite(const RunConfig& cfg) {
  const auto ctx = make_context(cfg);
  std::vector<const ItemSpec*> chosen;
  for (const auto& s : registry())
    if (cfg.suite == "all" || s.suite == cfg.suite) chosen.push_back(&s);
  std::vector<std::future<ItemResult>> futures;
  for (const ItemSpec* s : chosen) futures.push_back(std::async(std::launch::async, [s, &ctx] { return run_item(*s, *ctx); }));
  VerificationReport rep{cfg, ctx->M.name(), {}};
  for (auto& fu : futures) rep.items.push_back(fu.get());
  return rep;
}

inline std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

inline nlohmann::json to_json(const ItemResult& r) {
  return {{"id", r.id},
          {"status", status_name(r.status)},
          {"max_abs_err", r.max_abs_err},
          {"max_rel_err", r.max_rel_err},
          {"tol", r.tol},
          {"worst_sample", r.worst_sample},
          {"n_samples", r.n_samples},
          {"must_confirm", r.must_confirm},
          {"note", r.note}};
}

inline nlohmann::json config_json(const RunConfig& cfg, const std::string& manifold_name) {
  nlohmann::json c{{"manifold", cfg.metric_config ? manifold_name : cfg.manifold},
                   {"f", cfg.f},
                   {"seed", cfg.seed},
                   {"samples", cfg.samples},
                   {"tol", cfg.tol},
                   {"suite", cfg.suite}};
  if (cfg.metric_config) c["metric_config"] = *cfg.metric_config;
  return c;
}

/// Report document; `timestamp` empty leaves generated_at out.
inline nlohmann::json to_json(const VerificationReport& rep, const std::string& timestamp = utc_timestamp()) {
  nlohmann::json j{{"schema", 1}, {"config", config_json(rep.cfg, rep.manifold_name)}};
  j["items"] = nlohmann::json::array();
  for (const auto& r : rep.items) j["items"].push_back(to_json(r));
  j["summary"] = {{"confirmed", rep.count(Status::Confirmed)},
                  {"deviation", rep.count(Status::Deviation)},
                  {"error", rep.count(Status::Error)},
                  {"not_applicable", rep.count(Status::NotApplicable)}};
  if (!timestamp.empty()) j["generated_at"] = timestamp;
  return j;
}

}  // namespace tbgeom
