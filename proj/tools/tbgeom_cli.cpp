// Command-line front end: catalog, point evaluations, geodesics and the
// adjudication report.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "tbgeom/tbgeom.hpp"

namespace {

using namespace tbgeom;
using nlohmann::json;

struct Globals {
  std::string manifold = "sphere_stereo(1)";
  std::string metric_config;
  std::string f = "exp(x1)";
  std::uint64_t seed = 42;
  std::size_t samples = 20;
  double tol = 1e-6;
  std::string out;
  std::string format = "json";
};

struct PointArgs {
  std::string x, u, X, Y, Z;
  std::string variant = "sasaki";
  std::string mode = "closed";
};

Vec parse_vec(const std::string& text, std::size_t n, const char* what) {
  std::vector<double> vals;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    try {
      std::size_t used = 0;
      vals.push_back(std::stod(tok, &used));
      if (used != tok.size() && tok.find_first_not_of(" ", used) != std::string::npos) throw std::invalid_argument(tok);
    } catch (const std::exception&) {
      throw ConfigError(std::string("bad number in --") + what + ": '" + tok + "'");
    }
  }
  if (n && vals.size() != n)
    throw ConfigError(std::string("--") + what + " needs " + std::to_string(n) + " comma-separated numbers");
  return Eigen::Map<Vec>(vals.data(), static_cast<Eigen::Index>(vals.size()));
}

Vec vec_or(const std::string& text, std::size_t n, const char* what, Vec fallback) {
  return text.empty() ? fallback : parse_vec(text, n, what);
}

Variant parse_variant(const std::string& s) {
  if (s == "sasaki") return Variant::Sasaki;
  if (s == "cg") return Variant::CheegerGromoll;
  throw ConfigError("unknown variant '" + s + "' (sasaki|cg)");
}

ChartedManifold load_manifold(const Globals& g) {
  return g.metric_config.empty() ? catalog(g.manifold) : manifold_from_file(g.metric_config);
}

void emit(const Globals& g, const std::string& text) {
  if (g.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream os(g.out);
  if (!os) throw ConfigError("cannot write '" + g.out + "'");
  os << text;
}

json vec_json(const Vec& v) { return to_json(v); }

json mat_json(const Mat& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) rows.push_back(vec_json(m.row(i).transpose()));
  return rows;
}

/// The evaluation point and base vectors; X, Y default to a g-orthonormal
/// pair from the coordinate axes, Z to the first axis.
struct Point {
  TangentPoint tp;
  Vec X, Y, Z;
};

Point load_point(const ChartedManifold& M, const PointArgs& a, bool orthonormalize) {
  const std::size_t m = M.dim();
  Point p;
  p.tp.x = vec_or(a.x, m, "x", Vec::Zero(m));
  p.tp.u = vec_or(a.u, m, "u", Vec::Unit(m, 0));
  M.require_inside(p.tp.x);
  p.X = vec_or(a.X, m, "X", Vec::Unit(m, 0));
  p.Y = vec_or(a.Y, m, "Y", Vec::Unit(m, 1));
  p.Z = vec_or(a.Z, m, "Z", Vec::Unit(m, 0));
  if (orthonormalize) {
    const auto e = gram_schmidt(M, p.tp.x, {p.X, p.Y});
    p.X = e[0];
    p.Y = e[1];
  }
  return p;
}

json point_json(const Point& p) {
  return {{"x", vec_json(p.tp.x)}, {"u", vec_json(p.tp.u)}, {"X", vec_json(p.X)}, {"Y", vec_json(p.Y)}};
}

int cmd_catalog(const Globals& g) {
  json j = json::array();
  for (const auto& n : catalog_names()) j.push_back(n);
  emit(g, j.dump(2) + "\n");
  return 0;
}

int cmd_metric(const Globals& g, const PointArgs& a) {
  const ChartedManifold M = load_manifold(g);
  const ScalingField f(g.f, M.dim());
  const Point p = load_point(M, a, false);
  const BundleMetric bm(parse_variant(a.variant), M, f);
  json j{{"manifold", M.name()}, {"variant", a.variant}, {"x", vec_json(p.tp.x)}, {"u", vec_json(p.tp.u)}};
  j["base"] = mat_json(M.metric(p.tp.x));
  j["bundle"] = mat_json(bm.value(p.tp));
  emit(g, j.dump(2) + "\n");
  return 0;
}

int cmd_curvature(const Globals& g, const PointArgs& a, const std::string& pattern) {
  const ChartedManifold M = load_manifold(g);
  const ScalingField f(g.f, M.dim());
  const Point p = load_point(M, a, false);
  const Variant var = parse_variant(a.variant);
  const Pattern pat = parse_pattern(pattern);
  FrameResult r;
  if (a.mode == "closed") {
    const LocalGeometry L(M, f, p.tp);
    r = var == Variant::Sasaki ? sasaki::curvature(L, pat, p.X, p.Y, p.Z) : cg::curvature(L, pat, p.X, p.Y, p.Z);
  } else if (a.mode == "oracle") {
    const BundleMetric bm(var, M, f);
    const BundleOracle O(bm, p.tp);
    const auto l = pattern_lifts(pat);
    r = O.decompose(O.curvature(O.lift(l[0], p.X), O.lift(l[1], p.Y), O.lift(l[2], p.Z)));
  } else {
    throw ConfigError("unknown mode '" + a.mode + "' (closed|oracle)");
  }
  json j = point_json(p);
  j["Z"] = vec_json(p.Z);
  j["variant"] = a.variant;
  j["pattern"] = pattern;
  j["mode"] = a.mode;
  j["hor"] = vec_json(r.hor);
  j["ver"] = vec_json(r.ver);
  emit(g, j.dump(2) + "\n");
  return 0;
}

int cmd_sectional(const Globals& g, const PointArgs& a, const std::string& plane) {
  const ChartedManifold M = load_manifold(g);
  const ScalingField f(g.f, M.dim());
  const Point p = load_point(M, a, true);
  const Variant var = parse_variant(a.variant);
  const Plane pl = parse_plane(plane);
  double k = 0.0;
  if (a.mode == "closed") {
    const LocalGeometry L(M, f, p.tp);
    k = var == Variant::Sasaki ? sasaki::sectional(L, pl, p.X, p.Y) : cg::sectional(L, pl, p.X, p.Y);
  } else if (a.mode == "oracle") {
    const BundleMetric bm(var, M, f);
    const BundleOracle O(bm, p.tp);
    const auto l = plane_lifts(pl);
    k = O.sectional(O.lift(l[0], p.X), O.lift(l[1], p.Y));
  } else {
    throw ConfigError("unknown mode '" + a.mode + "' (closed|oracle)");
  }
  json j = point_json(p);
  j["variant"] = a.variant;
  j["plane"] = plane;
  j["mode"] = a.mode;
  j["sectional"] = k;
  emit(g, j.dump(2) + "\n");
  return 0;
}

int cmd_scalar(const Globals& g, const PointArgs& a) {
  const ChartedManifold M = load_manifold(g);
  const ScalingField f(g.f, M.dim());
  const Point p = load_point(M, a, false);
  const Variant var = parse_variant(a.variant);
  double s = 0.0;
  if (a.mode == "closed") {
    const LocalGeometry L(M, f, p.tp);
    if (var == Variant::Sasaki) {
      std::vector<Vec> axes;
      for (std::size_t i = 0; i < M.dim(); ++i) axes.push_back(Vec::Unit(M.dim(), i));
      s = sasaki::scalar(L, gram_schmidt(L.G(), axes));
    } else {
      s = cg::scalar(L, cg::base_frame_along_u(L.G(), p.tp.u));
    }
  } else if (a.mode == "oracle") {
    const BundleMetric bm(var, M, f);
    s = BundleOracle(bm, p.tp).scalar();
  } else {
    throw ConfigError("unknown mode '" + a.mode + "' (closed|oracle)");
  }
  json j{{"x", vec_json(p.tp.x)}, {"u", vec_json(p.tp.u)}, {"variant", a.variant}, {"mode", a.mode}, {"scalar", s}};
  emit(g, j.dump(2) + "\n");
  return 0;
}

int cmd_geodesic(const Globals& g, const std::string& variant, const std::string& start, double t_end, double h) {
  const ChartedManifold M = load_manifold(g);
  const ScalingField f(g.f, M.dim());
  const std::size_t m = M.dim();
  const Vec s = parse_vec(start, 4 * m, "start");
  const auto em = static_cast<Eigen::Index>(m);
  const BundleState s0{s.segment(0, em), s.segment(em, em), s.segment(2 * em, em), s.segment(3 * em, em), 0.0};
  const Trajectory tr = integrate(BundleMetric(parse_variant(variant), M, f), s0, t_end, h);
  if (g.format == "csv") {
    std::ostringstream os;
    os << "t";
    for (const char* name : {"x", "u", "xdot", "udot"})
      for (std::size_t i = 1; i <= m; ++i) os << ',' << name << i;
    os << ",energy\n";
    char buf[32];
    auto put = [&](double v) {
      std::snprintf(buf, sizeof buf, "%.17g", v);
      os << buf;
    };
    for (std::size_t k = 0; k < tr.states.size(); ++k) {
      const BundleState& st = tr.states[k];
      put(st.t);
      for (const Vec* v : {&st.x, &st.u, &st.xdot, &st.udot})
        for (Eigen::Index i = 0; i < v->size(); ++i) os << ',', put((*v)[i]);
      os << ',';
      put(tr.energy[k]);
      os << '\n';
    }
    emit(g, os.str());
    return 0;
  }
  if (g.format != "json") throw ConfigError("unknown format '" + g.format + "' (json|csv)");
  json j{{"h", tr.h}, {"states", json::array()}};
  for (std::size_t k = 0; k < tr.states.size(); ++k) {
    const BundleState& st = tr.states[k];
    j["states"].push_back({{"t", st.t},
                           {"x", vec_json(st.x)},
                           {"u", vec_json(st.u)},
                           {"xdot", vec_json(st.xdot)},
                           {"udot", vec_json(st.udot)},
                           {"energy", tr.energy[k]}});
  }
  emit(g, j.dump(2) + "\n");
  return 0;
}

int cmd_verify(const Globals& g, const std::string& suite) {
  RunConfig cfg;
  cfg.manifold = g.manifold;
  if (!g.metric_config.empty()) cfg.metric_config = g.metric_config;
  cfg.f = g.f;
  cfg.seed = g.seed;
  cfg.samples = g.samples;
  cfg.tol = g.tol;
  cfg.suite = suite;
  const VerificationReport rep = run_suite(cfg);
  if (g.format == "csv") {
    std::ostringstream os;
    os << "id,status,max_abs_err,max_rel_err,tol,n_samples,must_confirm\n";
    char buf[256];
    for (const auto& r : rep.items) {
      std::snprintf(buf, sizeof buf, "%s,%s,%.17g,%.17g,%.17g,%zu,%d\n", r.id.c_str(), status_name(r.status),
                    r.max_abs_err, r.max_rel_err, r.tol, r.n_samples, r.must_confirm ? 1 : 0);
      os << buf;
    }
    emit(g, os.str());
  } else {
    emit(g, to_json(rep).dump(2) + "\n");
  }
  std::fprintf(stderr, "%zu confirmed, %zu deviation, %zu error, %zu not applicable\n", rep.count(Status::Confirmed),
               rep.count(Status::Deviation), rep.count(Status::Error), rep.count(Status::NotApplicable));
  return rep.exit_code();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Curvature, geodesics and closed-form checks for Sasaki-type metrics on TM"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--manifold", g.manifold, "catalog manifold, e.g. sphere_stereo(1)")->capture_default_str();
  app.add_option("--metric-config", g.metric_config, "JSON metric file (overrides --manifold)");
  app.add_option("--f", g.f, "scaling function in x1..xm")->capture_default_str();
  app.add_option("--seed", g.seed)->capture_default_str();
  app.add_option("--samples", g.samples)->capture_default_str();
  app.add_option("--tol", g.tol)->capture_default_str();
  app.add_option("--out", g.out, "output file (default stdout)");
  app.add_option("--format", g.format)->check(CLI::IsMember({"json", "csv"}))->capture_default_str();

  auto point_opts = [](CLI::App* sub, PointArgs& a, bool z) {
    sub->add_option("--x", a.x, "base point, comma separated");
    sub->add_option("--u", a.u, "fiber vector");
    sub->add_option("--X", a.X);
    sub->add_option("--Y", a.Y);
    if (z) sub->add_option("--Z", a.Z);
    sub->add_option("--variant", a.variant)->check(CLI::IsMember({"sasaki", "cg"}))->capture_default_str();
    sub->add_option("--mode", a.mode)->check(CLI::IsMember({"closed", "oracle"}))->capture_default_str();
  };

  auto* catalog_cmd = app.add_subcommand("catalog", "list catalog manifolds");
  PointArgs metric_args, curv_args, sec_args, scalar_args;
  auto* metric_cmd = app.add_subcommand("metric", "base and bundle metric at a point");
  point_opts(metric_cmd, metric_args, false);
  auto* curv_cmd = app.add_subcommand("curvature", "bundle curvature R(A,B)C of lifts, split into hor/ver parts");
  point_opts(curv_cmd, curv_args, true);
  std::string pattern = "hhh";
  curv_cmd->add_option("--pattern", pattern, "lift pattern of (A,B)C")
      ->check(CLI::IsMember({"vvv", "hvv", "vvh", "hvh", "hhv", "hhh"}))
      ->capture_default_str();
  auto* sec_cmd = app.add_subcommand("sectional", "sectional curvature of a plane of lifts");
  point_opts(sec_cmd, sec_args, false);
  std::string plane = "hh";
  sec_cmd->add_option("--plane", plane)->check(CLI::IsMember({"hh", "hv", "vv"}))->capture_default_str();
  auto* scalar_cmd = app.add_subcommand("scalar", "scalar curvature of the bundle");
  point_opts(scalar_cmd, scalar_args, false);

  auto* geo_cmd = app.add_subcommand("geodesic", "integrate a geodesic of the bundle metric");
  std::string geo_variant = "sasaki", start;
  double t_end = 1.0, h = 1e-3;
  geo_cmd->set_help_flag("--help", "print this help and exit");  // frees -h for the step size
  geo_cmd->add_option("--start", start, "x,u,xdot,udot as 4m comma-separated numbers")->required();
  geo_cmd->add_option("--t", t_end)->capture_default_str();
  geo_cmd->add_option("--h", h)->capture_default_str();
  geo_cmd->add_option("--variant", geo_variant)->check(CLI::IsMember({"sasaki", "cg"}))->capture_default_str();

  auto* verify_cmd = app.add_subcommand("verify", "adjudicate every registered item and write a JSON report");
  std::string suite = "all";
  verify_cmd->add_option("--suite", suite)->check(CLI::IsMember(suite_names()))->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    if (catalog_cmd->parsed()) return cmd_catalog(g);
    if (metric_cmd->parsed()) return cmd_metric(g, metric_args);
    if (curv_cmd->parsed()) return cmd_curvature(g, curv_args, pattern);
    if (sec_cmd->parsed()) return cmd_sectional(g, sec_args, plane);
    if (scalar_cmd->parsed()) return cmd_scalar(g, scalar_args);
    if (geo_cmd->parsed()) return cmd_geodesic(g, geo_variant, start, t_end, h);
    if (verify_cmd->parsed()) return cmd_verify(g, suite);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 2;
}
