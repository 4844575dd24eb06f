// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <set>
#include <string>
#include <vector>

#include "tbgeom/tbgeom.hpp"

using namespace tbgeom;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) pass = false;
    if (!detail.empty()) detail += "; ";
    detail += (ok ? "" : "FAILED ") + what;
  }
};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

RunConfig config(const std::string& manifold, const std::string& f, std::size_t samples) {
  RunConfig c;
  c.manifold = manifold;
  c.f = f;
  c.samples = samples;
  return c;
}

// Runs the named items under `cfg` and requires each to be CONFIRMED.
void confirm_items(Outcome& o, const RunConfig& cfg, const std::vector<std::string>& ids) {
  const auto ctx = make_context(cfg);
  double worst = 0.0;
  for (const auto& id : ids) {
    const ItemResult r = run_item(find_item(id), *ctx);
    worst = std::max(worst, r.max_rel_err);
    if (r.status != Status::Confirmed || r.n_samples == 0)
      o.require(false, id + " " + status_name(r.status) + " rel " + fmt(r.max_rel_err) + "/" + fmt(r.tol));
  }
  o.require(true, cfg.manifold + ",f=" + cfg.f + ": " + std::to_string(ids.size()) + " items, worst rel " + fmt(worst));
}

Outcome flatness() {
  Outcome o;
  const ChartedManifold E = catalog("euclidean(2)");
  const ScalingField one("1", 2);
  const BundleMetric bm(Variant::Sasaki, E, one);
  double worst = 0.0;
  const auto samples = sample_stream(derive_seed(42, "flatness"), E, 10, &one);
  for (const Sample& s : samples) worst = std::max(worst, BundleOracle(bm, s.tp).max_abs_riemann());
  o.require(samples.size() == 10 && worst <= 1e-9, "max |R| " + fmt(worst) + " over 10 samples");
  confirm_items(o, config("euclidean(2)", "1", 10), {"sasaki.flatness"});
  return o;
}

Outcome unflatness() {
  Outcome o;
  const auto ctx = make_context(config("euclidean(2)", "1+0.5*x1^2", 10));
  const ItemResult r = run_item(find_item("sasaki.unflat"), *ctx);
  o.require(r.status == Status::Confirmed && r.max_abs_err >= 1e-3, "max |R| " + fmt(r.max_abs_err));
  const bool named = r.worst_sample.contains("index") && r.worst_sample.contains("component");
  o.require(named, named ? "sample " + r.worst_sample["index"].dump() + " component " + r.worst_sample["component"].dump()
                         : "worst sample not named");
  return o;
}

Outcome classical_reduction() {
  Outcome o;
  const std::vector<std::string> ids = {"sasaki.connection.hh", "sasaki.connection.hv", "sasaki.connection.vh",
                                        "sasaki.connection.vv", "sasaki.sectional.vv",  "sasaki.sectional.hv",
                                        "sasaki.sectional.hh",  "sasaki.scalar"};
  for (const char* m : {"sphere_stereo(1)", "poincare_disk"}) confirm_items(o, config(m, "1", 20), ids);
  return o;
}

Outcome general_connection() {
  Outcome o;
  const std::vector<std::string> ids = {"sasaki.connection.hh", "sasaki.connection.hv", "sasaki.connection.vh",
                                        "sasaki.connection.vv", "cg.connection.hh",     "cg.connection.hv",
                                        "cg.connection.vh",     "cg.connection.vv"};
  for (const char* m : {"euclidean(2)", "sphere_stereo(1)"})
    for (const char* f : {"exp(x1)", "1+0.5*x1^2"}) confirm_items(o, config(m, f, 20), ids);
  return o;
}

Outcome cg_algebra() {
  Outcome o;
  const auto ctx = make_context(config("sphere_stereo(1)", "exp(x1)", 100));
  for (const auto& [id, tol] : std::vector<std::pair<std::string, double>>{
           {"cg.u_pairing", 1e-12}, {"cg.area.hh", 1e-10}, {"cg.area.hv", 1e-10}, {"cg.area.vv", 1e-10},
           {"cg.adapted_frame", 1e-10}}) {
    const ItemResult r = run_item(find_item(id), *ctx);
    o.require(r.status == Status::Confirmed && r.tol <= tol && r.n_samples == 100,
              id + " rel " + fmt(r.max_rel_err) + "/" + fmt(tol));
  }
  return o;
}

Outcome space_form_identity() {
  Outcome o;
  for (const char* m : {"space_form(1)", "space_form(-1)"}) {
    const auto ctx = make_context(config(m, "exp(x1)", 20));
    const ItemResult r = run_item(find_item("cg.space_form.identity"), *ctx);
    o.require(r.status == Status::Confirmed && r.tol <= 1e-9 && r.n_samples == 20,
              std::string(m) + " rel " + fmt(r.max_rel_err));
  }
  return o;
}

Outcome internal_consistency() {
  Outcome o;
  for (const char* f : {"exp(x1)", "1"}) {
    const auto ctx = make_context(config("sphere_stereo(1)", f, 20));
    for (const char* id : {"cg.sectional.division", "sasaki.scalar.frame_sum"}) {
      const ItemResult r = run_item(find_item(id), *ctx);
      o.require(r.status == Status::Confirmed && r.tol <= 1e-9,
                std::string(id) + ",f=" + f + " rel " + fmt(r.max_rel_err));
    }
  }
  return o;
}

Outcome geodesics() {
  Outcome o;
  const auto ctx = make_context(config("sphere_stereo(1)", "1", 20));
  const ItemResult e = run_item(find_item("geodesic.energy_conservation"), *ctx);
  o.require(e.status == Status::Confirmed && e.tol <= 1e-6, "energy drift " + fmt(e.max_abs_err));
  const ItemResult ord = run_item(find_item("geodesic.order_check"), *ctx);
  o.require(ord.status == Status::Confirmed, "drift ratio " + fmt(ord.max_abs_err));

  std::vector<double> s;
  for (int k = 0; k <= 10; ++k) s.push_back(0.1 * k);
  const ChartedManifold E = catalog("euclidean(2)");
  const auto line = line_curve((Vec(2) << -0.5, 0.0).finished(), (Vec(2) << 1.0, 0.0).finished(), s);
  double bent = 0.0, straight = 0.0;
  for (const auto& r : lift_residual(BundleMetric(Variant::Sasaki, E, ScalingField("exp(x1)", 2)), line))
    bent = std::max(bent, r.oracle);
  for (const auto& r : lift_residual(BundleMetric(Variant::Sasaki, E, ScalingField("1", 2)), line))
    straight = std::max({straight, r.oracle, r.a, r.b});
  o.require(bent >= 1e-3, "line residual f=exp(x1) " + fmt(bent));
  o.require(straight <= 1e-10, "line residual f=1 " + fmt(straight));
  return o;
}

Outcome adjudication() {
  Outcome o;
  const RunConfig cfg;
  const VerificationReport a = run_suite(cfg), b = run_suite(cfg);
  std::set<std::string> seen;
  bool ordered = a.items.size() == registry().size();
  for (std::size_t k = 0; ordered && k < a.items.size(); ++k) ordered = a.items[k].id == registry()[k].id;
  for (const auto& r : a.items) seen.insert(r.id);
  o.require(ordered && seen.size() == registry().size(), std::to_string(a.items.size()) + " items");
  o.require(to_json(a, "").dump(2) == to_json(b, "").dump(2), "byte-identical report");
  o.require(a.exit_code() == 0 && a.count(Status::Error) == 0, "exit code " + std::to_string(a.exit_code()));

  std::size_t deviations = 0, reproduced = 0;
  for (const auto& r : a.items) {
    if (r.status != Status::Deviation) continue;
    ++deviations;
    RunConfig c = cfg;
    if (r.n_samples == cfg.samples) c.samples = r.worst_sample["index"].get<std::size_t>() + 1;
    const ItemResult again = run_item(find_item(r.id), *make_context(c));
    if (again.status == Status::Deviation && again.max_rel_err == r.max_rel_err) ++reproduced;
  }
  o.require(reproduced == deviations,
            std::to_string(reproduced) + "/" + std::to_string(deviations) + " deviations reproduced at their worst sample");
  return o;
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    double budget_s;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria = {
      {1, "flat bundle over flat base", 5, flatness},
      {2, "non-constant scaling is not flat", 5, unflatness},
      {3, "classical reduction at f = 1", 30, classical_reduction},
      {4, "connection for general f", 30, general_connection},
      {5, "Cheeger-Gromoll algebra", 10, cg_algebra},
      {6, "space-form identity", 5, space_form_identity},
      {7, "internal consistency", 10, internal_consistency},
      {8, "geodesics", 30, geodesics},
      {9, "adjudication report", 120, adjudication},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.require(false, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    o.require(secs <= c.budget_s, "runtime " + fmt(secs) + "s of " + fmt(c.budget_s) + "s");
    std::printf("criterion %d %s: %s (%s)\n", c.id, c.name, o.pass ? "PASS" : "FAIL", o.detail.c_str());
    if (!o.pass) ++failed;
  }
  return failed == 0 ? 0 : 1;
}
