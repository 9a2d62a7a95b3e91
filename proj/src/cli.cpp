#include "uts/cli.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <iostream>
#include <sstream>

#include "uts/error.hpp"
#include "uts/mergelyan.hpp"
#include "uts/verify.hpp"

namespace uts {

namespace {

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw SchemaError(where + ": " + what);
}

int verbosity() {
  const char* v = std::getenv("UTS_VERBOSITY");
  if (!v || !*v) return 1;
  return std::atoi(v);
}

void say(int level, const std::string& msg) {
  if (verbosity() >= level) std::cerr << msg << '\n';
}

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string short_fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", x);
  return buf;
}

DomainProduct domains_from(const json& j, std::size_t count, const std::string& where) {
  DomainProduct out;
  for (std::size_t i = 0; i < read_array(j, where).size(); ++i) out.factors.push_back(domain_from_json(j[i], json_path(where, i)));
  if (out.dim() != count) fail(where, "expected " + std::to_string(count) + " domains");
  return out;
}

std::vector<cplx> complex_vector(const json& j, const std::string& where) {
  std::vector<cplx> out;
  for (std::size_t i = 0; i < read_array(j, where).size(); ++i) out.push_back(complex_from_json(j[i], json_path(where, i)));
  return out;
}

int positive_index(const json& j, const std::string& where) {
  const std::int64_t v = read_int(j, where);
  if (v < 1 || v > 1'000'000) fail(where, "expected an integer in [1, 1000000]");
  return static_cast<int>(v);
}

struct ResolvedOuter {
  ProductCompact compact;
  std::optional<std::size_t> i0;
};

ResolvedOuter resolve_outer(const json& j, const Scenario& sc, bool closure, const std::string& where) {
  if (const json* m = find_field(j, "T")) {
    const TmEntry e = enumerate_Tm(sc.omega, positive_index(*m, json_path(where, "T")), closure);
    return {e.compact, e.i0};
  }
  return {product_from_json(j, where), std::nullopt};
}

ProductCompact resolve_inner(const json& j, const DomainProduct& dom, bool closure, const std::string& key,
                             const std::string& where) {
  if (const json* p = find_field(j, key)) return exhaustion_M(dom, positive_index(*p, json_path(where, key)), closure);
  return product_from_json(j, where);
}

Poly resolve_target(const json& j, std::size_t r, std::size_t d, const std::string& where) {
  if (const json* c = find_field(j, "catalog")) {
    try {
      return FjCatalog(r, d).at(read_uint(*c, json_path(where, "catalog")));
    } catch (const SchemaError&) {
      throw;
    } catch (const Error& e) {
      fail(json_path(where, "catalog"), e.what());
    }
  }
  return poly_from_json(j, where, r, d);
}

double sample_step(const PlanarCompact& k) {
  const auto [lo, hi] = bounding_box(k);
  return std::max(std::abs(hi - lo), 1e-3) / 64.0;
}

bool factor_inside(const PlanarCompact& k, const Domain& dom, bool closure) {
  for (cplx z : fill_samples(k, sample_step(k)))
    if (closure ? distance_to_closure(dom, z) > 1e-12 : !in_domain(dom, z)) return false;
  return true;
}

bool factor_outside(const PlanarCompact& k, const Domain& dom, bool closure) {
  for (cplx z : fill_samples(k, sample_step(k)))
    if (closure ? distance_to_closure(dom, z) <= 1e-12 : in_domain(dom, z)) return false;
  return true;
}

std::string utc_now() {
  const std::time_t t = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace

Scenario load_scenario(const json& j, const ScenarioOverrides& overrides) {
  const std::string where = "$";
  if (!j.is_object()) fail(where, "a scenario must be a JSON object");
  Scenario sc;
  if (const json* v = find_field(j, "name")) sc.name = read_string(*v, "$.name");
  ConstructionSettings& st = sc.settings;
  st.r = find_field(j, "r") ? read_uint(j["r"], "$.r") : 0;
  st.d = read_uint(require_field(j, "d", where), "$.d");
  if (st.d == 0 || st.d > 8) fail("$.d", "expected 1 <= d <= 8");
  if (st.r > 8) fail("$.r", "expected r <= 8");
  sc.g = st.r == 0 && !find_field(j, "G") ? DomainProduct{} : domains_from(require_field(j, "G", where), st.r, "$.G");
  sc.omega = domains_from(require_field(j, "Omega", where), st.d, "$.Omega");

  st.enumeration = find_field(j, "enumeration")
                       ? enumeration_from_json(j["enumeration"], st.d, "$.enumeration")
                       : Enumeration::graded_lex(st.d);
  if (const json* v = find_field(j, "mu")) {
    try {
      st.mu = IndexSet::from_tag(read_string(*v, "$.mu"));
    } catch (const SchemaError&) {
      throw;
    } catch (const Error& e) {
      fail("$.mu", e.what());
    }
  }
  Variant variant = Variant::Plain;
  if (const json* v = find_field(j, "variant")) {
    try {
      variant = variant_from_string(read_string(*v, "$.variant"));
    } catch (const SchemaError& e) {
      fail("$.variant", e.what());
    }
  }
  if (overrides.variant) variant = *overrides.variant;
  const double default_tolerance =
      find_field(j, "tolerance") ? number_from_json(j["tolerance"], "$.tolerance") : 1e-3;

  if (const json* v = find_field(j, "fixed_center")) st.fixed_center = complex_vector(*v, "$.fixed_center");
  if (overrides.fixed_center) st.fixed_center = overrides.fixed_center;
  if (st.fixed_center && st.fixed_center->size() != st.d) fail("$.fixed_center", "expected d coordinates");
  if (const json* v = find_field(j, "seed")) st.seed = read_uint(*v, "$.seed");
  if (overrides.seed) st.seed = *overrides.seed;
  if (const json* s = find_field(j, "sampling")) {
    if (const json* v = find_field(*s, "points_per_curve"))
      st.points_per_curve = read_uint(*v, "$.sampling.points_per_curve");
    if (const json* v = find_field(*s, "verify_points_per_curve"))
      st.verify_points_per_curve = read_uint(*v, "$.sampling.verify_points_per_curve");
  }
  if (overrides.density) {
    st.points_per_curve = *overrides.density;
    st.verify_points_per_curve = 2 * *overrides.density;
  }
  if (st.points_per_curve < 8 || st.verify_points_per_curve < 8) fail("$.sampling", "need at least 8 points per curve");
  if (const json* v = find_field(j, "grids")) st.grids = grid_spec_from_json(*v, "$.grids");

  const json& schedule = require_field(j, "schedule", where);
  for (std::size_t i = 0; i < read_array(schedule, "$.schedule").size(); ++i) {
    const std::string w = json_path("$.schedule", i);
    const json& s = schedule[i];
    if (!s.is_object()) fail(w, "expected an object");
    StageRequest req;
    req.variant = variant;
    if (const json* v = find_field(s, "variant"); v && !overrides.variant) {
      try {
        req.variant = variant_from_string(read_string(*v, json_path(w, "variant")));
      } catch (const SchemaError& e) {
        fail(json_path(w, "variant"), e.what());
      }
    }
    const bool stage_closure = req.variant == Variant::Infty;
    if (const json* v = find_field(s, "label")) req.label = read_string(*v, json_path(w, "label"));
    try {
      ResolvedOuter outer = resolve_outer(require_field(s, "outer", w), sc, stage_closure, json_path(w, "outer"));
      req.outer = std::move(outer.compact);
      req.i0 = outer.i0;
      req.inner = resolve_inner(require_field(s, "inner", w), sc.omega, stage_closure, "M", json_path(w, "inner"));
      req.w_block = st.r == 0 && !find_field(s, "w_block")
                        ? ProductCompact{}
                        : resolve_inner(require_field(s, "w_block", w), sc.g, stage_closure, "F", json_path(w, "w_block"));
    } catch (const SchemaError&) {
      throw;
    } catch (const Error& e) {
      fail(w, e.what());
    }
    if (req.outer.dim() != st.d) fail(json_path(w, "outer"), "expected d factors");
    if (req.inner.dim() != st.d) fail(json_path(w, "inner"), "expected d factors");
    if (req.w_block.dim() != st.r) fail(json_path(w, "w_block"), "expected r factors");
    req.target = resolve_target(require_field(s, "target", w), st.r, st.d, json_path(w, "target"));
    req.tolerance = find_field(s, "tolerance") ? number_from_json(s["tolerance"], json_path(w, "tolerance"))
                                                : default_tolerance;
    if (!(req.tolerance > 0.0) || !std::isfinite(req.tolerance)) fail(json_path(w, "tolerance"), "must be positive");
    if (const json* v = find_field(s, "derivative_order")) req.derivative_order = positive_index(*v, json_path(w, "derivative_order"));
    if (const json* v = find_field(s, "degree_budget")) {
      const std::int64_t b = read_int(*v, json_path(w, "degree_budget"));
      if (b < 0 || b > 400) fail(json_path(w, "degree_budget"), "expected an integer in [0, 400]");
      req.degree_budget = static_cast<int>(b);
    }
    if (const json* v = find_field(s, "degree_sweep")) {
      req.degree_sweep.clear();
      for (std::size_t t = 0; t < read_array(*v, json_path(w, "degree_sweep")).size(); ++t)
        req.degree_sweep.push_back(static_cast<int>(read_int((*v)[t], json_path(json_path(w, "degree_sweep"), t))));
    }
    if (const json* v = find_field(s, "i0")) {
      req.i0 = read_uint(*v, json_path(w, "i0"));
      if (*req.i0 >= st.d) fail(json_path(w, "i0"), "must be below d");
    }
    sc.schedule.push_back(std::move(req));
  }
  validate_scenario_geometry(sc);
  return sc;
}

void validate_scenario_geometry(const Scenario& sc) {
  for (std::size_t s = 0; s < sc.schedule.size(); ++s) {
    const StageRequest& req = sc.schedule[s];
    const bool closure = req.variant == Variant::Infty;
    const std::string tag = "stage " + std::to_string(s + 1) + ": ";
    for (std::size_t i = 0; i < req.inner.dim(); ++i)
      if (!factor_inside(req.inner.factors[i], sc.omega.factors[i], closure))
        throw DomainError(tag + "inner factor " + std::to_string(i) + " is not inside its domain");
    for (std::size_t i = 0; i < req.w_block.dim(); ++i)
      if (!factor_inside(req.w_block.factors[i], sc.g.factors[i], closure))
        throw DomainError(tag + "parameter factor " + std::to_string(i) + " is not inside its domain");
    bool separated = false;
    for (std::size_t i = 0; i < req.outer.dim(); ++i) {
      if (req.i0 && *req.i0 != i) continue;
      if (factor_outside(req.outer.factors[i], sc.omega.factors[i], closure)) separated = true;
    }
    if (!separated)
      throw DomainError(tag + (req.i0 ? "outer factor " + std::to_string(*req.i0) + " meets its domain"
                                      : "every outer factor meets its domain"));
  }
}

std::string errors_csv(const Certificate& cert) {
  std::ostringstream out;
  out << "stage,lambda,e_side_error,f_side_error,max_degree\n";
  for (const auto& s : cert.stages)
    out << s.stage << ',' << s.lambda << ',' << fmt(s.e_side_error) << ',' << fmt(s.f_side_error) << ','
        << s.max_total_degree << '\n';
  return out.str();
}

std::string fit_history_csv(const Certificate& cert) {
  std::ostringstream out;
  out << "stage,degree_cap,achieved_error,condition_estimate\n";
  for (const auto& s : cert.stages)
    for (const auto& h : s.residual_history)
      out << s.stage << ',' << h.degree_cap << ',' << fmt(h.achieved_error) << ',' << fmt(h.condition_estimate)
          << '\n';
  return out.str();
}

json certificate_document(const Certificate& cert, const std::vector<double>& stage_seconds, double elapsed_seconds,
                          const std::string& scenario_name, std::uint64_t seed) {
  json body = to_json(cert);
  json meta = {{"created_at", utc_now()},
               {"elapsed_seconds", elapsed_seconds},
               {"stage_seconds", stage_seconds},
               {"scenario", scenario_name},
               {"seed", seed},
               {"body_sha256", body_digest(body)}};
  return {{"body", std::move(body)}, {"meta", std::move(meta)}};
}

namespace {


int write_construction(const Scenario& sc, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  const auto t0 = std::chrono::steady_clock::now();
  const StagePlan plan = plan_stages(sc.schedule, sc.settings);
  const ConstructionResult res = run_construction(plan);
  const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  write_text_file((dir / "stream.json").string(), to_json(res.stream).dump(1) + "\n");
  write_text_file((dir / "certificate.json").string(),
                  certificate_document(res.certificate, res.stage_seconds, elapsed, sc.name, sc.settings.seed).dump(1) +
                      "\n");
  write_text_file((dir / "errors.csv").string(), errors_csv(res.certificate));
  write_text_file((dir / "fit_history.csv").string(), fit_history_csv(res.certificate));
  for (const auto& s : res.certificate.stages) {
    std::string line = "stage " + std::to_string(s.stage) + (s.label.empty() ? "" : " (" + s.label + ")") +
                       ": lambda " + std::to_string(s.lambda) + ", E " + short_fmt(s.e_side_error) + ", F " +
                       short_fmt(s.f_side_error) + ", degree " + std::to_string(s.max_total_degree) +
                       (s.passed ? ", pass" : ", FAIL: " + s.failure);
    say(1, line);
    for (const auto& h : s.residual_history)
      say(2, "  cap " + std::to_string(h.degree_cap) + ": " + short_fmt(h.achieved_error) + " (cond " +
                 short_fmt(h.condition_estimate) + ")");
  }
  say(1, std::string(res.certificate.passed ? "construction passed" : "construction FAILED") + " in " +
             short_fmt(elapsed) + " s; artifacts in " + dir.string());
  return res.certificate.passed ? 0 : 1;
}

int do_verify(const std::string& stream_path, const std::string& cert_path) {
  const json sj = read_json_file(stream_path);
  const json cj = read_json_file(cert_path);
  const CoefficientStream stream = stream_from_json(sj, "$");
  const bool wrapped = cj.is_object() && cj.contains("body");
  const json& body = wrapped ? cj["body"] : cj;
  const Certificate cert = certificate_from_json(body, wrapped ? "$.body" : "$");
  std::vector<std::string> problems;
  if (wrapped) {
    if (const json* meta = find_field(cj, "meta"); meta && find_field(*meta, "body_sha256")) {
      if (read_string((*meta)["body_sha256"], "$.meta.body_sha256") != body_digest(body))
        problems.push_back("certificate body does not match its recorded digest");
    }
  }
  const VerificationReport rep = verify_certificate(stream, cert);
  problems.insert(problems.end(), rep.problems.begin(), rep.problems.end());
  for (const auto& p : problems) say(0, "mismatch: " + p);
  if (problems.empty()) say(1, "verified " + std::to_string(cert.stages.size()) + " stage(s)");
  return problems.empty() ? 0 : 1;
}

int do_predicates(const std::string& cand_path, const std::string& specs_path, const std::string& out_path,
                  const std::optional<Variant>& variant, const std::optional<std::vector<cplx>>& fixed_center,
                  std::optional<std::size_t> density) {
  const json cj = read_json_file(cand_path);
  const json sj = read_json_file(specs_path);
  Poly f;
  if (find_field(cj, "catalog")) {
    const std::size_t cr = find_field(cj, "r") ? read_uint(cj["r"], "$.r") : 0;
    f = resolve_target(cj, cr, read_uint(require_field(cj, "d", "$"), "$.d"), "$");
  } else if (const json* p = find_field(cj, "poly")) {
    f = poly_from_json(*p, "$.poly");
  } else {
    f = poly_from_json(cj, "$");
  }
  const std::size_t r = f.r();
  const std::size_t d = f.d();
  if (d == 0) fail(cand_path, "candidate needs d >= 1");

  PredicateContext ctx;
  ctx.g = r == 0 && !find_field(sj, "G") ? DomainProduct{} : domains_from(require_field(sj, "G", "$"), r, "$.G");
  ctx.omega = domains_from(require_field(sj, "Omega", "$"), d, "$.Omega");
  ctx.enumeration = find_field(sj, "enumeration") ? enumeration_from_json(sj["enumeration"], d, "$.enumeration")
                                                  : Enumeration::graded_lex(d);
  if (const json* v = find_field(sj, "grids")) ctx.grids = grid_spec_from_json(*v, "$.grids");
  if (density) ctx.grids.points_per_curve = *density;
  const FjCatalog catalog(r, d);

  const json& specs = require_field(sj, "specs", "$");
  json report = json::array();
  bool all_evaluated = true;
  for (std::size_t i = 0; i < read_array(specs, "$.specs").size(); ++i) {
    const std::string w = json_path("$.specs", i);
    const std::string kind = read_string(require_field(specs[i], "kind", w), json_path(w, "kind"));
    if (kind != "E" && kind != "F") fail(json_path(w, "kind"), "expected \"E\" or \"F\"");
    PredicateSpec spec = predicate_spec_from_json(specs[i], w);
    if (variant) spec.variant = *variant;
    if (fixed_center) spec.fixed_center = fixed_center;
    json rec = {{"kind", kind}, {"spec", to_json(spec)}};
    try {
      const PredicateResult res = kind == "E" ? check_E(f, spec, catalog, ctx) : check_F(f, spec, ctx);
      rec["result"] = to_json(res);
      rec["achieved"] = number_to_json(res.achieved);
      rec["pass"] = res.pass;
      rec["grid_density"] = number_to_json(res.grid_density);
    } catch (const Error& e) {
      all_evaluated = false;
      rec["error"] = e.what();
    }
    report.push_back(std::move(rec));
  }
  const std::string text = json{{"candidate", cand_path}, {"results", report}}.dump(1) + "\n";
  if (out_path.empty())
    std::cout << text;
  else
    write_text_file(out_path, text);
  return all_evaluated ? 0 : 1;
}

int mergelyan_demo(const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  const ProductCompact inner{{PlanarCompact::disk(0.0, 0.5)}};
  const ProductCompact outer{{PlanarCompact::disk(2.0, 0.25)}};
  ApproxTask task = glue_target(Poly(0, 1), Poly::constant(0, 1, 1.0), inner, outer);
  task.degree_budget = uniform_budget(0, 1, 0, 60);
  task.degree_sweep = {10, 20, 40, 60};
  task.tolerance = 1e-3;
  const FitReport rep = fit(task);
  write_text_file((dir / "fit.json").string(), to_json(rep).dump(1) + "\n");
  std::ostringstream csv;
  csv << "degree_cap,achieved_error,condition_estimate\n";
  for (const auto& h : rep.residual_history)
    csv << h.degree_cap << ',' << fmt(h.achieved_error) << ',' << fmt(h.condition_estimate) << '\n';
  write_text_file((dir / "fit_history.csv").string(), csv.str());
  say(1, "two-piece fit: error " + short_fmt(rep.max_error()) + " at degree " + std::to_string(rep.degree_cap) +
             (rep.success ? " (meets 1e-3)" : " (misses 1e-3)"));
  return rep.success ? 0 : 1;
}

std::optional<std::vector<cplx>> parse_center(const std::string& text) {
  if (text.empty()) return std::nullopt;
  std::vector<double> parts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    double x = 0.0;
    try {
      x = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != item.size()) throw SchemaError("--fixed-center: '" + item + "' is not a number");
    parts.push_back(x);
  }
  if (parts.size() % 2 != 0) throw SchemaError("--fixed-center expects re,im pairs");
  std::vector<cplx> out;
  for (std::size_t i = 0; i < parts.size(); i += 2) out.emplace_back(parts[i], parts[i + 1]);
  return out;
}

}  // namespace

int run_cli(int argc, char** argv) {
  CLI::App app{"Constructive laboratory for universal Taylor series"};
  app.require_subcommand(1);

  std::string out_dir = ".";
  std::optional<std::size_t> density;
  std::optional<std::uint64_t> seed;
  std::string variant_text;
  std::string center_text;
  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--density", density, "Fitting points per boundary curve");
    cmd->add_option("--seed", seed, "Seed recorded with the run");
    cmd->add_option("--variant", variant_text, "Override the predicate variant")
        ->check(CLI::IsMember({"plain", "strong", "infty"}));
    cmd->add_option("--fixed-center", center_text, "Fixed expansion center as re,im,...");
  };

  std::string scenario_path;
  auto* construct = app.add_subcommand("construct", "Run a scenario and write stream, certificate and CSV files");
  construct->add_option("scenario", scenario_path, "Scenario JSON file")->required();
  construct->add_option("--out-dir", out_dir, "Output directory");
  add_common(construct);

  std::string stream_path;
  std::string cert_path;
  auto* verify = app.add_subcommand("verify", "Recompute every recorded predicate of a certificate");
  verify->add_option("stream", stream_path, "Stream JSON file")->required();
  verify->add_option("certificate", cert_path, "Certificate JSON file")->required();

  std::string cand_path;
  std::string specs_path;
  std::string report_path;
  auto* predicates = app.add_subcommand("predicates", "Evaluate a batch of E and F predicates on a candidate");
  predicates->add_option("candidate", cand_path, "Candidate polynomial JSON file")->required();
  predicates->add_option("specs", specs_path, "Predicate batch JSON file")->required();
  predicates->add_option("--out", report_path, "Write the report here instead of stdout");
  add_common(predicates);

  std::string demo_name = "seleznev";
  auto* demo = app.add_subcommand("demo", "Run a shipped scenario (or 'mergelyan', or 'all') and verify it");
  demo->add_option("name", demo_name, "Scenario name");
  demo->add_option("--out-dir", out_dir, "Output directory");
  add_common(demo);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    ScenarioOverrides ov;
    ov.density = density;
    ov.seed = seed;
    if (!variant_text.empty()) ov.variant = variant_from_string(variant_text);
    ov.fixed_center = parse_center(center_text);

    if (*construct) {
      const Scenario sc = load_scenario(read_json_file(scenario_path), ov);
      return write_construction(sc, out_dir);
    }
    if (*verify) return do_verify(stream_path, cert_path);
    if (*predicates) return do_predicates(cand_path, specs_path, report_path, ov.variant, ov.fixed_center, density);
    if (*demo) {
      std::vector<std::string> names;
      if (demo_name == "all") {
        names.push_back("mergelyan");
        for (const auto& [n, text] : builtin_scenarios()) names.push_back(n);
      } else {
        names.push_back(demo_name);
      }
      int worst = 0;
      for (const auto& name : names) {
        const std::filesystem::path dir = std::filesystem::path(out_dir) / name;
        say(1, "== " + name);
        if (name == "mergelyan") {
          worst = std::max(worst, mergelyan_demo(dir));
          continue;
        }
        const std::string* text = nullptr;
        for (const auto& [n, t] : builtin_scenarios())
          if (n == name) text = &t;
        if (!text) {
          std::string known = "mergelyan";
          for (const auto& [n, t] : builtin_scenarios()) known += ", " + n;
          throw SchemaError("unknown demo '" + name + "' (known: " + known + ", all)");
        }
        const Scenario sc = load_scenario(parse_json_text(*text, name + ".json"), ov);
        int code = write_construction(sc, dir);
        if (code == 0) code = do_verify((dir / "stream.json").string(), (dir / "certificate.json").string());
        worst = std::max(worst, code);
      }
      return worst;
    }
  } catch (const SchemaError& e) {
    say(0, std::string("error: ") + e.what());
    return 2;
  } catch (const DomainError& e) {
    say(0, std::string("error: ") + e.what());
    return 2;
  } catch (const DimensionError& e) {
    say(0, std::string("error: ") + e.what());
    return 2;
  } catch (const std::filesystem::filesystem_error& e) {
    say(0, std::string("error: ") + e.what());
    return 2;
  } catch (const Error& e) {
    say(0, std::string("error: ") + e.what());
    return 2;
  }
  return 2;
}

}  // namespace uts
