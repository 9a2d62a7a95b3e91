// Acceptance checks: prints one PASS/FAIL line per criterion and exits
// non-zero when any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "uts/cli.hpp"
#include "uts/error.hpp"
#include "uts/mergelyan.hpp"
#include "uts/universal.hpp"
#include "uts/verify.hpp"

using namespace uts;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string sci(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", x);
  return buf;
}

Scenario builtin(const std::string& name) {
  for (const auto& [n, t] : builtin_scenarios())
    if (n == name) return load_scenario(parse_json_text(t, n + ".json"));
  throw std::runtime_error("missing scenario " + name);
}

double rel_err(cplx got, cplx want) { return std::abs(got - want) / std::max(1.0, std::abs(want)); }

std::vector<cplx> random_vec(std::mt19937_64& rng, std::size_t n, double radius) {
  std::vector<cplx> v(n);
  for (auto& x : v) x = oracle::random_point(rng, radius);
  return v;
}

Outcome algebra() {
  std::mt19937_64 rng(101);
  double worst_shift = 0.0, worst_lin = 0.0;
  for (int t = 0; t < 100; ++t) {
    const std::size_t r = t % 3;
    const std::size_t d = 1 + t % 3;
    const Poly f = oracle::random_poly(rng, r, d, 6, 8);
    const Poly g = oracle::random_poly(rng, r, d, 6, 8);
    const std::vector<cplx> zeta = random_vec(rng, d, 1.0);
    const std::vector<cplx> w = random_vec(rng, r, 1.0);
    const std::vector<cplx> z = random_vec(rng, d, 1.0);
    std::vector<cplx> dz(d);
    for (std::size_t i = 0; i < d; ++i) dz[i] = z[i] - zeta[i];
    const Poly shifted = shift_center(f, zeta);
    worst_shift = std::max(worst_shift, rel_err(shifted.eval(w, dz), f.eval(w, z)));

    const cplx a = oracle::random_point(rng, 2.0), b = oracle::random_point(rng, 2.0);
    const Poly combo = a * f + b * g;
    std::vector<int> mv(d);
    for (auto& m : mv) m = static_cast<int>(rng() % 4);
    const MultiIndex m(mv);
    const cplx lhs = gamma(combo, w, zeta, m);
    const cplx rhs = a * gamma(f, w, zeta, m) + b * gamma(g, w, zeta, m);
    const double scale = std::max({1.0, std::abs(a * gamma(f, w, zeta, m)), std::abs(b * gamma(g, w, zeta, m))});
    worst_lin = std::max(worst_lin, std::abs(lhs - rhs) / scale);
    worst_lin = std::max(worst_lin, rel_err(gamma(f, w, zeta, m), oracle::taylor_coefficient(f, w, zeta, mv)) * 1e-2);
  }
  return {worst_shift <= 1e-10 && worst_lin <= 1e-12,
          "shift rel " + sci(worst_shift) + ", gamma linearity " + sci(worst_lin)};
}

Outcome capture() {
  std::mt19937_64 rng(202);
  int checked_strict = 0;
  for (int t = 0; t < 50; ++t) {
    const std::size_t d = 1 + t % 3;
    const std::size_t r = t % 2;
    const Enumeration en = Enumeration::graded_lex(d);
    const Poly f = oracle::random_poly(rng, r, d, 4, 6);
    const std::vector<cplx> zeta = random_vec(rng, d, 0.5);
    const MultiIndex box = f.z_degrees();
    const std::uint64_t n1 = capture_index(en, box);
    std::vector<int> bv(box.entries().begin(), box.entries().end());
    const auto list = oracle::graded_lex_list(d, box.total());
    if (oracle::brute_capture(list, bv) != n1) return {false, "capture index disagrees with brute force at case " + std::to_string(t)};

    const Poly body = shift_center(f, zeta);
    if (!(partial_sum(f, zeta, n1, en).body == body)) return {false, "S_n' differs from f at case " + std::to_string(t)};
    if (n1 > 0) {
      const MultiIndex last = en.unrank(n1);
      bool nonzero = false;
      for (const auto& [e, c] : body.terms())
        if (e.slice(r, d) == last && c != cplx(0.0)) nonzero = true;
      if (nonzero) {
        ++checked_strict;
        if (partial_sum(f, zeta, n1 - 1, en).body == body)
          return {false, "S_(n'-1) already equals f at case " + std::to_string(t)};
      }
    }
  }
  return {true, "50 polynomials, " + std::to_string(checked_strict) + " with a nonzero last coefficient"};
}

Outcome mergelyan() {
  const ProductCompact inner{{PlanarCompact::disk(0.0, 0.5)}};
  const ProductCompact outer{{PlanarCompact::disk(2.0, 0.25)}};
  ApproxTask task = glue_target(Poly(0, 1), Poly::constant(0, 1, 1.0), inner, outer);
  task.degree_budget = uniform_budget(0, 1, 0, 60);
  task.degree_sweep = {10, 20, 40, 60};
  task.tolerance = 1e-3;
  const FitReport rep = fit(task);
  // full history: a tolerance no cap can meet runs every budget
  task.tolerance = 1e-300;
  const FitReport all = fit(task);
  bool monotone = all.residual_history.size() == 4;
  std::string hist;
  for (std::size_t i = 0; i < all.residual_history.size(); ++i) {
    if (i > 0 && all.residual_history[i].achieved_error > all.residual_history[i - 1].achieved_error) monotone = false;
    hist += (i ? " " : "") + sci(all.residual_history[i].achieved_error);
  }
  return {rep.success && rep.max_error() < 1e-3 && rep.degree_cap <= 60 && monotone,
          "error " + sci(rep.max_error()) + " at degree " + std::to_string(rep.degree_cap) + "; history " + hist};
}

Outcome seleznev() {
  const Scenario sc = builtin("seleznev");
  const ConstructionResult res = run_construction(plan_stages(sc.schedule, sc.settings));
  const StageRecord& rec = res.certificate.stages.at(0);
  const CenteredPoly f = stream_partial_sum(res.stream, rec.block_last);
  const PredicateGrids grids = make_grids(rec.w_block, rec.inner, {res.stream.center()}, res.certificate.grids);
  const double f_ref =
      max_of(taylor_deviation(f, f, rec.lambda, res.stream.enumeration(), grids, {DiffOp::identity(1)}));
  return {res.certificate.passed && rec.tolerance == 1e-3 && f_ref <= 1e-10,
          "lambda " + std::to_string(rec.lambda) + ", E " + sci(rec.e_side_error) + ", F at center " + sci(f_ref)};
}

double sup_on(const CenteredPoly& p, const ProductCompact& k, cplx target) {
  double worst = 0.0;
  for (const cplx z : fill_samples(k.factors.at(0), 0.005)) {
    const std::vector<cplx> zz{z};
    worst = std::max(worst, std::abs(p.eval({}, zz) - target));
  }
  return worst;
}

Outcome two_stage() {
  const Scenario sc = builtin("two_stage");
  const StagePlan plan = plan_stages(sc.schedule, sc.settings);
  CoefficientStream stream(plan.settings.enumeration, plan.center, plan.settings.r);
  Certificate cert = certificate_header(plan);
  cert.stages.push_back(build_stage(stream, plan.stages.at(0), plan, 1));
  const auto before = stage_predicates(stream, cert.stages[0], cert);
  cert.stages.push_back(build_stage(stream, plan.stages.at(1), plan, 2));
  const auto after = stage_predicates(stream, cert.stages[0], cert);
  const StageRecord& s1 = cert.stages[0];
  const StageRecord& s2 = cert.stages[1];
  const double up = sup_on(stream_partial_sum(stream, s1.lambda), s1.outer, 1.0);
  const double down = sup_on(stream_partial_sum(stream, s2.lambda), s2.outer, -1.0);
  const bool same_k = s1.outer == s2.outer;
  const bool frozen = before == after;
  return {same_k && frozen && up < 1e-2 && down < 1e-2 && s1.passed && s2.passed,
          "lambda " + std::to_string(s1.lambda) + " -> " + sci(up) + " from +1, lambda " + std::to_string(s2.lambda) +
              " -> " + sci(down) + " from -1, stage-1 predicates " + (frozen ? "unchanged" : "CHANGED")};
}

Outcome parameterized() {
  const Scenario sc = builtin("parameterized");
  const ConstructionResult res = run_construction(plan_stages(sc.schedule, sc.settings));
  const StageRecord& rec = res.certificate.stages.at(0);
  const bool ok = res.certificate.passed && sc.settings.r == 1 && rec.tolerance == 1e-2 &&
                  verify_certificate(res.stream, res.certificate).ok;
  return {ok, "E " + sci(rec.e_side_error) + ", F " + sci(rec.f_side_error) + " over " +
                  std::to_string(rec.e_grid_points) + " (w, z) pairs"};
}

Outcome strong() {
  const Scenario sc = builtin("strong");
  const ConstructionResult res = run_construction(plan_stages(sc.schedule, sc.settings));
  const StageRecord& rec = res.certificate.stages.at(0);
  bool ok = res.certificate.passed && rec.variant == Variant::Strong;
  double value = 0.0, deriv = 0.0;
  for (const auto& [op, e] : rec.e_side_by_op) (op.is_identity() ? value : deriv) = std::max(op.is_identity() ? value : deriv, e);
  ok = ok && rec.e_side_by_op.size() == 3 && value < 1e-1 && deriv < 1e-1;

  // analytic derivatives of the constructed polynomial against finite differences
  const Poly f = res.stream.current().to_absolute();
  std::mt19937_64 rng(7);
  double worst = 0.0;
  for (int t = 0; t < 20; ++t) {
    std::vector<cplx> x{oracle::random_point(rng, 0.5), oracle::random_point(rng, 0.5)};
    for (std::size_t v = 0; v < 2; ++v) {
      MultiIndex e(2);
      e.set(v, 1);
      const cplx analytic = differentiate(f, DiffOp{e}).eval(x);
      worst = std::max(worst, rel_err(oracle::central_difference(f, x, v, 1e-3), analytic));
    }
  }
  ok = ok && worst <= 1e-6;
  return {ok, "value " + sci(value) + ", derivative " + sci(deriv) + ", finite-difference rel " + sci(worst)};
}

Outcome oracle_equivalence() {
  std::mt19937_64 rng(808);
  double worst = 0.0;
  const Variant variants[] = {Variant::Plain, Variant::Strong, Variant::Infty};
  for (int t = 0; t < 20; ++t) {
    const std::size_t r = t % 2;
    const std::size_t d = 1 + (t / 2) % 2;
    PredicateContext ctx;
    for (std::size_t i = 0; i < r; ++i) ctx.g.factors.push_back(OpenDisk{0.0, 1.0});
    for (std::size_t i = 0; i < d; ++i) ctx.omega.factors.push_back(OpenDisk{0.0, 1.0});
    ctx.enumeration = Enumeration::graded_lex(d);
    ctx.grids = GridSpec{12, 2, 3'000};
    const FjCatalog cat(r, d);
    const Poly f = oracle::random_poly(rng, r, d, 3, 5);
    PredicateSpec spec;
    spec.variant = variants[t % 3];
    spec.n = static_cast<std::uint64_t>(rng() % 12);
    spec.tau = 1 + static_cast<int>(rng() % 2);
    spec.p = 1 + static_cast<int>(rng() % 3);
    spec.m = 1 + static_cast<int>(rng() % 5);
    spec.j = 1 + static_cast<int>(rng() % 200);
    const bool cl = spec.variant == Variant::Infty;
    const auto order = oracle::graded_lex_list(d, 40);
    const auto ops = predicate_ops(spec.variant, r, d, spec.l);
    auto naive = [&](const Poly& g, const PredicateGrids& grids) {
      double m = 0.0;
      for (const DiffOp& op : ops)
        m = std::max(m, oracle::sup_deviation(f, g, order, spec.n, grids,
                                              std::vector<int>(op.exponents.entries().begin(), op.exponents.entries().end())));
      return m;
    };
    const ProductCompact m_p = exhaustion_M(ctx.omega, spec.p, cl);
    const auto centers = center_samples(m_p, ctx.grids.center_boundary_samples);
    const PredicateGrids eg =
        make_grids(exhaustion_M(ctx.g, spec.tau, cl), enumerate_Tm(ctx.omega, spec.m, cl).compact, centers, ctx.grids);
    const PredicateGrids fg = cl ? make_grids(exhaustion_M(ctx.g, spec.l, true), exhaustion_M(ctx.omega, spec.l, true),
                                              centers, ctx.grids)
                                 : make_grids(exhaustion_M(ctx.g, spec.tau, false), m_p, centers, ctx.grids);
    const double e_ref = naive(cat.at(spec.j), eg);
    const double f_ref = naive(f, fg);
    worst = std::max(worst, std::abs(check_E(f, spec, cat, ctx).achieved - e_ref) / std::max(1.0, e_ref));
    worst = std::max(worst, std::abs(check_F(f, spec, ctx).achieved - f_ref) / std::max(1.0, f_ref));
  }

  const Scenario sc = builtin("seleznev");
  const ConstructionResult res = run_construction(plan_stages(sc.schedule, sc.settings));
  const bool round_trip = verify_certificate(res.stream, res.certificate).ok;
  Certificate bad = res.certificate;
  bad.stages.at(0).e_side_by_op.at(0).second *= 0.5;
  bad.stages.at(0).e_side_error = max_of(bad.stages[0].e_side_by_op);
  CoefficientStream tampered(res.stream.enumeration(), res.stream.center(), res.stream.r());
  for (StreamBlock b : res.stream.blocks()) {
    auto largest = b.coefficients.begin();
    for (auto it = b.coefficients.begin(); it != b.coefficients.end(); ++it)
      if (it->second.l1_norm() > largest->second.l1_norm()) largest = it;
    largest->second += Poly::constant(res.stream.r(), 0, 1e-6);
    tampered.append_block(b);
  }
  const bool detects = !verify_certificate(res.stream, bad).ok && !verify_certificate(tampered, res.certificate).ok;
  return {worst <= 1e-12 && round_trip && detects,
          "max relative gap " + sci(worst) + ", round trip " + (round_trip ? "ok" : "FAILED") + ", tampering " +
              (detects ? "detected" : "MISSED")};
}

Outcome geometry() {
  const std::vector<Domain> doms = {OpenDisk{0.0, 1.0}, OpenRect{{-1, -0.5}, {2, 1}}};
  for (const Domain& dom : doms)
    for (int p = 1; p <= 10; ++p)
      for (bool cl : {false, true})
        if (!sampled_subset(exhaustion_factor(dom, p, cl), exhaustion_factor(dom, p + 1, cl), 0.02))
          return {false, "exhaustion not nested at p = " + std::to_string(p)};

  int worst_m = 0;
  std::vector<std::pair<DomainProduct, ProductCompact>> cases;
  for (const char* name : {"seleznev", "two_stage", "alternating3", "parameterized", "strong", "infty"}) {
    const Scenario sc = builtin(name);
    for (const auto& req : sc.schedule) cases.emplace_back(sc.omega, req.outer);
  }
  for (const auto& [omega, k] : cases) {
    const auto m = find_Tm_containing(omega, k, false, 0.02);
    if (!m) return {false, "no T_m up to 10^4 contains a scenario compact"};
    worst_m = std::max(worst_m, *m);
  }
  std::size_t failures = 0;
  for (int j = 1; j <= 6; ++j) {
    const PlanarCompact ann = outer_compacts(OpenDisk{0.0, 1.0}, j, j % 2 == 0);
    failures += escape_failures(ann, complement_probes(ann, 32));
  }
  return {failures == 0, "nesting ok, largest m0 = " + std::to_string(worst_m) + ", escape failures " +
                             std::to_string(failures)};
}

Outcome slice_residual() {
  const ProductCompact disk{{PlanarCompact::disk(0.0, 1.0)}};
  std::mt19937_64 rng(909);
  double poly_worst = 0.0;
  for (int t = 0; t < 10; ++t) {
    const Poly p = oracle::random_poly(rng, 0, 1, 10, 8);
    poly_worst = std::max(poly_worst, slice_AD_residual(tabulate_slices(
                                          [&](std::span<const cplx> x) { return p.eval(x); }, disk, 0, 256)));
  }
  const ProductCompact two{{PlanarCompact::disk(0.0, 1.0), PlanarCompact::rect({-1, -1}, {1, 1})}};
  const SliceTable conj_tab =
      tabulate_slices([](std::span<const cplx> x) { return std::conj(x[1]) + x[0]; }, two, 1, 256);
  const double conj_res = slice_AD_residual(conj_tab);
  const double expected = oracle::conj_slice_value(conj_tab.circle_radius);
  return {poly_worst <= 1e-8 && conj_res >= 0.1 && std::abs(conj_res - expected) <= 1e-6,
          "polynomial " + sci(poly_worst) + ", conjugate " + sci(conj_res) + " (Cauchy value " + sci(expected) + ")"};
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    double budget_seconds;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria = {
      {1, "algebra", 5, algebra},
      {2, "capture", 5, capture},
      {3, "mergelyan demo", 10, mergelyan},
      {4, "single-stage construction", 30, seleznev},
      {5, "two-stage conflict", 120, two_stage},
      {6, "parameterized stage", 120, parameterized},
      {7, "strong variant", 120, strong},
      {8, "oracle equivalence", 60, oracle_equivalence},
      {9, "geometry", 60, geometry},
      {10, "slice residual", 30, slice_residual},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = c.run();
    } catch (const std::exception& e) {
      out = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool in_time = secs < c.budget_seconds;
    const bool pass = out.pass && in_time;
    failed += pass ? 0 : 1;
    std::printf("criterion %2d %-26s %s  %.2fs/%gs  %s%s\n", c.id, c.name, pass ? "PASS" : "FAIL", secs,
                c.budget_seconds, out.detail.c_str(), in_time ? "" : " (over time budget)");
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
