#include "uts/universal.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>

#include "uts/error.hpp"
#include "uts/mergelyan.hpp"
#include "uts/verify.hpp"

namespace uts {

std::string to_string(Variant v) {
  switch (v) {
    case Variant::Plain:
      return "plain";
    case Variant::Strong:
      return "strong";
    case Variant::Infty:
      return "infty";
  }
  return "plain";
}

Variant variant_from_string(std::string_view s) {
  if (s == "plain") return Variant::Plain;
  if (s == "strong") return Variant::Strong;
  if (s == "infty") return Variant::Infty;
  throw SchemaError("unknown variant '" + std::string(s) + "' (expected plain, strong or infty)");
}

std::vector<std::uint64_t> Certificate::strictly_increasing_lambdas() const {
  std::vector<std::uint64_t> out;
  for (const auto& s : stages)
    if (out.empty() || s.lambda > out.back()) out.push_back(s.lambda);
  return out;
}

namespace {

std::string sci(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", x);
  return buf;
}

std::size_t separating_factor(const StageRequest& req) {
  const std::size_t d = req.outer.dim();
  auto gap = [&](std::size_t i) {
    const auto [alo, ahi] = bounding_box(req.inner.factors[i]);
    const auto [blo, bhi] = bounding_box(req.outer.factors[i]);
    const double scale = std::max({std::abs(ahi - alo), std::abs(bhi - blo), 1e-3});
    return sampled_distance(req.inner.factors[i], req.outer.factors[i], scale / 128.0);
  };
  if (req.i0) {
    if (*req.i0 >= d) throw DimensionError("stage i0 out of range");
    if (!(gap(*req.i0) > 0.0)) throw DomainError("stage i0 factors of inner and outer overlap");
    return *req.i0;
  }
  for (std::size_t i = 0; i < d; ++i)
    if (gap(i) > 0.0) return i;
  throw DomainError("stage outer compact shares every factor with the inner compact");
}

std::vector<int> sweep_for(const StageRequest& req) {
  std::vector<int> caps;
  for (int c : req.degree_sweep)
    if (c <= req.degree_budget) caps.push_back(c);
  if (caps.empty() || caps.back() != req.degree_budget) caps.push_back(req.degree_budget);
  return caps;
}

FitReport fit_correction(const ApproxTask& task) {
  FitReport best = fit_with_scaling(task, true);
  if (best.success) return best;
  FitReport raw = fit(task);
  if (raw.success || raw.max_error() < best.max_error()) {
    raw.residual_history.insert(raw.residual_history.begin(), best.residual_history.begin(),
                                best.residual_history.end());
    return raw;
  }
  return best;
}

void validate_request(const StageRequest& req, std::size_t r, std::size_t d) {
  if (req.outer.dim() != d || req.inner.dim() != d) throw DimensionError("stage compacts must have d factors");
  if (req.w_block.dim() != r) throw DimensionError("stage parameter block must have r factors");
  if (req.target.r() != r || req.target.d() != d) throw DimensionError("stage target has the wrong shape");
  if (!(req.tolerance > 0.0)) throw DomainError("stage tolerance must be positive");
  if (req.variant != Variant::Plain && req.derivative_order < 1)
    throw DomainError("strong and infty stages need derivative order >= 1");
  if (req.degree_budget < 0) throw DomainError("stage degree budget must be non-negative");
}

}  // namespace

Certificate certificate_header(const StagePlan& plan) {
  Certificate cert;
  cert.enumeration_tag = plan.settings.enumeration.tag();
  cert.mu_tag = plan.settings.mu.tag();
  cert.r = plan.settings.r;
  cert.d = plan.settings.d;
  cert.center = plan.center;
  cert.center_mode = plan.center_mode;
  cert.grids = plan.settings.grids;
  return cert;
}

StagePlan plan_stages(std::vector<StageRequest> schedule, const ConstructionSettings& settings) {
  if (settings.d == 0) throw DimensionError("construction needs d >= 1");
  if (settings.enumeration.dimension() != settings.d) throw DimensionError("enumeration dimension must equal d");
  if (!settings.enumeration.graded())
    throw DomainError("the constructor needs a graded enumeration; " + settings.enumeration.tag() +
                      " is only supported by the verifier");
  for (const auto& req : schedule) validate_request(req, settings.r, settings.d);
  StagePlan plan;
  plan.settings = settings;
  if (settings.fixed_center) {
    if (settings.fixed_center->size() != settings.d) throw DimensionError("fixed center must have d coordinates");
    plan.center = *settings.fixed_center;
    plan.center_mode = "fixed";
  } else if (!schedule.empty()) {
    for (const auto& f : schedule.front().inner.factors) {
      const auto [lo, hi] = bounding_box(f);
      plan.center.push_back(0.5 * (lo + hi));
    }
  } else {
    plan.center.assign(settings.d, 0.0);
  }
  const auto first = settings.mu.first_at_or_after(0);
  if (!first) throw DomainError("index set " + settings.mu.tag() + " has no member within the scan bound");
  plan.first_lambda_floor = *first;
  plan.stages = std::move(schedule);
  return plan;
}

StageRecord build_stage(CoefficientStream& stream, const StageRequest& req, const StagePlan& plan, int stage_number) {
  const std::size_t r = stream.r();
  const std::size_t d = stream.d();
  validate_request(req, r, d);
  const Enumeration& enumeration = stream.enumeration();
  const std::vector<cplx>& c = stream.center();

  StageRecord rec;
  rec.stage = stage_number;
  rec.label = req.label;
  rec.variant = req.variant;
  rec.derivative_order = req.variant == Variant::Plain ? 0 : req.derivative_order;
  rec.tolerance = req.tolerance;
  rec.outer = req.outer;
  rec.inner = req.inner;
  rec.w_block = req.w_block;
  rec.target = req.target;
  rec.i0 = separating_factor(req);

  const CenteredPoly current = stream.current();
  const std::optional<std::uint64_t> frozen = stream.materialized_through();
  rec.premultiplier_exponent = frozen ? enumeration.unrank(*frozen).total() + 1 : 0;

  // Residual target - P in powers of (w, z - c).
  Poly residual = centered(req.target, c).body - current.body;
  std::vector<cplx> full_center(r, 0.0);
  full_center.insert(full_center.end(), c.begin(), c.end());

  Poly correction(r, d);
  if (!residual.is_zero()) {
    ApproxTask task = glue_target(Poly(r, d), residual, req.w_block.concat(req.inner), req.w_block.concat(req.outer),
                                  rec.i0);
    for (auto& piece : task.pieces) piece.target_center = full_center;
    task.basis_center = full_center;
    task.factor = BasisFactor{r + rec.i0, rec.premultiplier_exponent};
    MultiIndex budget(r + d);
    for (std::size_t v = 0; v < r + d; ++v) budget.set(v, std::max(residual.degree(v), 0));
    budget.set(r + rec.i0, req.degree_budget);
    task.degree_budget = budget;
    task.degree_sweep = sweep_for(req);
    task.derivative_orders = predicate_ops(req.variant, r, d, std::max(req.derivative_order, 1));
    task.tolerance = 0.5 * req.tolerance;
    task.points_per_curve = plan.settings.points_per_curve;
    task.verify_points_per_curve = plan.settings.verify_points_per_curve;
    const FitReport rep = fit_correction(task);
    rec.fit_degree_cap = rep.degree_cap;
    rec.fit_condition = rep.condition_estimate;
    rec.fit_error = rep.max_error();
    rec.fit_basis = rep.basis;
    rec.residual_history = rep.residual_history;
    correction = rep.fitted_centered;
    if (!rep.success)
      rec.failure = "fit reached " + sci(rep.max_error()) + " against a fit tolerance of " +
                    sci(task.tolerance);
  }

  StreamBlock block;
  block.stage = stage_number;
  block.first_index = frozen ? *frozen + 1 : 0;
  block.coefficients = stream.coefficients_of(correction);
  if (!block.coefficients.empty() && block.coefficients.begin()->first < block.first_index)
    throw Error("correction touches a frozen coefficient index");
  const Poly total = current.body + correction;
  const std::uint64_t floor = std::max(capture_index(enumeration, total.z_degrees()),
                                       frozen ? *frozen + 1 : plan.first_lambda_floor);
  const auto lambda = plan.settings.mu.first_at_or_after(floor);
  if (!lambda)
    throw DomainError("index set " + plan.settings.mu.tag() + " has no member at or after " + std::to_string(floor) +
                      " within the scan bound");
  block.last_index = *lambda;
  rec.lambda = *lambda;
  rec.block_first = block.first_index;
  rec.block_last = block.last_index;
  stream.append_block(std::move(block));
  rec.max_total_degree = stream.current().body.total_z_degree();

  {
    const Certificate header = certificate_header(plan);
    auto [e_side, f_side] = stage_predicates(stream, rec, header);
    rec.e_side_by_op = std::move(e_side);
    rec.f_side_by_op = std::move(f_side);
    rec.e_side_error = max_of(rec.e_side_by_op);
    rec.f_side_error = max_of(rec.f_side_by_op);
    std::vector<std::vector<cplx>> centers = {c};
    const PredicateGrids inner_grid = make_grids(req.w_block, req.inner, centers, header.grids);
    const PredicateGrids outer_grid = make_grids(req.w_block, req.outer, centers, header.grids);
    rec.e_grid_points = outer_grid.pair_count();
    rec.f_grid_points = inner_grid.pair_count();
    rec.center_count = header.center_mode == "fixed" ? 1 : center_samples(req.inner, header.grids.center_boundary_samples).size();
    rec.grid_density = std::max(inner_grid.density, outer_grid.density);
    const CenteredPoly q{correction, c};
    const CenteredPoly zero{Poly(r, d), c};
    rec.inner_change = max_of(taylor_deviation(q, zero, capture_index(enumeration, correction.z_degrees()),
                                               enumeration, inner_grid, {DiffOp::identity(r + d)}));
  }
  rec.passed = rec.e_side_error < req.tolerance && rec.f_side_error < req.tolerance;
  if (rec.passed) {
    rec.failure.clear();
  } else if (rec.failure.empty()) {
    rec.failure = "E-side " + sci(rec.e_side_error) + ", F-side " + sci(rec.f_side_error) +
                  " against tolerance " + sci(req.tolerance);
  }
  return rec;
}

ConstructionResult run_construction(const StagePlan& plan) {
  ConstructionResult out{CoefficientStream(plan.settings.enumeration, plan.center, plan.settings.r),
                         certificate_header(plan), {}};
  int number = 1;
  for (const auto& req : plan.stages) {
    const auto t0 = std::chrono::steady_clock::now();
    try {
      out.certificate.stages.push_back(build_stage(out.stream, req, plan, number));
    } catch (const Error& e) {
      StageRecord rec;
      rec.stage = number;
      rec.label = req.label;
      rec.variant = req.variant;
      rec.tolerance = req.tolerance;
      rec.outer = req.outer;
      rec.inner = req.inner;
      rec.w_block = req.w_block;
      rec.target = req.target;
      rec.passed = false;
      rec.failure = e.what();
      out.certificate.stages.push_back(std::move(rec));
      out.certificate.passed = false;
      out.stage_seconds.push_back(
          std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
      break;
    }
    out.stage_seconds.push_back(std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
    out.certificate.passed = out.certificate.passed && out.certificate.stages.back().passed;
    ++number;
  }
  return out;
}

}  // namespace uts
