#include "uts/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "uts/error.hpp"

namespace uts {

namespace {

using u128 = unsigned __int128;

constexpr std::uint64_t kMaxCatalogMonomials = 4096;

double signed_rational(std::uint64_t a) {
  if (a == 0) return 0.0;
  const auto [num, den] = calkin_wilf((a + 1) / 2);
  const double v = static_cast<double>(num) / static_cast<double>(den);
  return (a % 2 == 1) ? v : -v;
}

// Exact rational p / q (q <= max_den) equal to x as a double, by continued fractions.
std::optional<std::pair<std::int64_t, std::int64_t>> as_rational(double x, std::int64_t max_den) {
  if (!std::isfinite(x)) return std::nullopt;
  if (x == std::floor(x) && std::abs(x) < 9e15) return std::make_pair(static_cast<std::int64_t>(x), std::int64_t{1});
  const double ax = std::abs(x);
  std::int64_t h0 = 0, h1 = 1, k0 = 1, k1 = 0;
  double rem = ax;
  for (int iter = 0; iter < 64; ++iter) {
    const double fl = std::floor(rem);
    if (fl > 9e15) return std::nullopt;
    const auto a = static_cast<std::int64_t>(fl);
    const std::int64_t h2 = a * h1 + h0;
    const std::int64_t k2 = a * k1 + k0;
    if (k2 > max_den) return std::nullopt;
    h0 = h1;
    h1 = h2;
    k0 = k1;
    k1 = k2;
    if (static_cast<double>(h1) / static_cast<double>(k1) == ax) return std::make_pair(x < 0 ? -h1 : h1, k1);
    const double frac = rem - fl;
    if (frac <= 0.0) return std::nullopt;
    rem = 1.0 / frac;
  }
  return std::nullopt;
}

std::optional<std::uint64_t> rational_code(double x, std::int64_t max_den) {
  if (x == 0.0) return std::uint64_t{0};
  const auto q = as_rational(x, max_den);
  if (!q) return std::nullopt;
  const std::uint64_t num = static_cast<std::uint64_t>(std::llabs(q->first));
  const std::uint64_t k = calkin_wilf_index(num, static_cast<std::uint64_t>(q->second));
  if (k > (std::numeric_limits<std::uint64_t>::max() - 1) / 2) return std::nullopt;
  return q->first > 0 ? 2 * k - 1 : 2 * k;
}

std::uint64_t catalog_monomials(std::size_t nvars, std::uint64_t degree) {
  const std::uint64_t m = binomial(degree + nvars, nvars);
  if (m > kMaxCatalogMonomials) throw DomainError("catalog index decodes to more than 4096 monomials");
  return m;
}

std::vector<std::vector<cplx>> tensor_points(const std::vector<std::vector<cplx>>& axes) {
  std::vector<std::vector<cplx>> out;
  if (axes.empty()) {
    out.emplace_back();
    return out;
  }
  std::size_t total = 1;
  for (const auto& a : axes) total *= a.size();
  out.reserve(total);
  std::vector<std::size_t> idx(axes.size(), 0);
  for (std::size_t t = 0; t < total; ++t) {
    std::vector<cplx> p(axes.size());
    for (std::size_t v = 0; v < axes.size(); ++v) p[v] = axes[v][idx[v]];
    out.push_back(std::move(p));
    for (std::size_t v = axes.size(); v-- > 0;) {
      if (++idx[v] < axes[v].size()) break;
      idx[v] = 0;
    }
  }
  return out;
}

std::vector<std::vector<cplx>> boundary_axes(const ProductCompact& k, std::size_t n) {
  std::vector<std::vector<cplx>> axes;
  for (const auto& f : k.factors) axes.push_back(boundary_samples_count(f, n));
  return axes;
}

double max_spacing(const ProductCompact& k, std::size_t n) {
  double h = 0.0;
  for (const auto& f : k.factors) h = std::max(h, boundary_length(f) / static_cast<double>(n));
  return h;
}

PredicateResult finish(std::vector<std::pair<DiffOp, double>> by_op, int s, const PredicateGrids& grids,
                       std::string description) {
  if (s < 1) throw DomainError("predicate index s must be >= 1");
  PredicateResult res;
  res.achieved = max_of(by_op);
  res.threshold = 1.0 / static_cast<double>(s);
  res.pass = res.achieved < res.threshold;
  res.by_op = std::move(by_op);
  res.grid_points = grids.pair_count();
  res.center_count = grids.centers.size();
  res.grid_density = grids.density;
  res.description = std::move(description);
  return res;
}

void check_indices(const PredicateSpec& spec) {
  if (spec.tau < 1 || spec.p < 1 || spec.m < 1 || spec.j < 1 || spec.s < 1)
    throw DomainError("predicate indices tau, p, m, j, s must be >= 1");
  if (spec.l < 1) throw DomainError("predicate order l must be >= 1");
}

std::vector<std::vector<cplx>> spec_centers(const PredicateSpec& spec, const ProductCompact& m_p,
                                            const PredicateContext& ctx) {
  if (spec.fixed_center) {
    if (spec.fixed_center->size() != ctx.omega.dim()) throw DimensionError("fixed center must have d coordinates");
    return {*spec.fixed_center};
  }
  return center_samples(m_p, ctx.grids.center_boundary_samples);
}

CenteredPoly at_origin(const Poly& p) { return CenteredPoly{p, std::vector<cplx>(p.d(), 0.0)}; }

}  // namespace

// ---------------------------------------------------------------------------

std::pair<std::uint64_t, std::uint64_t> calkin_wilf(std::uint64_t n) {
  if (n == 0) throw DomainError("the Calkin-Wilf sequence starts at index 1");
  int top = 63;
  while (((n >> top) & 1U) == 0) --top;
  std::uint64_t a = 1, b = 1;
  for (int bit = top - 1; bit >= 0; --bit) {
    if (a > std::numeric_limits<std::uint64_t>::max() - b) throw DomainError("Calkin-Wilf term overflows");
    if ((n >> bit) & 1U)
      a = a + b;
    else
      b = a + b;
  }
  return {a, b};
}

std::uint64_t calkin_wilf_index(std::uint64_t num, std::uint64_t den) {
  if (num == 0 || den == 0) throw DomainError("Calkin-Wilf index needs a positive fraction");
  std::vector<int> bits;
  while (!(num == 1 && den == 1)) {
    if (num > den) {
      num -= den;
      bits.push_back(1);
    } else if (num < den) {
      den -= num;
      bits.push_back(0);
    } else {
      throw DomainError("Calkin-Wilf index needs a reduced fraction");
    }
    if (bits.size() > 63) throw DomainError("Calkin-Wilf index overflows");
  }
  std::uint64_t n = 1;
  for (auto it = bits.rbegin(); it != bits.rend(); ++it) n = (n << 1) | static_cast<std::uint64_t>(*it);
  return n;
}

Poly FjCatalog::at(std::uint64_t j) const {
  if (j == 0) throw DomainError("catalog indices start at 1");
  const std::size_t nv = r_ + d_;
  const auto [degree, code] = cantor_unpair(j - 1);
  const std::uint64_t m = catalog_monomials(nv, degree);
  const Enumeration monomials = Enumeration::graded_lex(nv);
  const MultiIndex entries = Enumeration::graded_lex(static_cast<std::size_t>(2 * m)).unrank(code);
  Poly p(r_, d_);
  for (std::uint64_t t = 0; t < m; ++t) {
    const double re = signed_rational(static_cast<std::uint64_t>(entries[static_cast<std::size_t>(2 * t)]));
    const double im = signed_rational(static_cast<std::uint64_t>(entries[static_cast<std::size_t>(2 * t + 1)]));
    p.add_term(monomials.unrank(t), cplx(re, im));
  }
  return p;
}

std::optional<std::uint64_t> FjCatalog::index_of(const Poly& p, std::int64_t max_denominator) const {
  if (p.r() != r_ || p.d() != d_) throw DimensionError("catalog lookup: polynomial has the wrong shape");
  const std::size_t nv = r_ + d_;
  std::uint64_t degree = 0;
  for (const auto& [e, c] : p.terms()) degree = std::max<std::uint64_t>(degree, static_cast<std::uint64_t>(e.total()));
  const std::uint64_t m = catalog_monomials(nv, degree);
  const Enumeration monomials = Enumeration::graded_lex(nv);
  std::vector<int> entries(static_cast<std::size_t>(2 * m), 0);
  for (std::uint64_t t = 0; t < m; ++t) {
    const cplx c = p.coefficient(monomials.unrank(t));
    const auto re = rational_code(c.real(), max_denominator);
    const auto im = rational_code(c.imag(), max_denominator);
    if (!re || !im || *re > 1'000'000'000 || *im > 1'000'000'000) return std::nullopt;
    entries[static_cast<std::size_t>(2 * t)] = static_cast<int>(*re);
    entries[static_cast<std::size_t>(2 * t + 1)] = static_cast<int>(*im);
  }
  const MultiIndex code_index(std::move(entries));
  const std::uint64_t code = Enumeration::graded_lex(static_cast<std::size_t>(2 * m)).rank(code_index);
  if (code == std::numeric_limits<std::uint64_t>::max()) return std::nullopt;
  const u128 sum = static_cast<u128>(degree) + code;
  const u128 pair = sum * (sum + 1) / 2 + code;
  if (pair >= std::numeric_limits<std::uint64_t>::max()) return std::nullopt;
  return cantor_pair(degree, code) + 1;
}

// ---------------------------------------------------------------------------

std::vector<std::vector<cplx>> center_samples(const ProductCompact& m, std::size_t boundary_per_factor) {
  std::vector<std::vector<cplx>> axes;
  for (const auto& f : m.factors) {
    std::vector<cplx> axis;
    const auto [lo, hi] = bounding_box(f);
    const cplx mid = 0.5 * (lo + hi);
    if (contains(f, mid, 1e-12)) axis.push_back(mid);
    if (boundary_per_factor > 0) {
      const auto b = boundary_samples_count(f, boundary_per_factor);
      axis.insert(axis.end(), b.begin(), b.end());
    }
    if (axis.empty()) axis.push_back(boundary_samples_count(f, 1).front());
    axes.push_back(std::move(axis));
  }
  return tensor_points(axes);
}

PredicateGrids make_grids(const ProductCompact& w_block, const ProductCompact& z_block,
                          std::vector<std::vector<cplx>> centers, const GridSpec& grids) {
  if (z_block.dim() == 0) throw DimensionError("predicate grid needs at least one z-factor");
  std::size_t n = std::max<std::size_t>(grids.points_per_curve, 2);
  PredicateGrids out;
  while (true) {
    auto w_axes = boundary_axes(w_block, n);
    auto z_axes = boundary_axes(z_block, n);
    double count = 1.0;
    for (const auto& a : w_axes) count *= static_cast<double>(a.size());
    for (const auto& a : z_axes) count *= static_cast<double>(a.size());
    if (count <= static_cast<double>(grids.max_points) || n <= 4) {
      out.w = tensor_points(w_axes);
      out.z = tensor_points(z_axes);
      out.density = std::max(max_spacing(w_block, n), max_spacing(z_block, n));
      break;
    }
    n = std::max<std::size_t>(4, n * 4 / 5);
  }
  out.centers = std::move(centers);
  return out;
}

double max_of(const std::vector<std::pair<DiffOp, double>>& by_op) {
  double m = 0.0;
  for (const auto& [op, v] : by_op) m = std::max(m, v);
  return m;
}

std::vector<DiffOp> predicate_ops(Variant variant, std::size_t r, std::size_t d, int l) {
  if (variant == Variant::Plain) return {DiffOp::identity(r + d)};
  return family_Fl(r, d, l);
}

std::vector<std::pair<DiffOp, double>> taylor_deviation(const CenteredPoly& f, const CenteredPoly& g, std::uint64_t n,
                                                       const Enumeration& enumeration, const PredicateGrids& grids,
                                                       const std::vector<DiffOp>& ops) {
  const std::size_t r = f.body.r();
  const std::size_t d = f.body.d();
  if (g.body.r() != r || g.body.d() != d) throw DimensionError("taylor_deviation: polynomials have different shapes");
  if (enumeration.dimension() != d) throw DimensionError("taylor_deviation: enumeration dimension differs from d");
  const bool captured = n >= capture_index(enumeration, f.body.z_degrees());

  std::vector<std::vector<cplx>> expansion_centers;
  if (captured || grids.centers.empty())
    expansion_centers.push_back(f.center);
  else
    expansion_centers = grids.centers;

  std::vector<std::pair<DiffOp, double>> out;
  std::vector<cplx> xs(r + d), xg(r + d);
  for (const auto& op : ops) {
    const PolyEvaluator g_ev(differentiate(g.body, op));
    double worst = 0.0;
    for (const auto& zeta : expansion_centers) {
      if (zeta.size() != d) throw DimensionError("expansion center must have d coordinates");
      const CenteredPoly s = captured ? f : truncate(f.recentered(zeta), n, enumeration);
      const PolyEvaluator s_ev(differentiate(s.body, op));
      for (const auto& w : grids.w) {
        for (std::size_t v = 0; v < r; ++v) xs[v] = xg[v] = w[v];
        for (const auto& z : grids.z) {
          for (std::size_t i = 0; i < d; ++i) {
            xs[r + i] = z[i] - s.center[i];
            xg[r + i] = z[i] - g.center[i];
          }
          const double e = std::abs(s_ev(xs) - g_ev(xg));
          if (std::isnan(e)) {
            worst = std::numeric_limits<double>::infinity();
          } else {
            worst = std::max(worst, e);
          }
        }
      }
    }
    out.emplace_back(op, worst);
  }
  return out;
}

PredicateResult check_E(const Poly& f, const PredicateSpec& spec, const FjCatalog& catalog,
                        const PredicateContext& ctx) {
  check_indices(spec);
  if (f.r() != ctx.g.dim() || f.d() != ctx.omega.dim()) throw DimensionError("candidate does not match the domains");
  if (catalog.r() != f.r() || catalog.d() != f.d()) throw DimensionError("catalog shape differs from the candidate");
  const bool closure = spec.variant == Variant::Infty;
  const ProductCompact f_tau = exhaustion_M(ctx.g, spec.tau, closure);
  const ProductCompact m_p = exhaustion_M(ctx.omega, spec.p, closure);
  const ProductCompact t_m = enumerate_Tm(ctx.omega, spec.m, closure).compact;
  const Poly target = catalog.at(static_cast<std::uint64_t>(spec.j));
  const PredicateGrids grids = make_grids(f_tau, t_m, spec_centers(spec, m_p, ctx), ctx.grids);
  auto by_op = taylor_deviation(at_origin(f), at_origin(target), spec.n, ctx.enumeration, grids,
                                predicate_ops(spec.variant, f.r(), f.d(), spec.l));
  return finish(std::move(by_op), spec.s, grids, "E(" + std::to_string(spec.tau) + "," + std::to_string(spec.p) + "," +
                                                     std::to_string(spec.m) + "," + std::to_string(spec.j) + "," +
                                                     std::to_string(spec.s) + "," + std::to_string(spec.n) + ")");
}

PredicateResult check_F(const Poly& f, const PredicateSpec& spec, const PredicateContext& ctx) {
  check_indices(spec);
  if (f.r() != ctx.g.dim() || f.d() != ctx.omega.dim()) throw DimensionError("candidate does not match the domains");
  PredicateGrids grids;
  std::string description;
  if (spec.variant == Variant::Infty) {
    const ProductCompact w_set = exhaustion_M(ctx.g, spec.l, true);
    const ProductCompact z_set = exhaustion_M(ctx.omega, spec.l, true);
    const ProductCompact m_p = exhaustion_M(ctx.omega, spec.p, true);
    grids = make_grids(w_set, z_set, spec_centers(spec, m_p, ctx), ctx.grids);
    description = "F(" + std::to_string(spec.p) + "," + std::to_string(spec.l) + "," + std::to_string(spec.s) + "," +
                  std::to_string(spec.n) + ")";
  } else {
    const ProductCompact f_tau = exhaustion_M(ctx.g, spec.tau, false);
    const ProductCompact m_p = exhaustion_M(ctx.omega, spec.p, false);
    grids = make_grids(f_tau, m_p, spec_centers(spec, m_p, ctx), ctx.grids);
    description = "F(" + std::to_string(spec.tau) + "," + std::to_string(spec.p) + "," + std::to_string(spec.s) + "," +
                  std::to_string(spec.n) + ")";
  }
  auto by_op = taylor_deviation(at_origin(f), at_origin(f), spec.n, ctx.enumeration, grids,
                                predicate_ops(spec.variant, f.r(), f.d(), spec.l));
  return finish(std::move(by_op), spec.s, grids, std::move(description));
}

PredicateResult check_E_strong(const Poly& f, PredicateSpec spec, const FjCatalog& catalog,
                               const PredicateContext& ctx) {
  spec.variant = Variant::Strong;
  return check_E(f, spec, catalog, ctx);
}

PredicateResult check_F_infty(const Poly& f, PredicateSpec spec, const PredicateContext& ctx) {
  spec.variant = Variant::Infty;
  return check_F(f, spec, ctx);
}

double seminorm_infty(const Poly& f, std::uint64_t n, int l, const PredicateContext& ctx) {
  PredicateSpec spec;
  spec.variant = Variant::Infty;
  spec.p = l;
  spec.l = l;
  spec.n = n;
  return check_F(f, spec, ctx).achieved;
}

// ---------------------------------------------------------------------------

SliceTable tabulate_slices(const PointFunction& f, const ProductCompact& support, std::size_t axis,
                           std::size_t quadrature, std::size_t others_per_factor) {
  if (axis >= support.dim()) throw DimensionError("slice axis out of range");
  if (quadrature < 3) throw DomainError("slice quadrature needs at least 3 nodes");
  const auto disk = incircle(support.factors[axis]);
  if (!disk) throw DomainError("slice residual undefined: the axis factor has no interior");
  SliceTable table;
  table.axis = axis;
  table.circle_center = disk->center;
  table.circle_radius = 0.8 * disk->radius;
  table.quadrature = quadrature;

  std::vector<std::vector<cplx>> other_axes;
  for (std::size_t v = 0; v < support.dim(); ++v)
    if (v != axis) other_axes.push_back(boundary_samples_count(support.factors[v], others_per_factor));
  const auto others = tensor_points(other_axes);

  std::vector<cplx> x(support.dim());
  auto place = [&](const std::vector<cplx>& rest, cplx value) {
    std::size_t k = 0;
    for (std::size_t v = 0; v < support.dim(); ++v) x[v] = (v == axis) ? value : rest[k++];
  };
  for (const auto& rest : others) {
    SliceTable::Slice slice;
    slice.others = rest;
    place(rest, table.circle_center);
    slice.center_value = f(x);
    slice.circle_values.reserve(quadrature);
    for (std::size_t k = 0; k < quadrature; ++k) {
      const double theta = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(quadrature);
      place(rest, table.circle_center + std::polar(table.circle_radius, theta));
      slice.circle_values.push_back(f(x));
    }
    table.slices.push_back(std::move(slice));
  }
  return table;
}

double slice_AD_residual(const SliceTable& table) {
  if (!(table.circle_radius > 0.0)) throw DomainError("slice table has no test circle");
  double worst = 0.0;
  for (const auto& slice : table.slices) {
    const std::size_t n = slice.circle_values.size();
    if (n == 0) throw DomainError("slice without circle samples");
    cplx mean = 0.0;
    cplx contour = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      const double theta = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n);
      mean += slice.circle_values[k];
      contour += slice.circle_values[k] * std::polar(table.circle_radius, theta);
    }
    mean /= static_cast<double>(n);
    contour /= static_cast<double>(n);
    worst = std::max({worst, std::abs(mean - slice.center_value), std::abs(contour)});
  }
  return worst;
}

// ---------------------------------------------------------------------------

std::pair<std::vector<std::pair<DiffOp, double>>, std::vector<std::pair<DiffOp, double>>> stage_predicates(
    const CoefficientStream& stream, const StageRecord& record, const Certificate& cert) {
  const CenteredPoly candidate = stream_partial_sum(stream, record.lambda);
  const std::vector<DiffOp> ops = predicate_ops(record.variant, cert.r, cert.d, std::max(record.derivative_order, 1));
  std::vector<std::vector<cplx>> centers;
  if (cert.center_mode == "fixed")
    centers = {cert.center};
  else
    centers = center_samples(record.inner, cert.grids.center_boundary_samples);
  const PredicateGrids e_grids = make_grids(record.w_block, record.outer, centers, cert.grids);
  const PredicateGrids f_grids = make_grids(record.w_block, record.inner, centers, cert.grids);
  const CenteredPoly target{record.target, std::vector<cplx>(cert.d, 0.0)};
  return {taylor_deviation(candidate, target, record.lambda, stream.enumeration(), e_grids, ops),
          taylor_deviation(candidate, candidate, record.lambda, stream.enumeration(), f_grids, ops)};
}

VerificationReport verify_certificate(const CoefficientStream& stream, const Certificate& cert,
                                      double match_tolerance) {
  VerificationReport rep;
  auto fail = [&](std::string why) {
    rep.ok = false;
    rep.problems.push_back(std::move(why));
  };
  if (stream.enumeration().tag() != cert.enumeration_tag) {
    fail("enumeration mismatch: stream uses " + stream.enumeration().tag() + ", certificate names " +
         cert.enumeration_tag);
    return rep;
  }
  if (stream.r() != cert.r || stream.d() != cert.d) {
    fail("dimension mismatch between stream and certificate");
    return rep;
  }
  if (stream.center() != cert.center) {
    fail("center mismatch between stream and certificate");
    return rep;
  }
  const IndexSet mu = IndexSet::from_tag(cert.mu_tag);
  bool all_passed = true;
  std::optional<std::uint64_t> prev;
  const auto& blocks = stream.blocks();
  for (std::size_t t = 0; t < cert.stages.size(); ++t) {
    const StageRecord& rec = cert.stages[t];
    const std::string tag = "stage " + std::to_string(rec.stage) + ": ";
    all_passed = all_passed && rec.passed;
    if (!mu.contains(rec.lambda)) fail(tag + "lambda " + std::to_string(rec.lambda) + " is not in " + cert.mu_tag);
    if (prev && rec.lambda < *prev) fail(tag + "lambda decreases");
    prev = rec.lambda;
    if (t >= blocks.size() || blocks[t].first_index != rec.block_first || blocks[t].last_index != rec.block_last) {
      fail(tag + "block range does not match the stream");
      continue;
    }
    if (rec.lambda != rec.block_last) {
      fail(tag + "lambda differs from the end of its block");
      continue;
    }
    const auto [e_side, f_side] = stage_predicates(stream, rec, cert);
    rep.recomputed.emplace_back(max_of(e_side), max_of(f_side));
    auto compare = [&](const std::vector<std::pair<DiffOp, double>>& got,
                       const std::vector<std::pair<DiffOp, double>>& recorded, const char* side) {
      if (got.size() != recorded.size()) {
        fail(tag + side + " operator list differs");
        return;
      }
      for (std::size_t k = 0; k < got.size(); ++k) {
        const double want = recorded[k].second;
        if (got[k].first != recorded[k].first || !(std::abs(got[k].second - want) <= match_tolerance * std::max(1.0, std::abs(want))))
          fail(tag + side + " error for " + got[k].first.str() + " recomputes to " + std::to_string(got[k].second) +
               ", certificate records " + std::to_string(want));
      }
    };
    compare(e_side, rec.e_side_by_op, "E-side");
    compare(f_side, rec.f_side_by_op, "F-side");
    if (std::abs(max_of(rec.e_side_by_op) - rec.e_side_error) > 0.0 ||
        std::abs(max_of(rec.f_side_by_op) - rec.f_side_error) > 0.0)
      fail(tag + "summary errors disagree with the per-operator errors");
    if (!(rec.e_side_error < rec.tolerance && rec.f_side_error < rec.tolerance))
      fail(tag + "an achieved error is not below the tolerance");
    if (!rec.passed) fail(tag + "stage is marked as failed");
  }
  if (cert.stages.size() > blocks.size()) fail("certificate has more stages than the stream has blocks");
  if (cert.passed != all_passed) fail("overall verdict disagrees with the stage verdicts");
  return rep;
}

}  // namespace uts
