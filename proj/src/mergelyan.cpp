#include "uts/mergelyan.hpp"

#include <Eigen/Dense>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "uts/error.hpp"

namespace uts {

namespace {

constexpr double kMaxCoefficientGrowth = 1e14;

using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

double falling(int e, int a) {
  double r = 1.0;
  for (int i = 0; i < a; ++i) r *= static_cast<double>(e - i);
  return r;
}

cplx ipow(cplx x, int e) {
  cplx r = 1.0;
  cplx b = x;
  while (e > 0) {
    if (e & 1) r *= b;
    b *= b;
    e >>= 1;
  }
  return r;
}

// Sample points of every piece, stored as shifted coordinates u = x - center.
struct PointSet {
  std::size_t nvars = 0;
  std::vector<cplx> u;                // npoints * nvars
  std::vector<std::size_t> piece_begin;  // npieces + 1 offsets (in points)

  std::size_t size() const { return nvars == 0 ? 0 : u.size() / nvars; }
  std::span<const cplx> at(std::size_t i) const { return {u.data() + i * nvars, nvars}; }
};

std::size_t per_factor_count(std::size_t wanted, std::size_t dim, std::size_t cap) {
  if (dim == 0) return wanted;
  std::size_t n = wanted;
  auto total = [&](std::size_t k) {
    double t = 1.0;
    for (std::size_t i = 0; i < dim; ++i) t *= static_cast<double>(k);
    return t;
  };
  while (n > 2 && total(n) > static_cast<double>(cap)) --n;
  return n;
}

PointSet build_points(const ApproxTask& task, std::span<const cplx> center, std::size_t per_curve,
                      std::size_t point_cap, double phase) {
  PointSet ps;
  ps.nvars = task.r + task.d;
  ps.piece_begin.push_back(0);
  std::vector<cplx> x(ps.nvars);
  for (const auto& piece : task.pieces) {
    const std::size_t n = per_factor_count(per_curve, piece.support.dim(), point_cap);
    const SampleGrid grid = sample_count(piece.support, n, phase);
    for (std::size_t i = 0; i < grid.size(); ++i) {
      grid.point(i, x);
      for (std::size_t v = 0; v < ps.nvars; ++v) ps.u.push_back(x[v] - center[v]);
    }
    ps.piece_begin.push_back(ps.size());
  }
  return ps;
}

// Exponent tuples of the box prod [0, cap_v] in lexicographic order, first
// coordinate most significant.
std::vector<MultiIndex> lex_box(const MultiIndex& caps) {
  std::vector<MultiIndex> out;
  const std::size_t n = caps.size();
  std::vector<int> cur(n, 0);
  while (true) {
    out.emplace_back(cur);
    std::size_t v = n;
    while (v > 0) {
      --v;
      if (cur[v] < caps[v]) {
        ++cur[v];
        for (std::size_t t = v + 1; t < n; ++t) cur[t] = 0;
        break;
      }
      if (v == 0) return out;
    }
    if (n == 0) return out;
  }
}

struct Solution {
  Vector x;
  std::vector<double> singular_values;
  std::size_t rank = 0;

  double condition() const {
    if (singular_values.empty()) return 1.0;
    const double smax = singular_values.front();
    const double smin = singular_values.back();
    if (!(smin > 0.0)) return std::numeric_limits<double>::infinity();
    return smax / smin;
  }
};

Solution solve_truncated(const Matrix& a, const Vector& b, double rcond) {
  Solution out;
  const Eigen::Index m = a.rows();
  const Eigen::Index n = a.cols();
  out.x = Vector::Zero(n);
  if (m == 0 || n == 0) return out;
  Matrix core;
  Vector rhs;
  if (m > n) {
    Eigen::HouseholderQR<Matrix> qr(a);
    core = qr.matrixQR().topRows(n).triangularView<Eigen::Upper>();
    rhs = (qr.householderQ().adjoint() * b).head(n);
  } else {
    core = a;
    rhs = b;
  }
  Eigen::BDCSVD<Matrix> svd(core, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& s = svd.singularValues();
  for (Eigen::Index i = 0; i < s.size(); ++i) out.singular_values.push_back(s(i));
  const double cut = s.size() > 0 ? rcond * s(0) : 0.0;
  Vector y = svd.matrixU().adjoint() * rhs;
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    if (s(i) > cut && s(i) > 0.0) {
      y(i) /= s(i);
      ++out.rank;
    } else {
      y(i) = 0.0;
    }
  }
  out.x = svd.matrixV() * y;
  return out;
}

std::vector<DiffOp> requested_ops(const ApproxTask& task) {
  std::vector<DiffOp> ops = task.derivative_orders;
  if (ops.empty()) ops.push_back(DiffOp::identity(task.r + task.d));
  for (const auto& op : ops)
    if (op.exponents.size() != task.r + task.d) throw DimensionError("derivative operator has the wrong arity");
  return ops;
}

// Shift taking u = x - basis_center to the target's own variable x - target_center.
std::vector<cplx> target_offset(const ApproxPiece& piece, std::span<const cplx> center) {
  std::vector<cplx> off(center.begin(), center.end());
  for (std::size_t v = 0; v < piece.target_center.size() && v < off.size(); ++v) off[v] -= piece.target_center[v];
  return off;
}

// Target values D target(x) for every (op, point) row of each piece, rows
// ordered piece-major, then op, then point.
Vector target_rows(const ApproxTask& task, const PointSet& ps, std::span<const cplx> center,
                   const std::vector<DiffOp>& ops) {
  const std::size_t nv = ps.nvars;
  std::size_t rows = 0;
  for (std::size_t p = 0; p < task.pieces.size(); ++p)
    rows += ops.size() * (ps.piece_begin[p + 1] - ps.piece_begin[p]);
  Vector b(static_cast<Eigen::Index>(rows));
  std::vector<cplx> x(nv);
  Eigen::Index row = 0;
  for (std::size_t p = 0; p < task.pieces.size(); ++p) {
    const std::vector<cplx> offset = target_offset(task.pieces[p], center);
    for (const auto& op : ops) {
      const PolyEvaluator ev(differentiate(task.pieces[p].target, op));
      for (std::size_t i = ps.piece_begin[p]; i < ps.piece_begin[p + 1]; ++i) {
        const auto u = ps.at(i);
        for (std::size_t v = 0; v < nv; ++v) x[v] = u[v] + offset[v];
        b(row++) = ev(x);
      }
    }
  }
  return b;
}

// Sup error per op of D(fitted)(u) - D(target)(u + center) over the point set.
std::vector<std::pair<DiffOp, double>> measure_errors(const ApproxTask& task, const Poly& fitted_centered,
                                                     const PointSet& ps, std::span<const cplx> center,
                                                     const std::vector<DiffOp>& ops) {
  std::vector<std::pair<DiffOp, double>> out;
  const std::size_t nv = ps.nvars;
  std::vector<cplx> x(nv);
  for (const auto& op : ops) {
    const PolyEvaluator fit_ev(differentiate(fitted_centered, op));
    double worst = 0.0;
    for (std::size_t p = 0; p < task.pieces.size(); ++p) {
      const PolyEvaluator tgt_ev(differentiate(task.pieces[p].target, op));
      const std::vector<cplx> offset = target_offset(task.pieces[p], center);
      for (std::size_t i = ps.piece_begin[p]; i < ps.piece_begin[p + 1]; ++i) {
        const auto u = ps.at(i);
        for (std::size_t v = 0; v < nv; ++v) x[v] = u[v] + offset[v];
        const double err = std::abs(fit_ev(u) - tgt_ev(x));
        worst = std::isnan(err) ? std::numeric_limits<double>::infinity() : std::max(worst, err);
      }
    }
    out.emplace_back(op, worst);
  }
  return out;
}

enum class Route { Raw, Scaled, Orthogonalized };

struct Layout {
  std::vector<MultiIndex> box;  // beta, lex order
  MultiIndex premultiplier;     // E
};

Layout make_layout(const ApproxTask& task, int cap) {
  const std::size_t nv = task.r + task.d;
  if (task.degree_budget.size() != nv) throw DimensionError("degree budget must have r + d entries");
  MultiIndex caps(nv);
  for (std::size_t v = 0; v < nv; ++v) caps.set(v, std::min(task.degree_budget[v], cap));
  Layout lay;
  lay.box = lex_box(caps);
  lay.premultiplier = MultiIndex(nv);
  if (task.factor) {
    if (task.factor->coordinate >= nv) throw DimensionError("basis factor coordinate out of range");
    if (task.factor->exponent < 0) throw DomainError("basis factor exponent must be non-negative");
    lay.premultiplier.set(task.factor->coordinate, task.factor->exponent);
  }
  return lay;
}

std::vector<double> coordinate_scales(const PointSet& ps) {
  std::vector<double> s(ps.nvars, 0.0);
  for (std::size_t i = 0; i < ps.size(); ++i) {
    const auto u = ps.at(i);
    for (std::size_t v = 0; v < ps.nvars; ++v) s[v] = std::max(s[v], std::abs(u[v]));
  }
  for (auto& x : s)
    if (!(x > 0.0)) x = 1.0;
  return s;
}

// d^alpha/du^alpha of (u/s)^gamma.
cplx monomial_derivative(std::span<const cplx> u, const std::vector<double>& s, const MultiIndex& gamma,
                         const MultiIndex& alpha) {
  cplx val = 1.0;
  for (std::size_t v = 0; v < u.size(); ++v) {
    const int g = gamma[v];
    const int a = alpha[v];
    if (a > g) return 0.0;
    val *= falling(g, a) * ipow(u[v] / s[v], g - a) * std::pow(s[v], -a);
  }
  return val;
}

struct Attempt {
  FitReport report;
};

Attempt fit_monomial(const ApproxTask& task, const Layout& lay, const PointSet& ps, const Vector& b,
                     const std::vector<DiffOp>& ops, bool scaled) {
  const std::size_t nv = ps.nvars;
  const std::vector<double> s = scaled ? coordinate_scales(ps) : std::vector<double>(nv, 1.0);
  const Eigen::Index rows = b.size();
  const Eigen::Index cols = static_cast<Eigen::Index>(lay.box.size());
  Matrix a(rows, cols);
  for (Eigen::Index c = 0; c < cols; ++c) {
    const MultiIndex gamma = lay.premultiplier + lay.box[static_cast<std::size_t>(c)];
    Eigen::Index row = 0;
    for (std::size_t p = 0; p < task.pieces.size(); ++p)
      for (const auto& op : ops)
        for (std::size_t i = ps.piece_begin[p]; i < ps.piece_begin[p + 1]; ++i)
          a(row++, c) = monomial_derivative(ps.at(i), s, gamma, op.exponents);
  }
  Eigen::VectorXd norms(cols);
  for (Eigen::Index c = 0; c < cols; ++c) {
    norms(c) = a.col(c).norm();
    if (!(norms(c) > 0.0)) norms(c) = 1.0;
    a.col(c) /= norms(c);
  }
  const Solution sol = solve_truncated(a, b, task.rcond);
  Poly fitted(task.r, task.d);
  for (Eigen::Index c = 0; c < cols; ++c) {
    const MultiIndex gamma = lay.premultiplier + lay.box[static_cast<std::size_t>(c)];
    double scale = 1.0;
    for (std::size_t v = 0; v < nv; ++v) scale *= std::pow(s[v], -gamma[v]);
    fitted.add_term(gamma, sol.x(c) / norms(c) * scale);
  }
  Attempt at;
  at.report.fitted_centered = std::move(fitted);
  at.report.condition_estimate = sol.condition();
  at.report.numerical_rank = sol.rank;
  at.report.rows = static_cast<std::size_t>(rows);
  at.report.columns = static_cast<std::size_t>(cols);
  at.report.basis = scaled ? "scaled-monomial" : "monomial";
  return at;
}

// Orthogonal basis built by multiplying earlier basis functions by one scaled
// coordinate and re-orthogonalizing over the requested rows. Derivative rows
// are carried along through the product rule over the downward closure of the
// requested operators.
Attempt fit_orthogonal(const ApproxTask& task, const Layout& lay, const PointSet& ps, const Vector& b,
                       const std::vector<DiffOp>& ops) {
  const std::size_t nv = ps.nvars;
  const std::size_t npts = ps.size();
  const std::vector<double> s = coordinate_scales(ps);

  // Operator closure: requested ops first, then every divisor of them.
  std::vector<MultiIndex> closure;
  std::map<MultiIndex, std::size_t> closure_pos;
  auto add_op = [&](const MultiIndex& m) {
    if (closure_pos.count(m)) return;
    closure_pos[m] = closure.size();
    closure.push_back(m);
  };
  for (const auto& op : ops) add_op(op.exponents);
  const std::size_t nreq = closure.size();
  for (std::size_t k = 0; k < closure.size(); ++k)
    for (std::size_t v = 0; v < nv; ++v)
      if (closure[k][v] > 0) {
        MultiIndex lower = closure[k];
        lower.set(v, lower[v] - 1);
        add_op(lower);
      }
  const std::size_t nclosure = closure.size();
  // lower_of[k][v]: closure index of closure[k] - e_v, or npos.
  constexpr std::size_t npos = static_cast<std::size_t>(-1);
  std::vector<std::vector<std::size_t>> lower_of(nclosure, std::vector<std::size_t>(nv, npos));
  for (std::size_t k = 0; k < nclosure; ++k)
    for (std::size_t v = 0; v < nv; ++v)
      if (closure[k][v] > 0) {
        MultiIndex lower = closure[k];
        lower.set(v, lower[v] - 1);
        lower_of[k][v] = closure_pos.at(lower);
      }

  // Table rows: closure op k, point i -> row k * npts + i. Requested rows come
  // first; the right-hand side b is ordered piece-major, so reorder it.
  const Eigen::Index req_rows = static_cast<Eigen::Index>(nreq * npts);
  Vector rhs(req_rows);
  {
    Eigen::Index row = 0;
    for (std::size_t p = 0; p < task.pieces.size(); ++p)
      for (std::size_t k = 0; k < nreq; ++k)
        for (std::size_t i = ps.piece_begin[p]; i < ps.piece_begin[p + 1]; ++i)
          rhs(static_cast<Eigen::Index>(k * npts + i)) = b(row++);
  }

  const std::size_t nbox = lay.box.size();
  const Eigen::Index all_rows = static_cast<Eigen::Index>(nclosure * npts);
  Matrix table(all_rows, static_cast<Eigen::Index>(nbox));
  std::vector<std::vector<cplx>> coef(nbox);  // over box positions
  std::vector<bool> active(nbox, false);
  std::map<MultiIndex, std::size_t> box_pos;
  for (std::size_t j = 0; j < nbox; ++j) box_pos[lay.box[j]] = j;

  for (std::size_t j = 0; j < nbox; ++j) {
    const MultiIndex& beta = lay.box[j];
    Vector col(all_rows);
    std::vector<cplx> c(nbox, 0.0);
    std::size_t lead = nv;
    for (std::size_t v = 0; v < nv; ++v)
      if (beta[v] > 0) {
        lead = v;
        break;
      }
    if (lead == nv) {
      for (std::size_t k = 0; k < nclosure; ++k)
        for (std::size_t i = 0; i < npts; ++i)
          col(static_cast<Eigen::Index>(k * npts + i)) = monomial_derivative(ps.at(i), s, lay.premultiplier, closure[k]);
      c[j] = 1.0;
    } else {
      MultiIndex parent_beta = beta;
      parent_beta.set(lead, beta[lead] - 1);
      const std::size_t parent = box_pos.at(parent_beta);
      const double inv_s = 1.0 / s[lead];
      for (std::size_t k = 0; k < nclosure; ++k) {
        const std::size_t lower = lower_of[k][lead];
        const double mult = static_cast<double>(closure[k][lead]) * inv_s;
        for (std::size_t i = 0; i < npts; ++i) {
          const Eigen::Index row = static_cast<Eigen::Index>(k * npts + i);
          cplx val = ps.at(i)[lead] * inv_s * table(row, static_cast<Eigen::Index>(parent));
          if (lower != npos)
            val += mult * table(static_cast<Eigen::Index>(lower * npts + i), static_cast<Eigen::Index>(parent));
          col(row) = val;
        }
      }
      // Multiplying by v_lead shifts the symbolic coefficients by e_lead.
      for (std::size_t q = 0; q < nbox; ++q) {
        if (coef[parent][q] == cplx(0.0)) continue;
        MultiIndex shifted = lay.box[q];
        shifted.set(lead, shifted[lead] + 1);
        c[box_pos.at(shifted)] += coef[parent][q];
      }
    }
    const double before = col.head(req_rows).norm();
    for (int pass = 0; pass < 2; ++pass)
      for (std::size_t q = 0; q < j; ++q) {
        if (!active[q]) continue;
        const auto qcol = table.col(static_cast<Eigen::Index>(q));
        const cplx h = qcol.head(req_rows).dot(col.head(req_rows));
        if (h == cplx(0.0)) continue;
        col -= h * qcol;
        for (std::size_t t = 0; t < nbox; ++t) c[t] -= h * coef[q][t];
      }
    const double after = col.head(req_rows).norm();
    bool keep = after > 1e-13 * std::max(before, 1e-300) && after > 0.0;
    const double scale = keep ? after : std::max(before, 1.0);
    col /= scale;
    double coef_norm = 0.0;
    for (auto& x : c) {
      x /= scale;
      coef_norm += std::abs(x);
    }
    // The scaled monomials are bounded by 1 on the samples, so coef_norm
    // bounds the cancellation when the combination is expanded to monomials.
    if (coef_norm * std::sqrt(static_cast<double>(npts)) > kMaxCoefficientGrowth) keep = false;
    table.col(static_cast<Eigen::Index>(j)) = col;
    coef[j] = std::move(c);
    active[j] = keep;
  }

  std::vector<std::size_t> used;
  for (std::size_t j = 0; j < nbox; ++j)
    if (active[j]) used.push_back(j);
  Matrix q(req_rows, static_cast<Eigen::Index>(used.size()));
  for (std::size_t t = 0; t < used.size(); ++t)
    q.col(static_cast<Eigen::Index>(t)) = table.col(static_cast<Eigen::Index>(used[t])).head(req_rows);
  table.resize(0, 0);
  const Solution sol = solve_truncated(q, rhs, task.rcond);

  std::vector<cplx> total(nbox, 0.0);
  for (std::size_t t = 0; t < used.size(); ++t)
    for (std::size_t k = 0; k < nbox; ++k) total[k] += sol.x(static_cast<Eigen::Index>(t)) * coef[used[t]][k];
  Poly fitted(task.r, task.d);
  for (std::size_t k = 0; k < nbox; ++k) {
    const MultiIndex gamma = lay.premultiplier + lay.box[k];
    double scale = 1.0;
    for (std::size_t v = 0; v < nv; ++v) scale *= std::pow(s[v], -gamma[v]);
    fitted.add_term(gamma, total[k] * scale);
  }
  Attempt at;
  at.report.fitted_centered = std::move(fitted);
  at.report.condition_estimate = sol.condition();
  at.report.numerical_rank = sol.rank;
  at.report.rows = static_cast<std::size_t>(req_rows);
  at.report.columns = used.size();
  at.report.basis = "orthogonalized";
  return at;
}

void validate(const ApproxTask& task) {
  if (task.pieces.empty()) throw DomainError("approximation task without pieces");
  const std::size_t nv = task.r + task.d;
  for (const auto& p : task.pieces) {
    if (p.support.dim() != nv) throw DimensionError("piece support must have r + d factors");
    if (p.target.r() != task.r || p.target.d() != task.d) throw DimensionError("piece target has the wrong shape");
    if (!p.target_center.empty() && p.target_center.size() != nv)
      throw DimensionError("piece target center must have r + d coordinates");
  }
  if (!task.basis_center.empty() && task.basis_center.size() != nv)
    throw DimensionError("basis center must have r + d coordinates");
  if (!(task.tolerance > 0.0)) throw DomainError("tolerance must be positive");
  if (task.points_per_curve < 2 || task.verify_points_per_curve < 2) throw DomainError("too few sample points");
}

FitReport run(const ApproxTask& task, Route route) {
  validate(task);
  const std::size_t nv = task.r + task.d;
  const std::vector<cplx> center = task.basis_center.empty() ? std::vector<cplx>(nv, 0.0) : task.basis_center;
  const std::vector<DiffOp> ops = requested_ops(task);
  const std::size_t fit_cap = std::max<std::size_t>(4, task.max_rows_per_piece / ops.size());
  const std::size_t verify_cap = std::max<std::size_t>(4, task.max_verify_rows_per_piece / ops.size());
  const PointSet fit_pts = build_points(task, center, task.points_per_curve, fit_cap, 0.0);
  const PointSet check_pts = build_points(task, center, task.verify_points_per_curve, verify_cap, task.verify_phase);
  const Vector b = target_rows(task, fit_pts, center, ops);

  std::vector<int> caps = task.degree_sweep;
  if (caps.empty()) {
    if (task.degree_budget.size() != nv) throw DimensionError("degree budget must have r + d entries");
    int top = 0;
    for (std::size_t v = 0; v < nv; ++v) top = std::max(top, task.degree_budget[v]);
    caps.push_back(top);
  }

  std::vector<SweepEntry> history;
  std::optional<FitReport> best;
  for (const int cap : caps) {
    const Layout lay = make_layout(task, cap);
    Attempt at = route == Route::Orthogonalized ? fit_orthogonal(task, lay, fit_pts, b, ops)
                                                : fit_monomial(task, lay, fit_pts, b, ops, route == Route::Scaled);
    FitReport& rep = at.report;
    rep.basis_center = center;
    rep.degree_cap = cap;
    rep.achieved_errors = measure_errors(task, rep.fitted_centered, check_pts, center, ops);
    rep.fitting_errors = measure_errors(task, rep.fitted_centered, fit_pts, center, ops);
    rep.success = rep.max_error() < task.tolerance;
    history.push_back({cap, rep.max_error(), rep.condition_estimate});
    if (!best || rep.max_error() < best->max_error() || rep.success) best = std::move(rep);
    if (best->success) break;
  }
  best->residual_history = std::move(history);
  return *best;
}

}  // namespace

double FitReport::max_error() const {
  double m = 0.0;
  for (const auto& [op, e] : achieved_errors) m = std::max(m, e);
  return m;
}

double FitReport::max_fitting_error() const {
  double m = 0.0;
  for (const auto& [op, e] : fitting_errors) m = std::max(m, e);
  return m;
}

Poly FitReport::fitted() const {
  const std::size_t r = fitted_centered.r();
  const std::size_t d = fitted_centered.d();
  Poly flat(0, r + d);
  for (const auto& [e, c] : fitted_centered.terms()) flat.add_term(e, c);
  std::vector<cplx> back(r + d, 0.0);
  for (std::size_t v = 0; v < basis_center.size() && v < r + d; ++v) back[v] = -basis_center[v];
  const Poly shifted = shift_center(flat, back);
  Poly out(r, d);
  for (const auto& [e, c] : shifted.terms()) out.add_term(e, c);
  return out;
}

MultiIndex uniform_budget(std::size_t r, std::size_t d, int w_degree, int z_degree) {
  MultiIndex m(r + d);
  for (std::size_t v = 0; v < r; ++v) m.set(v, w_degree);
  for (std::size_t v = r; v < r + d; ++v) m.set(v, z_degree);
  return m;
}

ApproxTask glue_target(const Poly& g, const Poly& f_j, const ProductCompact& inner, const ProductCompact& outer,
                       std::optional<std::size_t> i0) {
  const std::size_t r = g.r();
  const std::size_t d = g.d();
  if (f_j.r() != r || f_j.d() != d) throw DimensionError("glue_target: targets have different shapes");
  if (inner.dim() != r + d || outer.dim() != r + d) throw DimensionError("glue_target: blocks must have r + d factors");
  if (d == 0) throw DimensionError("glue_target needs at least one z-variable");
  for (std::size_t v = 0; v < r; ++v)
    if (!(inner.factors[v] == outer.factors[v])) throw DomainError("glue_target: w-factors of the blocks differ");

  auto gap = [&](std::size_t v) {
    const auto [alo, ahi] = bounding_box(inner.factors[v]);
    const auto [blo, bhi] = bounding_box(outer.factors[v]);
    const double scale = std::max({std::abs(ahi - alo), std::abs(bhi - blo), 1e-3});
    return sampled_distance(inner.factors[v], outer.factors[v], scale / 128.0);
  };
  std::size_t split;
  if (i0) {
    if (*i0 >= d) throw DimensionError("glue_target: i0 out of range");
    split = r + *i0;
    if (!(gap(split) > 0.0)) throw DomainError("glue_target: the i0 factors overlap");
  } else {
    std::optional<std::size_t> found;
    for (std::size_t v = r; v < r + d && !found; ++v)
      if (!(inner.factors[v] == outer.factors[v]) && gap(v) > 0.0) found = v;
    if (!found) throw DomainError("glue_target: no z-factor separates the blocks");
    split = *found;
  }

  ApproxTask task;
  task.r = r;
  task.d = d;
  ProductCompact in = inner;
  ProductCompact out = outer;
  for (std::size_t v = r; v < r + d; ++v) {
    if (v == split || inner.factors[v] == outer.factors[v]) continue;
    const auto [alo, ahi] = bounding_box(inner.factors[v]);
    const auto [blo, bhi] = bounding_box(outer.factors[v]);
    const cplx lo(std::min(alo.real(), blo.real()), std::min(alo.imag(), blo.imag()));
    const cplx hi(std::max(ahi.real(), bhi.real()), std::max(ahi.imag(), bhi.imag()));
    const cplx mid = 0.5 * (lo + hi);
    const PlanarCompact ball = PlanarCompact::disk(mid, std::max(0.5 * std::abs(hi - lo), 1e-9));
    in.factors[v] = ball;
    out.factors[v] = ball;
  }
  task.pieces.push_back({std::move(in), g, {}});
  task.pieces.push_back({std::move(out), f_j, {}});
  int wdeg = 0;
  for (std::size_t v = 0; v < r; ++v) wdeg = std::max({wdeg, g.degree(v), f_j.degree(v)});
  task.degree_budget = uniform_budget(r, d, wdeg, 20);
  task.derivative_orders = {DiffOp::identity(r + d)};
  return task;
}

FitReport fit(const ApproxTask& task) { return run(task, Route::Raw); }

FitReport fit_with_scaling(const ApproxTask& task, bool orthogonalize) {
  return run(task, orthogonalize ? Route::Orthogonalized : Route::Scaled);
}

}  // namespace uts
