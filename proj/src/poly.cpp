#include "uts/poly.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "uts/error.hpp"

namespace uts {

namespace {

// e (e - 1) ... (e - a + 1)
double falling(int e, int a) {
  double r = 1.0;
  for (int i = 0; i < a; ++i) r *= static_cast<double>(e - i);
  return r;
}

// Binomial coefficient as a double via the multiplicative recurrence.
double binom_d(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  k = std::min(k, n - k);
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * static_cast<double>(n - k + i) / static_cast<double>(i);
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

void require_dim(std::size_t got, std::size_t want, const char* what) {
  if (got != want)
    throw DimensionError(std::string(what) + ": expected dimension " + std::to_string(want) + ", got " +
                         std::to_string(got));
}

}  // namespace

Poly Poly::constant(std::size_t r, std::size_t d, cplx c) {
  Poly p(r, d);
  p.add_term(MultiIndex(r + d), c);
  return p;
}

Poly Poly::monomial(std::size_t r, std::size_t d, const MultiIndex& exponents, cplx c) {
  require_dim(exponents.size(), r + d, "Poly::monomial");
  Poly p(r, d);
  p.add_term(exponents, c);
  return p;
}

Poly Poly::variable(std::size_t r, std::size_t d, std::size_t var) {
  if (var >= r + d) throw DimensionError("Poly::variable: coordinate out of range");
  MultiIndex e(r + d);
  e.set(var, 1);
  return monomial(r, d, e);
}

void Poly::add_term(const MultiIndex& exponents, cplx c) {
  require_dim(exponents.size(), nvars(), "Poly::add_term");
  if (c == cplx(0.0)) return;
  auto [it, inserted] = terms_.try_emplace(exponents, c);
  if (!inserted) {
    it->second += c;
    if (it->second == cplx(0.0)) terms_.erase(it);
  }
}

cplx Poly::coefficient(const MultiIndex& exponents) const {
  auto it = terms_.find(exponents);
  return it == terms_.end() ? cplx(0.0) : it->second;
}

int Poly::degree(std::size_t var) const {
  if (var >= nvars()) throw DimensionError("Poly::degree: coordinate out of range");
  int deg = -1;
  for (const auto& [e, c] : terms_) deg = std::max(deg, e[var]);
  return deg;
}

MultiIndex Poly::z_degrees() const {
  MultiIndex out(d_);
  for (const auto& [e, c] : terms_)
    for (std::size_t i = 0; i < d_; ++i) out.set(i, std::max(out[i], e[r_ + i]));
  return out;
}

int Poly::total_z_degree() const {
  int deg = is_zero() ? -1 : 0;
  for (const auto& [e, c] : terms_) {
    int t = 0;
    for (std::size_t i = 0; i < d_; ++i) t += e[r_ + i];
    deg = std::max(deg, t);
  }
  return deg;
}

double Poly::l1_norm() const {
  double s = 0.0;
  for (const auto& [e, c] : terms_) s += std::abs(c);
  return s;
}

cplx Poly::eval(std::span<const cplx> w, std::span<const cplx> z) const {
  require_dim(w.size(), r_, "Poly::eval (w)");
  require_dim(z.size(), d_, "Poly::eval (z)");
  std::vector<cplx> x(w.begin(), w.end());
  x.insert(x.end(), z.begin(), z.end());
  return eval(std::span<const cplx>(x));
}

cplx Poly::eval(std::span<const cplx> x) const {
  require_dim(x.size(), nvars(), "Poly::eval");
  if (terms_.empty()) return 0.0;
  std::vector<std::vector<cplx>> powers(nvars());
  for (std::size_t v = 0; v < nvars(); ++v) {
    const int deg = std::max(degree(v), 0);
    powers[v].resize(static_cast<std::size_t>(deg) + 1);
    powers[v][0] = 1.0;
    for (int k = 1; k <= deg; ++k) powers[v][k] = powers[v][k - 1] * x[v];
  }
  cplx sum = 0.0;
  for (const auto& [e, c] : terms_) {
    cplx t = c;
    for (std::size_t v = 0; v < nvars(); ++v)
      if (e[v]) t *= powers[v][static_cast<std::size_t>(e[v])];
    sum += t;
  }
  return sum;
}

void Poly::require_same_shape(const Poly& other) const {
  if (other.r_ != r_ || other.d_ != d_)
    throw DimensionError("polynomial shapes differ: (" + std::to_string(r_) + "," + std::to_string(d_) + ") vs (" +
                         std::to_string(other.r_) + "," + std::to_string(other.d_) + ")");
}

Poly Poly::operator-() const {
  Poly out = *this;
  for (auto& [e, c] : out.terms_) c = -c;
  return out;
}

Poly& Poly::operator+=(const Poly& other) {
  require_same_shape(other);
  for (const auto& [e, c] : other.terms_) add_term(e, c);
  return *this;
}

Poly& Poly::operator-=(const Poly& other) {
  require_same_shape(other);
  for (const auto& [e, c] : other.terms_) add_term(e, -c);
  return *this;
}

Poly& Poly::operator*=(cplx s) {
  if (s == cplx(0.0)) {
    terms_.clear();
    return *this;
  }
  for (auto& [e, c] : terms_) c *= s;
  return *this;
}

Poly operator*(const Poly& a, const Poly& b) {
  a.require_same_shape(b);
  Poly out(a.r_, a.d_);
  for (const auto& [ea, ca] : a.terms_)
    for (const auto& [eb, cb] : b.terms_) out.add_term(ea + eb, ca * cb);
  return out;
}

// ---------------------------------------------------------------------------

PolyEvaluator::PolyEvaluator(const Poly& p) : nvars_(p.nvars()), max_degree_(p.nvars(), 0) {
  exps_.reserve(p.size() * nvars_);
  coefs_.reserve(p.size());
  for (const auto& [e, c] : p.terms()) {
    for (std::size_t v = 0; v < nvars_; ++v) {
      exps_.push_back(e[v]);
      max_degree_[v] = std::max(max_degree_[v], e[v]);
    }
    coefs_.push_back(c);
  }
}

cplx PolyEvaluator::operator()(std::span<const cplx> x) const {
  require_dim(x.size(), nvars_, "PolyEvaluator");
  if (coefs_.empty()) return 0.0;
  thread_local std::vector<cplx> powers;
  std::vector<std::size_t> offset(nvars_ + 1, 0);
  for (std::size_t v = 0; v < nvars_; ++v) offset[v + 1] = offset[v] + static_cast<std::size_t>(max_degree_[v]) + 1;
  powers.resize(offset[nvars_]);
  for (std::size_t v = 0; v < nvars_; ++v) {
    cplx* pw = powers.data() + offset[v];
    pw[0] = 1.0;
    for (int k = 1; k <= max_degree_[v]; ++k) pw[k] = pw[k - 1] * x[v];
  }
  cplx sum = 0.0;
  const int* e = exps_.data();
  for (const cplx& c : coefs_) {
    cplx t = c;
    for (std::size_t v = 0; v < nvars_; ++v, ++e)
      if (*e) t *= powers[offset[v] + static_cast<std::size_t>(*e)];
    sum += t;
  }
  return sum;
}

// ---------------------------------------------------------------------------

Poly differentiate(const Poly& p, const DiffOp& op) {
  require_dim(op.exponents.size(), p.nvars(), "differentiate");
  if (op.is_identity()) return p;
  Poly out(p.r(), p.d());
  for (const auto& [e, c] : p.terms()) {
    if (!op.exponents.divides(e)) continue;
    double factor = 1.0;
    MultiIndex reduced = e;
    for (std::size_t v = 0; v < p.nvars(); ++v) {
      const int a = op.exponents[v];
      if (!a) continue;
      factor *= falling(e[v], a);
      reduced.set(v, e[v] - a);
    }
    out.add_term(reduced, c * factor);
  }
  return out;
}

Poly shift_center(const Poly& p, std::span<const cplx> zeta) {
  require_dim(zeta.size(), p.d(), "shift_center");
  Poly current = p;
  for (std::size_t i = 0; i < p.d(); ++i) {
    const cplx delta = zeta[i];
    if (delta == cplx(0.0)) continue;
    const std::size_t v = p.r() + i;
    Poly next(p.r(), p.d());
    std::vector<cplx> dpow;
    for (const auto& [e, c] : current.terms()) {
      const int deg = e[v];
      if (deg == 0) {
        next.add_term(e, c);
        continue;
      }
      dpow.resize(static_cast<std::size_t>(deg) + 1);
      dpow[0] = 1.0;
      for (int k = 1; k <= deg; ++k) dpow[k] = dpow[k - 1] * delta;
      MultiIndex target = e;
      double b = 1.0;  // C(deg, k)
      for (int k = 0; k <= deg; ++k) {
        target.set(v, k);
        next.add_term(target, c * b * dpow[static_cast<std::size_t>(deg - k)]);
        b = b * static_cast<double>(deg - k) / static_cast<double>(k + 1);
      }
    }
    current = std::move(next);
  }
  return current;
}

CenteredPoly CenteredPoly::zero(std::size_t r, std::size_t d) {
  return CenteredPoly{Poly(r, d), std::vector<cplx>(d, 0.0)};
}

cplx CenteredPoly::eval(std::span<const cplx> w, std::span<const cplx> z) const {
  require_dim(z.size(), center.size(), "CenteredPoly::eval");
  std::vector<cplx> u(z.size());
  for (std::size_t i = 0; i < z.size(); ++i) u[i] = z[i] - center[i];
  return body.eval(w, u);
}

Poly CenteredPoly::to_absolute() const {
  std::vector<cplx> back(center.size());
  for (std::size_t i = 0; i < center.size(); ++i) back[i] = -center[i];
  return shift_center(body, back);
}

CenteredPoly CenteredPoly::recentered(std::span<const cplx> new_center) const {
  require_dim(new_center.size(), center.size(), "CenteredPoly::recentered");
  std::vector<cplx> delta(center.size());
  for (std::size_t i = 0; i < center.size(); ++i) delta[i] = new_center[i] - center[i];
  return CenteredPoly{shift_center(body, delta), std::vector<cplx>(new_center.begin(), new_center.end())};
}

CenteredPoly centered(const Poly& p, std::span<const cplx> zeta) {
  return CenteredPoly{shift_center(p, zeta), std::vector<cplx>(zeta.begin(), zeta.end())};
}

cplx gamma(const Poly& f, std::span<const cplx> w, std::span<const cplx> zeta, const MultiIndex& m) {
  require_dim(w.size(), f.r(), "gamma (w)");
  require_dim(zeta.size(), f.d(), "gamma (zeta)");
  require_dim(m.size(), f.d(), "gamma (m)");
  cplx sum = 0.0;
  for (const auto& [e, c] : f.terms()) {
    cplx t = c;
    bool skip = false;
    for (std::size_t i = 0; i < f.d() && !skip; ++i) {
      const int ei = e[f.r() + i];
      if (ei < m[i]) skip = true;
      else t *= binom_d(ei, m[i]) * ipow(zeta[i], ei - m[i]);
    }
    if (skip) continue;
    for (std::size_t j = 0; j < f.r(); ++j) t *= ipow(w[j], e[j]);
    sum += t;
  }
  return sum;
}

Poly coefficient_in_w(const Poly& centered_body, const MultiIndex& m) {
  require_dim(m.size(), centered_body.d(), "coefficient_in_w");
  const std::size_t r = centered_body.r();
  Poly out(r, 0);
  for (const auto& [e, c] : centered_body.terms())
    if (e.slice(r, centered_body.d()) == m) out.add_term(e.slice(0, r), c);
  return out;
}

CenteredPoly truncate(const CenteredPoly& p, std::uint64_t n, const Enumeration& enumeration) {
  require_dim(enumeration.dimension(), p.body.d(), "truncate");
  CenteredPoly out{Poly(p.body.r(), p.body.d()), p.center};
  const std::size_t r = p.body.r();
  for (const auto& [e, c] : p.body.terms())
    if (enumeration.rank(e.slice(r, p.body.d())) <= n) out.body.add_term(e, c);
  return out;
}

CenteredPoly partial_sum(const Poly& f, std::span<const cplx> zeta, std::uint64_t n,
                         const Enumeration& enumeration) {
  return truncate(centered(f, zeta), n, enumeration);
}

// ---------------------------------------------------------------------------

CoefficientStream::CoefficientStream(Enumeration enumeration, std::vector<cplx> center, std::size_t r)
    : enumeration_(std::move(enumeration)), center_(std::move(center)), r_(r) {
  require_dim(enumeration_.dimension(), center_.size(), "CoefficientStream");
}

std::optional<std::uint64_t> CoefficientStream::materialized_through() const {
  if (blocks_.empty()) return std::nullopt;
  return blocks_.back().last_index;
}

void CoefficientStream::append_block(StreamBlock block) {
  if (block.last_index < block.first_index) throw DomainError("stream block has last_index < first_index");
  if (const auto frozen = materialized_through(); frozen && block.first_index <= *frozen)
    throw DomainError("stream block starting at " + std::to_string(block.first_index) +
                      " would modify frozen coefficients (materialized through " + std::to_string(*frozen) + ")");
  for (const auto& [k, a] : block.coefficients) {
    if (k < block.first_index || k > block.last_index)
      throw DomainError("stream block coefficient index " + std::to_string(k) + " outside its range");
    if (a.r() != r_ || a.d() != 0) throw DimensionError("stream coefficients must be polynomials in w only");
  }
  blocks_.push_back(std::move(block));
}

std::map<std::uint64_t, Poly> CoefficientStream::coefficients_of(const Poly& centered_body) const {
  require_dim(centered_body.r(), r_, "coefficients_of (r)");
  require_dim(centered_body.d(), d(), "coefficients_of (d)");
  std::map<std::uint64_t, Poly> out;
  for (const auto& [e, c] : centered_body.terms()) {
    const std::uint64_t k = enumeration_.rank(e.slice(r_, d()));
    auto [it, inserted] = out.try_emplace(k, Poly(r_, 0));
    it->second.add_term(e.slice(0, r_), c);
  }
  for (auto it = out.begin(); it != out.end();) it = it->second.is_zero() ? out.erase(it) : std::next(it);
  return out;
}

namespace {

void accumulate_block(const StreamBlock& b, const Enumeration& enumeration, std::uint64_t n, Poly& body) {
  for (const auto& [k, a] : b.coefficients) {
    if (k > n) break;
    const MultiIndex zexp = enumeration.unrank(k);
    for (const auto& [we, c] : a.terms()) body.add_term(we.concat(zexp), c);
  }
}

}  // namespace

CenteredPoly CoefficientStream::current() const {
  CenteredPoly out{Poly(r_, d()), center_};
  for (const auto& b : blocks_) accumulate_block(b, enumeration_, b.last_index, out.body);
  return out;
}

CenteredPoly stream_partial_sum(const CoefficientStream& stream, std::uint64_t n) {
  CenteredPoly out{Poly(stream.r(), stream.d()), stream.center()};
  if (stream.empty()) return out;
  if (n > *stream.materialized_through())
    throw DomainError("partial sum index " + std::to_string(n) + " beyond materialized coefficients (through " +
                      std::to_string(*stream.materialized_through()) + ")");
  for (const auto& b : stream.blocks()) {
    if (b.first_index > n) break;
    accumulate_block(b, stream.enumeration(), n, out.body);
  }
  return out;
}

}  // namespace uts
