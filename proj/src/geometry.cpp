#include "uts/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "uts/error.hpp"

namespace uts {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

std::size_t pieces_for(double length, double h) {
  if (!(h > 0.0)) throw DomainError("sampling density h must be positive");
  const double n = std::ceil(length / h - 1e-9);
  if (n > static_cast<double>(kMaxGridPoints)) throw DomainError("sampling density too fine (more than 1e7 points)");
  return std::max<std::size_t>(1, static_cast<std::size_t>(n));
}

double segment_distance(cplx z, cplx a, cplx b) {
  const cplx ab = b - a;
  const double len2 = std::norm(ab);
  if (len2 == 0.0) return std::abs(z - a);
  const double t = std::clamp(((z - a) * std::conj(ab)).real() / len2, 0.0, 1.0);
  return std::abs(z - (a + t * ab));
}

// Angle of z relative to `from` in [0, 2 pi).
double angle_from(double theta, double from) {
  double a = std::fmod(theta - from, kTwoPi);
  if (a < 0) a += kTwoPi;
  return a;
}

void sample_closed_circle(cplx c, double r, double h, double phase, std::vector<cplx>& out) {
  const std::size_t n = pieces_for(kTwoPi * r, h);
  for (std::size_t k = 0; k < n; ++k)
    out.push_back(c + std::polar(r, kTwoPi * (static_cast<double>(k) + phase) / static_cast<double>(n)));
}

void sample_arc(cplx c, double r, double t0, double t1, double h, std::vector<cplx>& out) {
  const std::size_t n = pieces_for(r * (t1 - t0), h);
  for (std::size_t k = 0; k <= n; ++k) out.push_back(c + std::polar(r, t0 + (t1 - t0) * static_cast<double>(k) / static_cast<double>(n)));
}

void sample_segment(cplx a, cplx b, double h, bool include_end, std::vector<cplx>& out) {
  const std::size_t n = pieces_for(std::abs(b - a), h);
  const std::size_t last = include_end ? n : n - 1;
  for (std::size_t k = 0; k <= last; ++k) out.push_back(a + (b - a) * (static_cast<double>(k) / static_cast<double>(n)));
}

void sample_rect_boundary(const Rect& r, double h, double phase, std::vector<cplx>& out) {
  const cplx c[4] = {r.lo, cplx(r.hi.real(), r.lo.imag()), r.hi, cplx(r.lo.real(), r.hi.imag())};
  const double perimeter = 2.0 * ((r.hi.real() - r.lo.real()) + (r.hi.imag() - r.lo.imag()));
  if (phase == 0.0) {
    for (int e = 0; e < 4; ++e) sample_segment(c[e], c[(e + 1) % 4], h, false, out);
    return;
  }
  // Uniform arc-length parametrization shifted by phase.
  const std::size_t n = pieces_for(perimeter, h);
  const double step = perimeter / static_cast<double>(n);
  for (std::size_t k = 0; k < n; ++k) {
    double s = (static_cast<double>(k) + phase) * step;
    for (int e = 0; e < 4; ++e) {
      const double len = std::abs(c[(e + 1) % 4] - c[e]);
      if (s <= len || e == 3) {
        out.push_back(c[e] + (c[(e + 1) % 4] - c[e]) * (len > 0 ? std::min(s / len, 1.0) : 0.0));
        break;
      }
      s -= len;
    }
  }
}

bool contains_base(const std::variant<Disk, Rect>& base, cplx z, double tol) {
  return std::visit(Overloaded{[&](const Disk& d) { return std::abs(z - d.center) <= d.radius + tol; },
                               [&](const Rect& r) {
                                 return z.real() >= r.lo.real() - tol && z.real() <= r.hi.real() + tol &&
                                        z.imag() >= r.lo.imag() - tol && z.imag() <= r.hi.imag() + tol;
                               }},
                    base);
}

void check_positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v)) throw DomainError(std::string(what) + " must be positive and finite");
}

}  // namespace

// ---------------------------------------------------------------------------

bool operator==(const Union& a, const Union& b) { return a.parts == b.parts; }

PlanarCompact PlanarCompact::disk(cplx center, double radius) {
  check_positive(radius, "disk radius");
  return PlanarCompact(Disk{center, radius});
}

PlanarCompact PlanarCompact::rect(cplx lo, cplx hi) {
  if (!(hi.real() > lo.real()) || !(hi.imag() > lo.imag())) throw DomainError("rectangle needs lo < hi in both axes");
  return PlanarCompact(Rect{lo, hi});
}

PlanarCompact PlanarCompact::segment(cplx a, cplx b) { return PlanarCompact(Segment{a, b}); }

PlanarCompact PlanarCompact::arc(cplx center, double radius, double theta0, double theta1) {
  check_positive(radius, "arc radius");
  if (!(theta1 >= theta0) || theta1 - theta0 >= kTwoPi) throw DomainError("arc needs 0 <= theta1 - theta0 < 2 pi");
  return PlanarCompact(Arc{center, radius, theta0, theta1});
}

PlanarCompact PlanarCompact::slit_annulus(cplx center, double inner, double outer, double half_angle,
                                          double direction) {
  check_positive(inner, "slit annulus inner radius");
  if (!(outer >= inner)) throw DomainError("slit annulus needs outer >= inner");
  if (!(half_angle > 0.0) || half_angle >= kPi) throw DomainError("slit half-angle must lie in (0, pi)");
  return PlanarCompact(SlitAnnulus{center, inner, outer, half_angle, direction});
}

PlanarCompact PlanarCompact::clipped(std::variant<Disk, Rect> base, double radius) {
  check_positive(radius, "clip radius");
  PlanarCompact k(Clipped{base, radius});
  if (fill_samples(k, radius / 64.0).empty()) throw DomainError("clipped set is empty");
  return k;
}

PlanarCompact PlanarCompact::make_union(std::vector<PlanarCompact> parts) {
  if (parts.empty()) throw DomainError("union needs at least one part");
  if (parts.size() == 1) return parts.front();
  double scale = 0.0;
  for (const auto& p : parts) {
    const auto [lo, hi] = bounding_box(p);
    scale = std::max(scale, std::abs(hi - lo));
  }
  const double h = std::max(scale, 1e-3) / 256.0;
  for (std::size_t a = 0; a < parts.size(); ++a) {
    if (!parts[a].complement_connected()) throw DomainError("union part without connected complement");
    for (std::size_t b = a + 1; b < parts.size(); ++b)
      if (sampled_distance(parts[a], parts[b], h) <= 0.0)
        throw DomainError("union parts " + std::to_string(a) + " and " + std::to_string(b) + " are not disjoint");
  }
  PlanarCompact u(Union{std::move(parts)});
  if (escape_failures(u, complement_probes(u, 24)) != 0) throw DomainError("union fails the complement escape test");
  return u;
}

std::string PlanarCompact::kind() const {
  return std::visit(Overloaded{[](const Disk&) { return std::string("disk"); },
                               [](const Rect&) { return std::string("rect"); },
                               [](const Segment&) { return std::string("segment"); },
                               [](const Arc&) { return std::string("arc"); },
                               [](const SlitAnnulus&) { return std::string("slit-annulus"); },
                               [](const Clipped&) { return std::string("clipped"); },
                               [](const Union&) { return std::string("union"); }},
                    shape_);
}

bool contains(const PlanarCompact& k, cplx z, double tol) {
  return std::visit(
      Overloaded{
          [&](const Disk& d) { return contains_base(d, z, tol); },
          [&](const Rect& r) { return contains_base(r, z, tol); },
          [&](const Segment& s) { return segment_distance(z, s.a, s.b) <= tol; },
          [&](const Arc& a) {
            const double rho = std::abs(z - a.center);
            if (std::abs(rho - a.radius) > tol) return false;
            const double t = angle_from(std::arg(z - a.center), a.theta0);
            const double slack = tol / a.radius;
            return t <= a.theta1 - a.theta0 + slack || t >= kTwoPi - slack;
          },
          [&](const SlitAnnulus& s) {
            const double rho = std::abs(z - s.center);
            if (rho < s.inner - tol || rho > s.outer + tol) return false;
            const double off = std::abs(std::remainder(std::arg(z - s.center) - s.direction, kTwoPi));
            return off >= s.half_angle - tol / std::max(rho, 1e-300);
          },
          [&](const Clipped& c) { return contains_base(c.base, z, tol) && std::abs(z) <= c.radius + tol; },
          [&](const Union& u) {
            return std::any_of(u.parts.begin(), u.parts.end(), [&](const PlanarCompact& p) { return contains(p, z, tol); });
          }},
      k.shape());
}

std::vector<cplx> boundary_samples(const PlanarCompact& k, double h, double phase) {
  if (!(h > 0.0)) throw DomainError("sampling density h must be positive");
  std::vector<cplx> out;
  std::visit(Overloaded{
                 [&](const Disk& d) { sample_closed_circle(d.center, d.radius, h, phase, out); },
                 [&](const Rect& r) { sample_rect_boundary(r, h, phase, out); },
                 [&](const Segment& s) {
                   if (s.a == s.b) out.push_back(s.a);
                   else sample_segment(s.a, s.b, h, true, out);
                 },
                 [&](const Arc& a) { sample_arc(a.center, a.radius, a.theta0, a.theta1, h, out); },
                 [&](const SlitAnnulus& s) {
                   const double t0 = s.direction + s.half_angle;
                   const double t1 = s.direction + kTwoPi - s.half_angle;
                   sample_arc(s.center, s.outer, t0, t1, h, out);
                   if (s.outer > s.inner) {
                     sample_arc(s.center, s.inner, t0, t1, h, out);
                     for (double t : {t0, t1}) {
                       const cplx dir = std::polar(1.0, t);
                       const cplx a = s.center + s.inner * dir;
                       const cplx b = s.center + s.outer * dir;
                       const std::size_t n = pieces_for(s.outer - s.inner, h);
                       for (std::size_t q = 1; q < n; ++q)
                         out.push_back(a + (b - a) * (static_cast<double>(q) / static_cast<double>(n)));
                     }
                   }
                 },
                 [&](const Clipped& c) {
                   std::vector<cplx> base;
                   std::visit(Overloaded{[&](const Disk& d) { sample_closed_circle(d.center, d.radius, h, phase, base); },
                                         [&](const Rect& r) { sample_rect_boundary(r, h, phase, base); }},
                              c.base);
                   for (cplx z : base)
                     if (std::abs(z) <= c.radius * (1 + 1e-12)) out.push_back(z);
                   std::vector<cplx> circle;
                   sample_closed_circle(0.0, c.radius, h, phase, circle);
                   for (cplx z : circle)
                     if (contains_base(c.base, z, 1e-12)) out.push_back(z);
                 },
                 [&](const Union& u) {
                   for (const auto& p : u.parts) {
                     auto part = boundary_samples(p, h, phase);
                     out.insert(out.end(), part.begin(), part.end());
                   }
                 }},
             k.shape());
  if (out.size() > kMaxGridPoints) throw DomainError("sampling density too fine (more than 1e7 points)");
  return out;
}

double boundary_length(const PlanarCompact& k) {
  return std::visit(
      Overloaded{[](const Disk& d) { return kTwoPi * d.radius; },
                 [](const Rect& r) { return 2.0 * ((r.hi.real() - r.lo.real()) + (r.hi.imag() - r.lo.imag())); },
                 [](const Segment& s) { return std::abs(s.b - s.a); },
                 [](const Arc& a) { return a.radius * (a.theta1 - a.theta0); },
                 [](const SlitAnnulus& s) {
                   const double sweep = kTwoPi - 2.0 * s.half_angle;
                   if (s.outer == s.inner) return sweep * s.outer;
                   return sweep * (s.inner + s.outer) + 2.0 * (s.outer - s.inner);
                 },
                 [&](const Clipped&) {
                   const auto [lo, hi] = bounding_box(k);
                   const double h = std::max(std::abs(hi - lo), 1e-6) / 4096.0;
                   return static_cast<double>(boundary_samples(k, h).size()) * h;
                 },
                 [](const Union& u) {
                   double s = 0.0;
                   for (const auto& p : u.parts) s += boundary_length(p);
                   return s;
                 }},
      k.shape());
}

std::vector<cplx> boundary_samples_count(const PlanarCompact& k, std::size_t n, double phase) {
  if (n == 0) throw DomainError("sample count must be positive");
  const double len = boundary_length(k);
  if (len == 0.0) return boundary_samples(k, 1.0, phase);
  return boundary_samples(k, len / static_cast<double>(n), phase);
}

std::pair<cplx, cplx> bounding_box(const PlanarCompact& k) {
  return std::visit(
      Overloaded{[](const Disk& d) { return std::pair{d.center - cplx(d.radius, d.radius), d.center + cplx(d.radius, d.radius)}; },
                 [](const Rect& r) { return std::pair{r.lo, r.hi}; },
                 [](const Segment& s) {
                   return std::pair{cplx(std::min(s.a.real(), s.b.real()), std::min(s.a.imag(), s.b.imag())),
                                    cplx(std::max(s.a.real(), s.b.real()), std::max(s.a.imag(), s.b.imag()))};
                 },
                 [](const Arc& a) { return std::pair{a.center - cplx(a.radius, a.radius), a.center + cplx(a.radius, a.radius)}; },
                 [](const SlitAnnulus& s) { return std::pair{s.center - cplx(s.outer, s.outer), s.center + cplx(s.outer, s.outer)}; },
                 [](const Clipped& c) {
                   auto [lo, hi] = std::visit(
                       Overloaded{[](const Disk& d) { return std::pair{d.center - cplx(d.radius, d.radius), d.center + cplx(d.radius, d.radius)}; },
                                  [](const Rect& r) { return std::pair{r.lo, r.hi}; }},
                       c.base);
                   return std::pair{cplx(std::max(lo.real(), -c.radius), std::max(lo.imag(), -c.radius)),
                                    cplx(std::min(hi.real(), c.radius), std::min(hi.imag(), c.radius))};
                 },
                 [](const Union& u) {
                   auto [lo, hi] = bounding_box(u.parts.front());
                   for (const auto& p : u.parts) {
                     const auto [l, h] = bounding_box(p);
                     lo = cplx(std::min(lo.real(), l.real()), std::min(lo.imag(), l.imag()));
                     hi = cplx(std::max(hi.real(), h.real()), std::max(hi.imag(), h.imag()));
                   }
                   return std::pair{lo, hi};
                 }},
      k.shape());
}

std::vector<cplx> fill_samples(const PlanarCompact& k, double h) {
  if (!(h > 0.0)) throw DomainError("sampling density h must be positive");
  std::vector<cplx> out = boundary_samples(k, h);
  const bool thin = std::holds_alternative<Segment>(k.shape()) || std::holds_alternative<Arc>(k.shape());
  if (thin) return out;
  const auto [lo, hi] = bounding_box(k);
  const auto nx = static_cast<std::size_t>(std::floor((hi.real() - lo.real()) / h)) + 1;
  const auto ny = static_cast<std::size_t>(std::floor((hi.imag() - lo.imag()) / h)) + 1;
  if (static_cast<double>(nx) * static_cast<double>(ny) > static_cast<double>(kMaxGridPoints))
    throw DomainError("fill sampling too fine (more than 1e7 points)");
  for (std::size_t a = 0; a < nx; ++a)
    for (std::size_t b = 0; b < ny; ++b) {
      const cplx z = lo + cplx(static_cast<double>(a) * h, static_cast<double>(b) * h);
      if (contains(k, z, 0.0)) out.push_back(z);
    }
  return out;
}

std::optional<Disk> incircle(const PlanarCompact& k) {
  return std::visit(
      Overloaded{[](const Disk& d) -> std::optional<Disk> { return d; },
                 [](const Rect& r) -> std::optional<Disk> {
                   const double rad = 0.5 * std::min(r.hi.real() - r.lo.real(), r.hi.imag() - r.lo.imag());
                   return Disk{0.5 * (r.lo + r.hi), rad};
                 },
                 [](const Segment&) -> std::optional<Disk> { return std::nullopt; },
                 [](const Arc&) -> std::optional<Disk> { return std::nullopt; },
                 [](const SlitAnnulus& s) -> std::optional<Disk> {
                   if (s.outer <= s.inner) return std::nullopt;
                   const double mid = 0.5 * (s.inner + s.outer);
                   return Disk{s.center + std::polar(mid, s.direction + kPi), 0.5 * (s.outer - s.inner)};
                 },
                 [&](const Clipped&) -> std::optional<Disk> {
                   // Numerical incircle: lattice point farthest from the boundary.
                   const auto [lo, hi] = bounding_box(k);
                   const double h = std::max(std::abs(hi - lo), 1e-9) / 64.0;
                   const auto bd = boundary_samples(k, h / 4.0);
                   std::optional<Disk> best;
                   for (cplx z : fill_samples(k, h)) {
                     double dist = std::numeric_limits<double>::infinity();
                     for (cplx b : bd) dist = std::min(dist, std::abs(z - b));
                     if (!best || dist > best->radius) best = Disk{z, dist};
                   }
                   if (best && best->radius <= h) return std::nullopt;
                   return best;
                 },
                 [](const Union& u) -> std::optional<Disk> {
                   std::optional<Disk> best;
                   for (const auto& p : u.parts)
                     if (auto c = incircle(p); c && (!best || c->radius > best->radius)) best = c;
                   return best;
                 }},
      k.shape());
}

double sampled_distance(const PlanarCompact& a, const PlanarCompact& b, double h) {
  const auto fa = fill_samples(a, h);
  const auto fb = fill_samples(b, h);
  for (cplx z : fa)
    if (contains(b, z, 0.0)) return 0.0;
  for (cplx z : fb)
    if (contains(a, z, 0.0)) return 0.0;
  const auto ba = boundary_samples(a, h);
  const auto bb = boundary_samples(b, h);
  double best = std::numeric_limits<double>::infinity();
  for (cplx x : ba)
    for (cplx y : bb) best = std::min(best, std::abs(x - y));
  return best;
}

bool sampled_subset(const PlanarCompact& inner, const PlanarCompact& outer, double h, double tol) {
  for (cplx z : fill_samples(inner, h))
    if (!contains(outer, z, tol)) return false;
  return true;
}

std::vector<cplx> complement_probes(const PlanarCompact& k, std::size_t per_side) {
  auto [lo, hi] = bounding_box(k);
  const cplx pad = 0.25 * (hi - lo) + cplx(1e-3, 1e-3);
  lo -= pad;
  hi += pad;
  std::vector<cplx> out;
  for (std::size_t a = 0; a < per_side; ++a)
    for (std::size_t b = 0; b < per_side; ++b) {
      const double ta = (static_cast<double>(a) + 0.5) / static_cast<double>(per_side);
      const double tb = (static_cast<double>(b) + 0.5) / static_cast<double>(per_side);
      const cplx z(lo.real() + ta * (hi.real() - lo.real()), lo.imag() + tb * (hi.imag() - lo.imag()));
      if (!contains(k, z, 0.0)) out.push_back(z);
    }
  return out;
}

namespace {

bool path_clear(const PlanarCompact& k, std::span<const cplx> vertices, double step) {
  for (std::size_t s = 0; s + 1 < vertices.size(); ++s) {
    const cplx a = vertices[s];
    const cplx b = vertices[s + 1];
    const auto n = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(std::abs(b - a) / step)));
    for (std::size_t q = 0; q <= n; ++q)
      if (contains(k, a + (b - a) * (static_cast<double>(q) / static_cast<double>(n)), 0.0)) return false;
  }
  return true;
}

void collect_slits(const PlanarCompact& k, std::vector<SlitAnnulus>& out) {
  if (const auto* s = std::get_if<SlitAnnulus>(&k.shape())) out.push_back(*s);
  if (const auto* u = std::get_if<Union>(&k.shape()))
    for (const auto& p : u->parts) collect_slits(p, out);
}

}  // namespace

std::size_t escape_failures(const PlanarCompact& k, std::span<const cplx> probes) {
  const auto [lo, hi] = bounding_box(k);
  const double diam = std::max(std::abs(hi - lo), 1e-6);
  const cplx mid = 0.5 * (lo + hi);
  const double step = diam / 2000.0;
  std::vector<SlitAnnulus> slits;
  collect_slits(k, slits);
  std::size_t failures = 0;
  for (cplx z : probes) {
    if (contains(k, z, 0.0)) continue;
    const double far = 2.0 * (diam + std::abs(z - mid)) + 1.0;
    bool escaped = false;
    for (int a = 0; a < 32 && !escaped; ++a) {
      const cplx v[2] = {z, z + std::polar(far, kTwoPi * a / 32.0)};
      escaped = path_clear(k, v, step);
    }
    for (const auto& s : slits) {
      if (escaped) break;
      const cplx v[3] = {z, s.center, s.center + std::polar(far, s.direction)};
      escaped = path_clear(k, v, step);
    }
    if (!escaped) ++failures;
  }
  return failures;
}

ProductCompact ProductCompact::concat(const ProductCompact& tail) const {
  ProductCompact out = *this;
  out.factors.insert(out.factors.end(), tail.factors.begin(), tail.factors.end());
  return out;
}

bool contains(const ProductCompact& k, std::span<const cplx> z, double tol) {
  if (z.size() != k.dim()) throw DimensionError("product compact containment: dimension mismatch");
  for (std::size_t i = 0; i < k.dim(); ++i)
    if (!contains(k.factors[i], z[i], tol)) return false;
  return true;
}

bool sampled_subset(const ProductCompact& inner, const ProductCompact& outer, double h, double tol) {
  if (inner.dim() != outer.dim()) throw DimensionError("sampled_subset: dimension mismatch");
  for (std::size_t i = 0; i < inner.dim(); ++i)
    if (!sampled_subset(inner.factors[i], outer.factors[i], h, tol)) return false;
  return true;
}

// ---------------------------------------------------------------------------

bool in_domain(const Domain& dom, cplx z) {
  return std::visit(Overloaded{[&](const OpenDisk& d) { return std::abs(z - d.center) < d.radius; },
                               [&](const OpenRect& r) {
                                 return z.real() > r.lo.real() && z.real() < r.hi.real() && z.imag() > r.lo.imag() &&
                                        z.imag() < r.hi.imag();
                               }},
                    dom);
}

double distance_to_closure(const Domain& dom, cplx z) {
  return std::visit(Overloaded{[&](const OpenDisk& d) { return std::max(0.0, std::abs(z - d.center) - d.radius); },
                               [&](const OpenRect& r) {
                                 const double dx = std::max({r.lo.real() - z.real(), 0.0, z.real() - r.hi.real()});
                                 const double dy = std::max({r.lo.imag() - z.imag(), 0.0, z.imag() - r.hi.imag()});
                                 return std::hypot(dx, dy);
                               }},
                    dom);
}

cplx domain_center(const Domain& dom) {
  return std::visit(Overloaded{[](const OpenDisk& d) { return d.center; },
                               [](const OpenRect& r) { return 0.5 * (r.lo + r.hi); }},
                    dom);
}

namespace {

double domain_radius(const Domain& dom) {
  return std::visit(Overloaded{[](const OpenDisk& d) { return d.radius; },
                               [](const OpenRect& r) { return 0.5 * std::abs(r.hi - r.lo); }},
                    dom);
}

std::variant<Disk, Rect> closed_base(const Domain& dom) {
  return std::visit(Overloaded{[](const OpenDisk& d) -> std::variant<Disk, Rect> { return Disk{d.center, d.radius}; },
                               [](const OpenRect& r) -> std::variant<Disk, Rect> { return Rect{r.lo, r.hi}; }},
                    dom);
}

double max_modulus(const std::variant<Disk, Rect>& base) {
  return std::visit(Overloaded{[](const Disk& d) { return std::abs(d.center) + d.radius; },
                               [](const Rect& r) {
                                 double m = 0.0;
                                 for (cplx c : {r.lo, r.hi, cplx(r.lo.real(), r.hi.imag()), cplx(r.hi.real(), r.lo.imag())})
                                   m = std::max(m, std::abs(c));
                                 return m;
                               }},
                    base);
}

}  // namespace

PlanarCompact exhaustion_factor(const Domain& dom, int p, bool closure_variant) {
  if (p < 1) throw DomainError("exhaustion index must be >= 1");
  if (!closure_variant) {
    const double shrink = 1.0 - std::ldexp(1.0, -p);
    return std::visit(Overloaded{[&](const OpenDisk& d) { return PlanarCompact::disk(d.center, d.radius * shrink); },
                                 [&](const OpenRect& r) {
                                   const cplx c = 0.5 * (r.lo + r.hi);
                                   const cplx half = 0.5 * (r.hi - r.lo) * shrink;
                                   return PlanarCompact::rect(c - half, c + half);
                                 }},
                      dom);
  }
  const auto base = closed_base(dom);
  if (max_modulus(base) <= static_cast<double>(p)) {
    return std::visit(Overloaded{[](const Disk& d) { return PlanarCompact::disk(d.center, d.radius); },
                                 [](const Rect& r) { return PlanarCompact::rect(r.lo, r.hi); }},
                      base);
  }
  if (distance_to_closure(dom, 0.0) > static_cast<double>(p))
    throw DomainError("closure truncation {|z| <= " + std::to_string(p) + "} misses the domain");
  return PlanarCompact::clipped(base, static_cast<double>(p));
}

ProductCompact exhaustion_M(const DomainProduct& omega, int p, bool closure_variant) {
  ProductCompact out;
  for (const auto& f : omega.factors) out.factors.push_back(exhaustion_factor(f, p, closure_variant));
  return out;
}

PlanarCompact outer_compacts(const Domain& dom, int j, bool closure_variant) {
  if (j < 1) throw DomainError("outer compact index must be >= 1");
  const double big_r = domain_radius(dom);
  const double jj = static_cast<double>(j);
  const double inner = closure_variant ? big_r * (1.0 + 1.0 / jj) : big_r;
  const double outer = std::max(jj, 1.0 + 1.0 / jj) * big_r;
  return PlanarCompact::slit_annulus(domain_center(dom), inner, outer, 1.0 / jj, kPi);
}

TmEntry enumerate_Tm(const DomainProduct& omega, int m, bool closure_variant) {
  if (m < 1) throw DomainError("T_m index must be >= 1");
  const std::size_t d = omega.dim();
  if (d == 0) throw DimensionError("T_m needs d >= 1");
  const auto q = static_cast<std::uint64_t>(m - 1);
  TmEntry e;
  e.i0 = static_cast<std::size_t>(q % d);
  const MultiIndex params = Enumeration::diagonal_cantor(d).unrank(q / d);
  e.j = params[0] + 1;
  for (std::size_t i = 0; i < d; ++i) {
    if (i == e.i0) {
      e.compact.factors.push_back(outer_compacts(omega.factors[i], e.j, closure_variant));
    } else {
      const int radius = params[e.radii.size() + 1] + 1;
      e.radii.push_back(radius);
      e.compact.factors.push_back(PlanarCompact::disk(0.0, radius));
    }
  }
  return e;
}

std::optional<int> find_Tm_containing(const DomainProduct& omega, const ProductCompact& k, bool closure_variant,
                                      double h, int max_m) {
  if (k.dim() != omega.dim()) throw DimensionError("find_Tm_containing: dimension mismatch");
  std::vector<std::vector<cplx>> fills;
  for (const auto& f : k.factors) fills.push_back(fill_samples(f, h));
  for (int m = 1; m <= max_m; ++m) {
    const TmEntry t = enumerate_Tm(omega, m, closure_variant);
    bool inside = true;
    for (std::size_t i = 0; i < k.dim() && inside; ++i)
      for (cplx z : fills[i])
        if (!contains(t.compact.factors[i], z, 1e-12)) {
          inside = false;
          break;
        }
    if (inside) return m;
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------

std::size_t SampleGrid::size() const {
  std::size_t total = 0;
  for (const auto& b : blocks_) {
    std::size_t n = b.empty() ? 0 : 1;
    for (const auto& axis : b) n *= axis.size();
    total += n;
  }
  return total;
}

void SampleGrid::add_block(std::vector<std::vector<cplx>> axes) {
  if (axes.size() != dim_) throw DimensionError("sample grid block has wrong dimension");
  double n = 1.0;
  for (const auto& a : axes) n *= static_cast<double>(a.size());
  if (n + static_cast<double>(size()) > static_cast<double>(kMaxGridPoints))
    throw DomainError("sample grid exceeds 1e7 points");
  blocks_.push_back(std::move(axes));
}

void SampleGrid::point(std::size_t idx, std::span<cplx> out) const {
  if (out.size() != dim_) throw DimensionError("sample grid point buffer has wrong dimension");
  for (const auto& b : blocks_) {
    std::size_t n = 1;
    for (const auto& axis : b) n *= axis.size();
    if (idx < n) {
      for (std::size_t a = dim_; a-- > 0;) {
        out[a] = b[a][idx % b[a].size()];
        idx /= b[a].size();
      }
      return;
    }
    idx -= n;
  }
  throw DomainError("sample grid index out of range");
}

std::vector<cplx> SampleGrid::point(std::size_t idx) const {
  std::vector<cplx> out(dim_);
  point(idx, out);
  return out;
}

SampleGrid SampleGrid::product(const SampleGrid& tail) const {
  SampleGrid out(dim_ + tail.dim_);
  for (const auto& a : blocks_)
    for (const auto& b : tail.blocks_) {
      auto axes = a;
      axes.insert(axes.end(), b.begin(), b.end());
      out.add_block(std::move(axes));
    }
  if (dim_ == 0) out.blocks_ = tail.blocks_;
  if (tail.dim_ == 0) out.blocks_ = blocks_;
  out.provenance = provenance + (provenance.empty() || tail.provenance.empty() ? "" : " x ") + tail.provenance;
  out.density = std::max(density, tail.density);
  return out;
}

SampleGrid SampleGrid::merged(const SampleGrid& other) const {
  if (other.dim_ != dim_) throw DimensionError("merging sample grids of different dimensions");
  SampleGrid out = *this;
  for (const auto& b : other.blocks_) out.add_block(b);
  out.provenance = provenance + " + " + other.provenance;
  return out;
}

SampleGrid sample(const PlanarCompact& k, double h) {
  SampleGrid g(1);
  g.add_block({boundary_samples(k, h)});
  g.provenance = k.kind() + " boundary";
  g.density = h;
  return g;
}

SampleGrid sample(const ProductCompact& k, double h) {
  SampleGrid g(k.dim());
  std::vector<std::vector<cplx>> axes;
  for (const auto& f : k.factors) axes.push_back(boundary_samples(f, h));
  if (k.dim() > 0) g.add_block(std::move(axes));
  g.provenance = "distinguished boundary";
  g.density = h;
  return g;
}

SampleGrid sample_count(const ProductCompact& k, std::size_t n_per_factor, double phase) {
  SampleGrid g(k.dim());
  std::vector<std::vector<cplx>> axes;
  double h = 0.0;
  for (const auto& f : k.factors) {
    axes.push_back(boundary_samples_count(f, n_per_factor, phase));
    h = std::max(h, boundary_length(f) / static_cast<double>(n_per_factor));
  }
  if (k.dim() > 0) g.add_block(std::move(axes));
  g.provenance = "distinguished boundary (" + std::to_string(n_per_factor) + " per factor)";
  g.density = h;
  return g;
}

double sup_norm(const Poly& p, const SampleGrid& grid) {
  if (grid.dim() != p.nvars()) throw DimensionError("sup_norm: grid dimension does not match polynomial");
  if (grid.empty()) throw DomainError("sup_norm over an empty grid");
  const PolyEvaluator ev(p);
  std::vector<cplx> x(grid.dim());
  double best = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    grid.point(i, x);
    best = std::max(best, std::abs(ev(x)));
  }
  return best;
}

}  // namespace uts
