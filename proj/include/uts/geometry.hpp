#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "uts/poly.hpp"

namespace uts {

struct Disk {
  cplx center;
  double radius;

  friend bool operator==(const Disk&, const Disk&) = default;
};

/// Axis-aligned closed rectangle with corners lo (min re, min im) and hi.
struct Rect {
  cplx lo;
  cplx hi;

  friend bool operator==(const Rect&, const Rect&) = default;
};

struct Segment {
  cplx a;
  cplx b;

  friend bool operator==(const Segment&, const Segment&) = default;
};

/// Closed arc of the circle |z - center| = radius over [theta0, theta1].
struct Arc {
  cplx center;
  double radius;
  double theta0;
  double theta1;

  friend bool operator==(const Arc&, const Arc&) = default;
};

/// {inner <= |z - center| <= outer} with the open wedge
/// |arg(z - center) - direction| < half_angle removed. The wedge connects
/// the bounded complementary component to infinity.
struct SlitAnnulus {
  cplx center;
  double inner;
  double outer;
  double half_angle;
  double direction;

  friend bool operator==(const SlitAnnulus&, const SlitAnnulus&) = default;
};

/// A closed disk or rectangle intersected with {|z| <= radius}.
struct Clipped {
  std::variant<Disk, Rect> base;
  double radius;

  friend bool operator==(const Clipped&, const Clipped&) = default;
};

class PlanarCompact;

struct Union {
  std::vector<PlanarCompact> parts;

  friend bool operator==(const Union&, const Union&);
};

/// Nonempty compact subset of the plane. Every catalog primitive has connected
/// complement; unions only come from `make_union`, which checks separation.
class PlanarCompact {
 public:
  using Shape = std::variant<Disk, Rect, Segment, Arc, SlitAnnulus, Clipped, Union>;

  static PlanarCompact disk(cplx center, double radius);
  static PlanarCompact rect(cplx lo, cplx hi);
  static PlanarCompact segment(cplx a, cplx b);
  static PlanarCompact arc(cplx center, double radius, double theta0, double theta1);
  static PlanarCompact slit_annulus(cplx center, double inner, double outer, double half_angle, double direction);
  static PlanarCompact clipped(std::variant<Disk, Rect> base, double radius);
  /// Pairwise-disjoint union; throws DomainError when parts touch or the
  /// complement escape test fails.
  static PlanarCompact make_union(std::vector<PlanarCompact> parts);

  const Shape& shape() const { return shape_; }
  bool complement_connected() const { return complement_connected_; }
  std::string kind() const;

  friend bool operator==(const PlanarCompact&, const PlanarCompact&) = default;

 private:
  explicit PlanarCompact(Shape s) : shape_(std::move(s)) {}
  Shape shape_;
  bool complement_connected_ = true;
};

bool contains(const PlanarCompact& k, cplx z, double tol = 1e-12);
/// Points on the boundary curve(s) at arc-length spacing <= h; sets without
/// interior (segments, arcs) are sampled entirely.
std::vector<cplx> boundary_samples(const PlanarCompact& k, double h, double phase = 0.0);
/// About n boundary points in total.
std::vector<cplx> boundary_samples_count(const PlanarCompact& k, std::size_t n, double phase = 0.0);
/// Lattice points of spacing h inside k together with its boundary samples.
std::vector<cplx> fill_samples(const PlanarCompact& k, double h);
double boundary_length(const PlanarCompact& k);
/// Bounding box as (lo, hi).
std::pair<cplx, cplx> bounding_box(const PlanarCompact& k);
/// Largest inscribed test circle used for interior quadrature, if k has interior.
std::optional<Disk> incircle(const PlanarCompact& k);
/// Sampled distance; 0 when a fill sample of one set lies in the other.
double sampled_distance(const PlanarCompact& a, const PlanarCompact& b, double h);
/// Sampled inclusion: every fill sample of `inner` lies in `outer`.
bool sampled_subset(const PlanarCompact& inner, const PlanarCompact& outer, double h, double tol = 1e-9);
/// Path-escape certificate: from every probe point outside k, some polygonal
/// path to a far bounding box avoids k. Returns the number of failed probes.
std::size_t escape_failures(const PlanarCompact& k, std::span<const cplx> probes);
/// Probe points in the complement near k (grid over an enlarged bounding box).
std::vector<cplx> complement_probes(const PlanarCompact& k, std::size_t per_side);

struct ProductCompact {
  std::vector<PlanarCompact> factors;

  std::size_t dim() const { return factors.size(); }
  ProductCompact concat(const ProductCompact& tail) const;

  friend bool operator==(const ProductCompact&, const ProductCompact&) = default;
};

bool contains(const ProductCompact& k, std::span<const cplx> z, double tol = 1e-12);
bool sampled_subset(const ProductCompact& inner, const ProductCompact& outer, double h, double tol = 1e-9);

/// Open planar simply connected domain from the catalog.
struct OpenDisk {
  cplx center;
  double radius;
};
struct OpenRect {
  cplx lo;
  cplx hi;
};
using Domain = std::variant<OpenDisk, OpenRect>;

struct DomainProduct {
  std::vector<Domain> factors;
  std::size_t dim() const { return factors.size(); }
};

bool in_domain(const Domain& dom, cplx z);
/// Distance from z to the closure of the domain (0 inside).
double distance_to_closure(const Domain& dom, cplx z);
cplx domain_center(const Domain& dom);

/// Plain exhaustion: radius (1 - 2^-p) * R about the domain center (rectangles
/// shrink both half-widths by the same factor). Closure variant:
/// closure(domain) intersected with {|z| <= p}.
PlanarCompact exhaustion_factor(const Domain& dom, int p, bool closure_variant);
ProductCompact exhaustion_M(const DomainProduct& omega, int p, bool closure_variant = false);

/// R_{i,j}: slit annulus around the domain. Plain: inner radius = R (the
/// domain radius, or the half-diagonal of a rectangle); closure variant:
/// inner radius = R (1 + 1/j). Outer radius max(j, 1 + 1/j) R, slit half-angle
/// 1/j along the direction pi.
PlanarCompact outer_compacts(const Domain& dom, int j, bool closure_variant);

struct TmEntry {
  ProductCompact compact;
  std::size_t i0;
  int j;
  std::vector<int> radii;  // radii of the other factors, in order
};

/// T_m for m >= 1: i0 = (m - 1) mod d, and q = (m - 1) div d is unranked by
/// the diagonal-Cantor enumeration of N^d into (j - 1, radius_1 - 1, ...).
TmEntry enumerate_Tm(const DomainProduct& omega, int m, bool closure_variant);
/// Least m <= max_m with k contained in T_m (sampled inclusion), if any.
std::optional<int> find_Tm_containing(const DomainProduct& omega, const ProductCompact& k, bool closure_variant,
                                      double h, int max_m = 10'000);

/// Finite set of points in C^dim, stored as a union of tensor blocks.
class SampleGrid {
 public:
  SampleGrid() = default;
  explicit SampleGrid(std::size_t dim) : dim_(dim) {}

  std::size_t dim() const { return dim_; }
  std::size_t size() const;
  bool empty() const { return size() == 0; }
  void add_block(std::vector<std::vector<cplx>> axes);
  const std::vector<std::vector<std::vector<cplx>>>& blocks() const { return blocks_; }
  /// Fills `out` (length dim) with point idx.
  void point(std::size_t idx, std::span<cplx> out) const;
  std::vector<cplx> point(std::size_t idx) const;

  std::string provenance;
  double density = 0.0;

  /// Cartesian product (this first, then tail), blockwise.
  SampleGrid product(const SampleGrid& tail) const;
  SampleGrid merged(const SampleGrid& other) const;

 private:
  std::size_t dim_ = 0;
  std::vector<std::vector<std::vector<cplx>>> blocks_;
};

constexpr std::size_t kMaxGridPoints = 10'000'000;

/// Distinguished-boundary sampling at spacing h.
SampleGrid sample(const PlanarCompact& k, double h);
SampleGrid sample(const ProductCompact& k, double h);
/// n points per factor boundary, phase-shifted by `phase` (fraction of one spacing).
SampleGrid sample_count(const ProductCompact& k, std::size_t n_per_factor, double phase = 0.0);

double sup_norm(const Poly& p, const SampleGrid& grid);

}  // namespace uts
