#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "uts/certificate.hpp"
#include "uts/geometry.hpp"
#include "uts/multiindex.hpp"
#include "uts/poly.hpp"

namespace uts {

/// Enumeration j -> f_j of all polynomials in r + d variables with rational
/// real and imaginary parts of every coefficient.
///
/// j - 1 is split by Cantor unpairing into (D, code). The monomials of total
/// degree <= D are listed in graded-lex order (M of them), code is unranked in
/// graded-lex order of N^(2M), and each entry a is mapped to a rational by
/// 0 -> 0, 2k - 1 -> cw(k), 2k -> -cw(k), where cw is the Calkin-Wilf
/// sequence 1, 1/2, 2, 1/3, 3/2, ... . Monomial t receives a_(2t) + i a_(2t+1).
class FjCatalog {
 public:
  FjCatalog(std::size_t r, std::size_t d) : r_(r), d_(d) {}

  std::size_t r() const { return r_; }
  std::size_t d() const { return d_; }

  /// Throws DomainError for j = 0 or when the decoding overflows.
  Poly at(std::uint64_t j) const;
  /// Index of p when every coefficient part is a rational with denominator
  /// below max_denominator; the catalog lists p at degree D = total degree.
  std::optional<std::uint64_t> index_of(const Poly& p, std::int64_t max_denominator = 1'000'000) const;

 private:
  std::size_t r_;
  std::size_t d_;
};

/// The n-th term of the Calkin-Wilf sequence (n >= 1) as (numerator, denominator).
std::pair<std::uint64_t, std::uint64_t> calkin_wilf(std::uint64_t n);
/// Inverse of calkin_wilf for a reduced positive fraction.
std::uint64_t calkin_wilf_index(std::uint64_t num, std::uint64_t den);

/// Parameter tuple of one E or F predicate.
struct PredicateSpec {
  int tau = 1;
  int p = 1;
  int m = 1;
  int j = 1;
  int s = 1;
  std::uint64_t n = 0;
  Variant variant = Variant::Plain;
  /// Operator order for strong and infty, truncation radius for infty.
  int l = 1;
  std::optional<std::vector<cplx>> fixed_center;
};

/// Ambient data the predicates are evaluated against.
struct PredicateContext {
  DomainProduct g;      // parameter domains (r factors)
  DomainProduct omega;  // variable domains (d factors)
  Enumeration enumeration = Enumeration::graded_lex(1);
  GridSpec grids;
};

struct PredicateResult {
  bool pass = false;
  double achieved = 0.0;
  double threshold = 0.0;
  std::vector<std::pair<DiffOp, double>> by_op;
  std::size_t grid_points = 0;
  std::size_t center_count = 0;
  double grid_density = 0.0;
  std::string description;
};

/// Point sets of one predicate: parameters w, variables z and expansion centers.
struct PredicateGrids {
  std::vector<std::vector<cplx>> w;
  std::vector<std::vector<cplx>> z;
  std::vector<std::vector<cplx>> centers;
  double density = 0.0;

  std::size_t pair_count() const { return w.size() * z.size(); }
};

/// Distinguished-boundary samples of the w- and z-compacts (the per-factor
/// count shrinks until the pair count fits grids.max_points).
PredicateGrids make_grids(const ProductCompact& w_block, const ProductCompact& z_block,
                          std::vector<std::vector<cplx>> centers, const GridSpec& grids);
/// Factor centers plus boundary samples of each factor, as a tensor product.
std::vector<std::vector<cplx>> center_samples(const ProductCompact& m, std::size_t boundary_per_factor);

/// sup over the grids of |D(S_n(f, w, zeta)(z) - g(w, z))| per operator D.
/// When n reaches the capture index of f, S_n(f, w, zeta) = f for every zeta
/// and f is evaluated directly in its own centered form.
std::vector<std::pair<DiffOp, double>> taylor_deviation(const CenteredPoly& f, const CenteredPoly& g, std::uint64_t n,
                                                       const Enumeration& enumeration, const PredicateGrids& grids,
                                                       const std::vector<DiffOp>& ops);
double max_of(const std::vector<std::pair<DiffOp, double>>& by_op);

/// Operators checked by a variant: identity for plain, F_l otherwise.
std::vector<DiffOp> predicate_ops(Variant variant, std::size_t r, std::size_t d, int l);

PredicateResult check_E(const Poly& f, const PredicateSpec& spec, const FjCatalog& catalog,
                        const PredicateContext& ctx);
PredicateResult check_F(const Poly& f, const PredicateSpec& spec, const PredicateContext& ctx);
/// check_E with the strong variant forced (max over F_l).
PredicateResult check_E_strong(const Poly& f, PredicateSpec spec, const FjCatalog& catalog,
                               const PredicateContext& ctx);
/// check_F with the closure-truncation variant forced.
PredicateResult check_F_infty(const Poly& f, PredicateSpec spec, const PredicateContext& ctx);
/// max over F_l of sup |D(S_n f - f)| on closure(G) x closure(Omega) truncated at |w|, |z| <= l.
double seminorm_infty(const Poly& f, std::uint64_t n, int l, const PredicateContext& ctx);

/// Values of a function on interior test circles of one axis, one circle per
/// sample of the remaining coordinates.
struct SliceTable {
  std::size_t axis = 0;
  cplx circle_center;
  double circle_radius = 0.0;
  std::size_t quadrature = 256;
  struct Slice {
    std::vector<cplx> others;
    cplx center_value;
    std::vector<cplx> circle_values;
  };
  std::vector<Slice> slices;
};

using PointFunction = std::function<cplx(std::span<const cplx>)>;

/// Throws DomainError when the axis factor has no interior. The circle has
/// radius 0.8 times the inradius of the factor.
SliceTable tabulate_slices(const PointFunction& f, const ProductCompact& support, std::size_t axis,
                           std::size_t quadrature = 256, std::size_t others_per_factor = 8);
/// Max over slices of max(|circle mean - center value|, |(1 / 2 pi i) contour integral|).
double slice_AD_residual(const SliceTable& table);

struct VerificationReport {
  bool ok = true;
  std::vector<std::string> problems;
  std::vector<std::pair<double, double>> recomputed;  // (e_side, f_side) per stage
};

/// Recomputes every stage predicate from the stream and compares against the
/// recorded values (absolute tolerance `match_tolerance`).
VerificationReport verify_certificate(const CoefficientStream& stream, const Certificate& cert,
                                      double match_tolerance = 1e-12);

/// Recomputes the (E, F) per-operator deviations of one stage record.
std::pair<std::vector<std::pair<DiffOp, double>>, std::vector<std::pair<DiffOp, double>>> stage_predicates(
    const CoefficientStream& stream, const StageRecord& record, const Certificate& cert);

}  // namespace uts
