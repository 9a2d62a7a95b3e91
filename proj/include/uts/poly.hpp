#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "uts/multiindex.hpp"

namespace uts {

using cplx = std::complex<double>;

/// Sparse polynomial in parameters w in C^r and variables z in C^d.
///
/// Each term is keyed by the concatenated exponent tuple (w-part, z-part).
/// Zero coefficients are never stored.
class Poly {
 public:
  Poly() = default;
  Poly(std::size_t r, std::size_t d) : r_(r), d_(d) {}

  static Poly constant(std::size_t r, std::size_t d, cplx c);
  static Poly monomial(std::size_t r, std::size_t d, const MultiIndex& exponents, cplx c = 1.0);
  /// Coordinate x_var (w_1..w_r, z_1..z_d numbered 0..r+d-1).
  static Poly variable(std::size_t r, std::size_t d, std::size_t var);

  std::size_t r() const { return r_; }
  std::size_t d() const { return d_; }
  std::size_t nvars() const { return r_ + d_; }
  const std::map<MultiIndex, cplx>& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool is_zero() const { return terms_.empty(); }

  void add_term(const MultiIndex& exponents, cplx c);
  cplx coefficient(const MultiIndex& exponents) const;

  /// Max exponent of x_var, -1 for the zero polynomial.
  int degree(std::size_t var) const;
  /// Per-z-coordinate maximal exponents (the box of the z-support).
  MultiIndex z_degrees() const;
  int total_z_degree() const;
  /// Sum of |coefficient|.
  double l1_norm() const;

  cplx eval(std::span<const cplx> w, std::span<const cplx> z) const;
  /// Evaluation at the concatenated point x = (w, z).
  cplx eval(std::span<const cplx> x) const;

  Poly operator-() const;
  Poly& operator+=(const Poly& other);
  Poly& operator-=(const Poly& other);
  Poly& operator*=(cplx s);
  friend Poly operator+(Poly a, const Poly& b) { return a += b; }
  friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
  friend Poly operator*(Poly a, cplx s) { return a *= s; }
  friend Poly operator*(cplx s, Poly a) { return a *= s; }
  friend Poly operator*(const Poly& a, const Poly& b);

  friend bool operator==(const Poly&, const Poly&) = default;

 private:
  void require_same_shape(const Poly& other) const;

  std::size_t r_ = 0;
  std::size_t d_ = 0;
  std::map<MultiIndex, cplx> terms_;
};

/// Flattened term list for repeated evaluation on large grids.
class PolyEvaluator {
 public:
  explicit PolyEvaluator(const Poly& p);
  /// Evaluates at x = (w, z).
  cplx operator()(std::span<const cplx> x) const;

 private:
  std::size_t nvars_;
  std::vector<int> max_degree_;
  std::vector<int> exps_;
  std::vector<cplx> coefs_;
};

Poly differentiate(const Poly& p, const DiffOp& op);

/// Re-expands p in powers of (z - zeta); w is untouched. The z-exponents of
/// the result refer to the shifted variables.
Poly shift_center(const Poly& p, std::span<const cplx> zeta);

/// A polynomial written in powers of (z - center).
struct CenteredPoly {
  Poly body;
  std::vector<cplx> center;

  static CenteredPoly zero(std::size_t r, std::size_t d);
  cplx eval(std::span<const cplx> w, std::span<const cplx> z) const;
  /// The same function in powers of z.
  Poly to_absolute() const;
  /// The same function re-expanded about another center.
  CenteredPoly recentered(std::span<const cplx> new_center) const;

  friend bool operator==(const CenteredPoly&, const CenteredPoly&) = default;
};

CenteredPoly centered(const Poly& p, std::span<const cplx> zeta);

/// m-th Taylor coefficient of z -> f(w, z) about zeta.
cplx gamma(const Poly& f, std::span<const cplx> w, std::span<const cplx> zeta, const MultiIndex& m);

/// Coefficient of (z - center)^m of a centered polynomial, as a polynomial in w.
Poly coefficient_in_w(const Poly& centered_body, const MultiIndex& m);

/// S_n(f, w, zeta) with coefficients kept symbolic in w.
CenteredPoly partial_sum(const Poly& f, std::span<const cplx> zeta, std::uint64_t n,
                         const Enumeration& enumeration);
/// Drops the terms of a centered polynomial whose z-exponent has rank > n.
CenteredPoly truncate(const CenteredPoly& p, std::uint64_t n, const Enumeration& enumeration);

/// One stage's contribution to a coefficient stream.
struct StreamBlock {
  int stage = 0;
  std::uint64_t first_index = 0;
  /// Every coefficient with index <= last_index is final once the block is appended.
  std::uint64_t last_index = 0;
  /// k -> a_k(w); absent keys are zero coefficients.
  std::map<std::uint64_t, Poly> coefficients;

  friend bool operator==(const StreamBlock&, const StreamBlock&) = default;
};

/// Append-only coefficient sequence a_k(w) of a power series about a fixed
/// center. Appending never modifies an already materialized coefficient.
class CoefficientStream {
 public:
  CoefficientStream(Enumeration enumeration, std::vector<cplx> center, std::size_t r);

  const Enumeration& enumeration() const { return enumeration_; }
  const std::vector<cplx>& center() const { return center_; }
  std::size_t r() const { return r_; }
  std::size_t d() const { return center_.size(); }
  const std::vector<StreamBlock>& blocks() const { return blocks_; }
  bool empty() const { return blocks_.empty(); }
  std::optional<std::uint64_t> materialized_through() const;

  /// Throws DomainError if the block would touch a frozen index.
  void append_block(StreamBlock block);

  /// Splits a polynomial centered at center() into coefficients a_k(w).
  std::map<std::uint64_t, Poly> coefficients_of(const Poly& centered_body) const;

  /// Sum of every materialized block.
  CenteredPoly current() const;

  friend bool operator==(const CoefficientStream&, const CoefficientStream&) = default;

 private:
  Enumeration enumeration_;
  std::vector<cplx> center_;
  std::size_t r_;
  std::vector<StreamBlock> blocks_;
};

/// sum_{k <= n} a_k(w) (z - center)^{N_k}.
CenteredPoly stream_partial_sum(const CoefficientStream& stream, std::uint64_t n);

}  // namespace uts
