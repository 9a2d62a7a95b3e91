#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "uts/geometry.hpp"
#include "uts/multiindex.hpp"
#include "uts/poly.hpp"

namespace uts {

/// One piece of a piecewise-polynomial target: target on support.
/// Supports live in C^(r+d) (w-factors first).
struct ApproxPiece {
  ProductCompact support;
  Poly target;
  /// The target is a polynomial in (x - target_center); empty = origin.
  std::vector<cplx> target_center;
};

/// Multiplies every basis function by (x_coordinate - basis_center)^exponent.
struct BasisFactor {
  std::size_t coordinate = 0;
  int exponent = 0;
};

/// A polynomial approximation request on a disjoint union of product compacts.
struct ApproxTask {
  std::size_t r = 0;
  std::size_t d = 0;
  std::vector<ApproxPiece> pieces;
  /// Per-coordinate maximal exponent of the fitted factor (length r + d).
  MultiIndex degree_budget;
  /// Operators whose values are matched; identity-only for plain approximation.
  std::vector<DiffOp> derivative_orders;
  double tolerance = 1e-3;
  std::size_t points_per_curve = 400;
  std::size_t verify_points_per_curve = 800;
  /// Rows per piece are capped by shrinking the per-factor count.
  std::size_t max_rows_per_piece = 20'000;
  std::size_t max_verify_rows_per_piece = 160'000;
  /// Basis monomials are taken in powers of (x - basis_center); empty = origin.
  std::vector<cplx> basis_center;
  std::optional<BasisFactor> factor;
  /// Optional caps on every coordinate's degree, tried in order; the first cap
  /// that meets the tolerance wins. Empty = fit once at the full budget.
  std::vector<int> degree_sweep;
  /// Relative singular-value cutoff of the regularized solve.
  double rcond = 1e-12;
  /// Phase offset of the verification grid (fraction of a spacing).
  double verify_phase = 0.5;
};

struct SweepEntry {
  int degree_cap = 0;
  double achieved_error = 0.0;
  double condition_estimate = 0.0;
};

struct FitReport {
  /// The approximant in powers of (x - basis_center).
  Poly fitted_centered;
  std::vector<cplx> basis_center;
  /// Sup errors per operator on the verification grid.
  std::vector<std::pair<DiffOp, double>> achieved_errors;
  /// Sup errors per operator on the fitting grid.
  std::vector<std::pair<DiffOp, double>> fitting_errors;
  std::vector<SweepEntry> residual_history;
  double condition_estimate = 0.0;
  std::size_t numerical_rank = 0;
  std::size_t rows = 0;
  std::size_t columns = 0;
  int degree_cap = 0;
  bool success = false;
  std::string basis;

  double max_error() const;
  double max_fitting_error() const;
  /// The approximant in powers of x (shifted back from basis_center).
  Poly fitted() const;
};

/// Two-piece target h = g on the inner block and f_j on the outer block.
///
/// inner and outer are products over C^(r+d). The w-factors must agree. The
/// z-factor i0 must be disjoint between the blocks (chosen automatically as
/// the first disjoint pair when not given); every other z-factor that differs
/// is replaced on both sides by a closed disk B_i enclosing the two.
ApproxTask glue_target(const Poly& g, const Poly& f_j, const ProductCompact& inner, const ProductCompact& outer,
                       std::optional<std::size_t> i0 = std::nullopt);

/// Column-equilibrated monomial least squares with a truncated SVD.
FitReport fit(const ApproxTask& task);
/// Scaled monomials; with `orthogonalize` the columns come from an Arnoldi-type
/// recurrence on the sample rows instead of raw powers.
FitReport fit_with_scaling(const ApproxTask& task, bool orthogonalize);

/// Degree-budget helpers.
MultiIndex uniform_budget(std::size_t r, std::size_t d, int w_degree, int z_degree);

}  // namespace uts
