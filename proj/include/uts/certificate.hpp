#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "uts/geometry.hpp"
#include "uts/mergelyan.hpp"
#include "uts/multiindex.hpp"
#include "uts/poly.hpp"

namespace uts {

enum class Variant { Plain, Strong, Infty };

std::string to_string(Variant v);
/// "plain", "strong" or "infty".
Variant variant_from_string(std::string_view s);

/// Grid parameters shared by the constructor and the verifier so that both
/// evaluate the stage predicates on identical point sets.
struct GridSpec {
  std::size_t points_per_curve = 96;
  /// Boundary samples per factor added to the factor center for varying centers.
  std::size_t center_boundary_samples = 8;
  /// Cap on the number of (w, z) pairs of one predicate grid.
  std::size_t max_points = 40'000;

  friend bool operator==(const GridSpec&, const GridSpec&) = default;
};

/// Everything a verifier needs to recompute one stage's predicates.
struct StageRecord {
  int stage = 0;
  std::string label;
  Variant variant = Variant::Plain;
  int derivative_order = 0;
  double tolerance = 0.0;

  ProductCompact outer;    // z-compact where the target is approximated
  ProductCompact inner;    // z-compact where the candidate must stay stable
  ProductCompact w_block;  // parameter compact (no factors when r = 0)
  Poly target;

  std::uint64_t lambda = 0;
  std::uint64_t block_first = 0;
  std::uint64_t block_last = 0;
  std::size_t i0 = 0;
  int premultiplier_exponent = 0;

  /// Max over operators; per-operator values below.
  double e_side_error = 0.0;
  double f_side_error = 0.0;
  std::vector<std::pair<DiffOp, double>> e_side_by_op;
  std::vector<std::pair<DiffOp, double>> f_side_by_op;
  /// sup |Q| over w_block x inner for the appended correction Q.
  double inner_change = 0.0;
  std::size_t e_grid_points = 0;
  std::size_t f_grid_points = 0;
  std::size_t center_count = 0;
  double grid_density = 0.0;

  int max_total_degree = 0;
  int fit_degree_cap = 0;
  double fit_condition = 0.0;
  double fit_error = 0.0;
  std::string fit_basis;
  std::vector<SweepEntry> residual_history;

  bool passed = false;
  std::string failure;
};

struct Certificate {
  std::string enumeration_tag = "graded-lex";
  std::string mu_tag = "mu:all";
  std::size_t r = 0;
  std::size_t d = 1;
  std::vector<cplx> center;
  /// "fixed" or "varying".
  std::string center_mode = "varying";
  GridSpec grids;
  std::string outer_family = "slit-annulus";
  std::vector<StageRecord> stages;
  bool passed = true;

  /// Stages whose lambda repeats an earlier one are skipped when reporting the
  /// strictly increasing subsequence.
  std::vector<std::uint64_t> strictly_increasing_lambdas() const;
};

}  // namespace uts
