#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "uts/certificate.hpp"
#include "uts/geometry.hpp"
#include "uts/multiindex.hpp"
#include "uts/poly.hpp"

namespace uts {

/// One approximation request: approach `target` on w_block x outer while the
/// partial sums stay stable on w_block x inner.
struct StageRequest {
  ProductCompact outer;    // d factors; factor i0 avoids the domain
  Poly target;             // (r, d)
  ProductCompact inner;    // d factors, inside the domain
  ProductCompact w_block;  // r factors
  double tolerance = 1e-3;
  Variant variant = Variant::Plain;
  /// Operator order l for the strong and infty variants.
  int derivative_order = 1;
  /// Largest degree of the fitted quotient q in z_{i0}.
  int degree_budget = 80;
  /// Degree caps tried in order; the first passing one is kept.
  std::vector<int> degree_sweep = {10, 20, 30, 40, 60, 80};
  std::optional<std::size_t> i0;
  std::string label;
};

struct ConstructionSettings {
  std::size_t r = 0;
  std::size_t d = 1;
  Enumeration enumeration = Enumeration::graded_lex(1);
  IndexSet mu = IndexSet::all();
  /// Expansion center of the fixed-center classes; otherwise the midpoint of
  /// the first stage's inner compact is used.
  std::optional<std::vector<cplx>> fixed_center;
  std::size_t points_per_curve = 400;
  std::size_t verify_points_per_curve = 800;
  GridSpec grids;
  std::uint64_t seed = 0;
};

struct StagePlan {
  ConstructionSettings settings;
  std::vector<StageRequest> stages;
  /// Reference center c of the coefficient stream.
  std::vector<cplx> center;
  std::string center_mode = "varying";
  /// Smallest admissible lambda for the first stage.
  std::uint64_t first_lambda_floor = 0;
};

/// Validates the schedule and fixes the stream center. Requires a graded
/// enumeration of dimension d and an index set with a member within the scan
/// bound.
StagePlan plan_stages(std::vector<StageRequest> schedule, const ConstructionSettings& settings);

/// Appends one block to `stream` and returns its record. The correction is
/// Q = (z_{i0} - c_{i0})^e q with e one more than the largest total degree of
/// an already frozen index, and q fitted so that Q matches target - P on
/// w_block x outer and 0 on w_block x inner. A failing fit still appends its
/// best block so that later stages keep a consistent stream.
StageRecord build_stage(CoefficientStream& stream, const StageRequest& req, const StagePlan& plan, int stage_number);

struct ConstructionResult {
  CoefficientStream stream;
  Certificate certificate;
  /// Wall-clock seconds per stage.
  std::vector<double> stage_seconds;
};

ConstructionResult run_construction(const StagePlan& plan);

/// Certificate header (everything but the stage records) for a plan.
Certificate certificate_header(const StagePlan& plan);

}  // namespace uts
