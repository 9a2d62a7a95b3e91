#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "uts/certificate.hpp"
#include "uts/serialize.hpp"
#include "uts/universal.hpp"

namespace uts {

/// Command-line adjustments applied while a scenario is loaded.
struct ScenarioOverrides {
  /// Fitting points per boundary curve; verification uses twice as many.
  std::optional<std::size_t> density;
  std::optional<std::uint64_t> seed;
  std::optional<Variant> variant;
  std::optional<std::vector<cplx>> fixed_center;
};

/// A fully resolved construction scenario.
///
/// Stage compacts may be given explicitly or by reference to the ambient
/// families: {"T": m} for the outer compact, {"M": p} for the inner one and
/// {"F": tau} for the parameter block. A target may be {"catalog": j}.
struct Scenario {
  std::string name;
  DomainProduct g;
  DomainProduct omega;
  ConstructionSettings settings;
  std::vector<StageRequest> schedule;
};

/// Throws SchemaError for malformed input and DomainError when a stage
/// compact is not where the scenario domains require it to be.
Scenario load_scenario(const json& j, const ScenarioOverrides& overrides = {});

/// Sampled geometric checks: inner compacts inside Omega, parameter blocks
/// inside G and the separating outer factor outside Omega (outside its
/// closure for the infty variant).
void validate_scenario_geometry(const Scenario& sc);

/// stage,lambda,e_side_error,f_side_error,max_degree
std::string errors_csv(const Certificate& cert);
/// stage,degree_cap,achieved_error,condition_estimate
std::string fit_history_csv(const Certificate& cert);

/// {"body": certificate, "meta": {timestamps, timings, digest of the body}}.
json certificate_document(const Certificate& cert, const std::vector<double>& stage_seconds, double elapsed_seconds,
                          const std::string& scenario_name, std::uint64_t seed);

/// Shipped scenarios as (name, JSON text).
const std::vector<std::pair<std::string, std::string>>& builtin_scenarios();

/// Exit codes: 0 success, 1 failed stage or verification mismatch, 2 usage,
/// schema or file error.
int run_cli(int argc, char** argv);

}  // namespace uts
