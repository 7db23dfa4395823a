#pragma once

#include <iosfwd>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "tumorage/growth_sim.hpp"
#include "tumorage/inversion.hpp"
#include "tumorage/rdt_model.hpp"

namespace tumorage {

// Everything needed to go from growth model to age table.
struct PipelineConfig {
  RdtMixture model = default_model();
  SimulationConfig simulation;
  DiameterGrid grid = DiameterGrid::standard();
  InversionOptions inversion;
  // Worker count; never affects results.
  unsigned threads = 1;
};

/// simulate_ensemble followed by build_age_table.
AgeTable run_pipeline(const PipelineConfig& config);

struct AgeQueryResult {
  double diameter_cm = 0.0;
  double median;
  std::pair<double, double> iqr;
  std::pair<double, double> ci90;
};

/// Age percentiles at an arbitrary diameter. Between grid rows each percentile is linear in
/// log(diameter); a grid diameter returns its row unchanged. Throws OutOfRangeError outside
/// the grid or when a bracketing row has no observations.
AgeQueryResult query_age(const AgeTable& table, double diameter_cm);

nlohmann::json to_json(const AgeQueryResult& result);

struct SensitivityEntry {
  double diameter_cm = 0.0;
  std::optional<double> median;
  std::optional<double> iqr_width;
  // Relative to the rho = 0 baseline at the same diameter.
  std::optional<double> delta_median;
  std::optional<double> delta_iqr_width;
};

struct SensitivityRun {
  double rho;
  std::vector<SensitivityEntry> entries;
};

struct SensitivityReport {
  std::vector<SensitivityRun> runs;
};

/// Runs the full pipeline once per rho with the same seed. rho = 0 is always run as the
/// baseline and is added to the report when absent from `rhos`.
SensitivityReport sensitivity_sweep(const PipelineConfig& config, std::span<const double> rhos);

/// rho,diameter_cm,median,iqr_width,delta_median,delta_iqr_width
void write_sensitivity_csv(std::ostream& out, const SensitivityReport& report);
nlohmann::json to_json(const SensitivityReport& report);

nlohmann::json to_json(const PipelineConfig& config);
PipelineConfig pipeline_config_from_json(const nlohmann::json& doc);

}  // namespace tumorage
