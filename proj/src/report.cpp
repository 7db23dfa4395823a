#include "tumorage/report.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include <fmt/format.h>
#include <fmt/ostream.h>
#include <nlohmann/json.hpp>

#include "tumorage/errors.hpp"

namespace tumorage {

AgeTable run_pipeline(const PipelineConfig& config) {
  config.grid.check_within(config.simulation);
  const auto ensemble = simulate_ensemble(config.model, config.simulation, config.threads);
  return build_age_table(ensemble, config.grid, config.inversion);
}

AgeQueryResult query_age(const AgeTable& table, double diameter_cm) {
  if (!(diameter_cm > 0.0) || !std::isfinite(diameter_cm)) {
    throw DomainError(fmt::format("diameter must be positive, got {}", diameter_cm));
  }
  if (table.rows.empty()) throw OutOfRangeError("age table has no rows");
  const double lo = table.rows.front().diameter_cm;
  const double hi = table.rows.back().diameter_cm;
  if (diameter_cm < lo || diameter_cm > hi) {
    throw OutOfRangeError(
        fmt::format("diameter {} cm is outside the table range [{}, {}] cm", diameter_cm, lo, hi));
  }

  auto require = [](const AgeRow& row) -> const AgePercentiles& {
    if (!row.percentiles) {
      throw OutOfRangeError(fmt::format("no simulated observations at {} cm", row.diameter_cm));
    }
    return *row.percentiles;
  };
  auto make = [&](const AgePercentiles& p) {
    return AgeQueryResult{diameter_cm, p.p50, {p.p25, p.p75}, {p.p5, p.p95}};
  };

  auto upper = std::lower_bound(table.rows.begin(), table.rows.end(), diameter_cm,
                                [](const AgeRow& r, double d) { return r.diameter_cm < d; });
  if (upper->diameter_cm == diameter_cm) return make(require(*upper));

  const AgeRow& below = *(upper - 1);
  const AgePercentiles& a = require(below);
  const AgePercentiles& b = require(*upper);
  const double w = std::log(diameter_cm / below.diameter_cm) / std::log(upper->diameter_cm / below.diameter_cm);
  auto mix = [w](double x, double y) { return x + w * (y - x); };
  return make(AgePercentiles{mix(a.p5, b.p5), mix(a.p25, b.p25), mix(a.p50, b.p50),
                             mix(a.p75, b.p75), mix(a.p95, b.p95)});
}

nlohmann::json to_json(const AgeQueryResult& result) {
  return {{"diameter_cm", result.diameter_cm},
          {"median", result.median},
          {"iqr", {result.iqr.first, result.iqr.second}},
          {"ci90", {result.ci90.first, result.ci90.second}}};
}

SensitivityReport sensitivity_sweep(const PipelineConfig& config, std::span<const double> rhos) {
  std::vector<double> ordered(rhos.begin(), rhos.end());
  for (double rho : ordered) {
    if (!(rho >= 0.0 && rho < 1.0)) throw DomainError(fmt::format("rho must lie in [0, 1), got {}", rho));
  }
  ordered.push_back(0.0);
  std::sort(ordered.begin(), ordered.end());
  ordered.erase(std::unique(ordered.begin(), ordered.end()), ordered.end());

  std::vector<AgeTable> tables;
  for (double rho : ordered) {
    PipelineConfig run = config;
    run.simulation.rho = rho;
    tables.push_back(run_pipeline(run));
  }

  const AgeTable& baseline = tables.front();
  SensitivityReport report;
  for (std::size_t r = 0; r < ordered.size(); ++r) {
    SensitivityRun run{ordered[r], {}};
    for (std::size_t i = 0; i < tables[r].rows.size(); ++i) {
      const auto& row = tables[r].rows[i];
      const auto& base = baseline.rows[i];
      SensitivityEntry entry;
      entry.diameter_cm = row.diameter_cm;
      if (row.percentiles) {
        entry.median = row.percentiles->p50;
        entry.iqr_width = row.percentiles->p75 - row.percentiles->p25;
        if (base.percentiles) {
          entry.delta_median = *entry.median - base.percentiles->p50;
          entry.delta_iqr_width = *entry.iqr_width - (base.percentiles->p75 - base.percentiles->p25);
        }
      }
      run.entries.push_back(entry);
    }
    report.runs.push_back(std::move(run));
  }
  return report;
}

namespace {

std::string format_optional(const std::optional<double>& value) {
  return value ? fmt::format("{:.6f}", *value) : std::string{};
}

nlohmann::json json_optional(const std::optional<double>& value) {
  return value ? nlohmann::json(*value) : nlohmann::json(nullptr);
}

}  // namespace

void write_sensitivity_csv(std::ostream& out, const SensitivityReport& report) {
  out << "rho,diameter_cm,median,iqr_width,delta_median,delta_iqr_width\n";
  for (const auto& run : report.runs) {
    for (const auto& e : run.entries) {
      fmt::print(out, "{},{},{},{},{},{}\n", run.rho, e.diameter_cm, format_optional(e.median),
                 format_optional(e.iqr_width), format_optional(e.delta_median),
                 format_optional(e.delta_iqr_width));
    }
  }
}

nlohmann::json to_json(const SensitivityReport& report) {
  nlohmann::json runs = nlohmann::json::array();
  for (const auto& run : report.runs) {
    nlohmann::json entries = nlohmann::json::array();
    for (const auto& e : run.entries) {
      entries.push_back({{"diameter_cm", e.diameter_cm},
                         {"median", json_optional(e.median)},
                         {"iqr_width", json_optional(e.iqr_width)},
                         {"delta_median", json_optional(e.delta_median)},
                         {"delta_iqr_width", json_optional(e.delta_iqr_width)}});
    }
    runs.push_back({{"rho", run.rho}, {"entries", std::move(entries)}});
  }
  return {{"runs", std::move(runs)}};
}

nlohmann::json to_json(const PipelineConfig& config) {
  const auto& sim = config.simulation;
  return {{"model",
           {{"p_negative", config.model.p_negative},
            {"lambda_pos", config.model.lambda_pos},
            {"lambda_neg", config.model.lambda_neg}}},
          {"simulation",
           {{"v0_ml", sim.v0.ml},
            {"vmax_ml", sim.v_max.ml},
            {"interval_years", sim.interval_years},
            {"n_histories", sim.n_histories},
            {"seed", sim.seed},
            {"rho", sim.rho},
            {"max_steps", sim.max_steps}}},
          {"grid_cm", std::vector<double>(config.grid.thresholds().begin(), config.grid.thresholds().end())},
          {"inversion",
           {{"age_convention", to_string(config.inversion.convention)},
            {"occupancy_bin_width", config.inversion.occupancy_bin_width}}}};
}

PipelineConfig pipeline_config_from_json(const nlohmann::json& doc) {
  try {
    PipelineConfig config;
    const auto& m = doc.at("model");
    config.model = RdtMixture{m.at("p_negative").get<double>(), m.at("lambda_pos").get<double>(),
                              m.at("lambda_neg").get<double>()};
    const auto& s = doc.at("simulation");
    config.simulation.v0 = Volume{s.at("v0_ml").get<double>()};
    config.simulation.v_max = Volume{s.at("vmax_ml").get<double>()};
    config.simulation.interval_years = s.at("interval_years").get<double>();
    config.simulation.n_histories = s.at("n_histories").get<std::size_t>();
    config.simulation.seed = s.at("seed").get<std::uint64_t>();
    config.simulation.rho = s.at("rho").get<double>();
    config.simulation.max_steps = s.at("max_steps").get<std::size_t>();
    config.grid = DiameterGrid(doc.at("grid_cm").get<std::vector<double>>());
    const auto& inv = doc.at("inversion");
    config.inversion.convention = parse_age_convention(inv.at("age_convention").get<std::string>());
    config.inversion.occupancy_bin_width = inv.at("occupancy_bin_width").get<double>();
    config.model.validate();
    config.simulation.validate();
    return config;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(fmt::format("pipeline config JSON: {}", e.what()));
  }
}

}  // namespace tumorage
