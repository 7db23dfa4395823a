#include <doctest.h>

#include <cmath>
#include <sstream>
#include <vector>

#include <nlohmann/json.hpp>

#include "tumorage/errors.hpp"
#include "tumorage/report.hpp"

using namespace tumorage;

namespace {

AgeRow row(double d, AgePercentiles p) {
  AgeRow r;
  r.diameter_cm = d;
  r.n_observations = 1;
  r.percentiles = p;
  return r;
}

AgeTable two_row_table() {
  AgeTable t;
  t.rows.push_back(row(1.0, {1, 2, 3, 4, 5}));
  t.rows.push_back(row(4.0, {3, 6, 9, 12, 15}));
  return t;
}

}  // namespace

TEST_CASE("query at a grid diameter returns the row") {
  const auto t = two_row_table();
  const auto q = query_age(t, 4.0);
  CHECK(q.median == 9.0);
  CHECK(q.iqr == std::pair{6.0, 12.0});
  CHECK(q.ci90 == std::pair{3.0, 15.0});
}

TEST_CASE("off-grid queries interpolate in log diameter") {
  const auto t = two_row_table();
  // log(2) is halfway between log(1) and log(4).
  const auto q = query_age(t, 2.0);
  CHECK(q.median == doctest::Approx(6.0));
  CHECK(q.iqr.first == doctest::Approx(4.0));
  CHECK(q.ci90.second == doctest::Approx(10.0));
}

TEST_CASE("queries outside the grid are rejected") {
  const auto t = two_row_table();
  CHECK_THROWS_AS(query_age(t, 25.0), OutOfRangeError);
  CHECK_THROWS_AS(query_age(t, 0.5), OutOfRangeError);
  CHECK_THROWS_AS(query_age(t, -1.0), DomainError);

  AgeTable gap = two_row_table();
  AgeRow empty;
  empty.diameter_cm = 8.0;
  gap.rows.push_back(empty);
  CHECK_THROWS_AS(query_age(gap, 6.0), OutOfRangeError);
  CHECK_THROWS_AS(query_age(gap, 8.0), OutOfRangeError);
}

TEST_CASE("query results are ordered everywhere on a simulated table") {
  PipelineConfig config;
  config.simulation.n_histories = 2000;
  const auto table = run_pipeline(config);
  for (const auto& r : table.rows) {
    const auto q = query_age(table, r.diameter_cm);
    CHECK(q.median == r.percentiles->p50);
  }
  for (double d = 0.3; d <= 14.9; d *= 1.01) {
    const auto q = query_age(table, d);
    CHECK(q.ci90.first <= q.iqr.first);
    CHECK(q.iqr.first <= q.median);
    CHECK(q.median <= q.iqr.second);
    CHECK(q.iqr.second <= q.ci90.second);
  }
  const auto j = to_json(query_age(table, 5.0));
  CHECK(j.at("iqr").size() == 2);
  CHECK(j.at("diameter_cm") == 5.0);
}

TEST_CASE("sensitivity with only the baseline has zero deltas") {
  PipelineConfig config;
  config.simulation.n_histories = 500;
  const std::vector<double> rhos{0.0};
  const auto report = sensitivity_sweep(config, rhos);
  REQUIRE(report.runs.size() == 1);
  for (const auto& e : report.runs[0].entries) {
    CHECK(*e.delta_median == 0.0);
    CHECK(*e.delta_iqr_width == 0.0);
  }
}

TEST_CASE("sensitivity adds the baseline and orders by rho") {
  PipelineConfig config;
  config.simulation.n_histories = 300;
  const std::vector<double> rhos{0.4};
  const auto report = sensitivity_sweep(config, rhos);
  REQUIRE(report.runs.size() == 2);
  CHECK(report.runs[0].rho == 0.0);
  CHECK(report.runs[1].rho == 0.4);
  CHECK_THROWS_AS(sensitivity_sweep(config, std::vector<double>{1.5}), DomainError);

  std::ostringstream a;
  std::ostringstream b;
  write_sensitivity_csv(a, report);
  write_sensitivity_csv(b, sensitivity_sweep(config, rhos));
  CHECK(a.str() == b.str());
  CHECK(a.str().rfind("rho,diameter_cm,median,iqr_width,delta_median,delta_iqr_width\n", 0) == 0);
  CHECK(to_json(report).at("runs").size() == 2);
}

TEST_CASE("median delta grows with rho at mid-grid diameters") {
  PipelineConfig config;
  const std::vector<double> rhos{0.0, 0.2, 0.4};
  const auto report = sensitivity_sweep(config, rhos);
  REQUIRE(report.runs.size() == 3);
  for (std::size_t i = 0; i < report.runs[0].entries.size(); ++i) {
    const double d = report.runs[0].entries[i].diameter_cm;
    if (d < 2.5 || d > 8.2) continue;
    CHECK(*report.runs[1].entries[i].delta_median >= 0.0);
    CHECK(*report.runs[2].entries[i].delta_median >= *report.runs[1].entries[i].delta_median);
  }
}

TEST_CASE("pipeline config JSON round trip") {
  PipelineConfig config;
  config.simulation.seed = 99;
  config.simulation.rho = 0.25;
  config.inversion.convention = AgeConvention::occupancy;
  config.grid = DiameterGrid({1.0, 2.0});
  const auto back = pipeline_config_from_json(nlohmann::json::parse(to_json(config).dump()));
  CHECK(back.model == config.model);
  CHECK(back.simulation.seed == 99);
  CHECK(back.simulation.rho == 0.25);
  CHECK(back.simulation.interval_years == config.simulation.interval_years);
  CHECK(back.inversion.convention == AgeConvention::occupancy);
  CHECK(back.grid.size() == 2);
  CHECK_THROWS_AS(pipeline_config_from_json(nlohmann::json::object()), ParseError);
}
