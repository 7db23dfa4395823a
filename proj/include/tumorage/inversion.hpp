#pragma once

#include <array>
#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "tumorage/geometry.hpp"
#include "tumorage/growth_sim.hpp"

namespace tumorage {

/// Threshold diameters at which ages are collected, strictly increasing.
class DiameterGrid {
 public:
  explicit DiameterGrid(std::vector<double> thresholds_cm);

  /// 0.3 ... 14.9 cm, a geometric ladder with ratio exp(0.3).
  static DiameterGrid standard();

  /// Throws DomainError unless every threshold lies strictly between the diameters of
  /// config.v0 and config.v_max.
  void check_within(const SimulationConfig& config) const;

  std::span<const double> thresholds() const& { return thresholds_; }
  // A span into a temporary grid would dangle.
  std::span<const double> thresholds() && = delete;
  std::size_t size() const { return thresholds_.size(); }

 private:
  std::vector<double> thresholds_;
};

enum class Direction { up, down };

struct Crossing {
  double age;
  Direction direction;
};

/// Every instant at which `history` passes `threshold`, in time order. Log-volume is linear
/// within an interval, so the instant inside interval i is t_i + log2(V* / v_i) / rdt_i.
/// A point landing exactly on V* counts once, as the end of the earlier interval.
std::vector<Crossing> crossing_times(const GrowthHistory& history, Diameter threshold);

/// How a history contributes ages to a threshold.
enum class AgeConvention {
  // Every crossing, up or down.
  all_crossings,
  // Only the first upward crossing.
  first_crossing,
  // Interval end points whose diameter falls in a log-diameter bin centred on the threshold,
  // aged at the end point. Matches a discretised P(d|t) joint histogram.
  occupancy,
};

std::string_view to_string(AgeConvention convention);
/// Accepts "all-crossings", "first-crossing", "occupancy".
AgeConvention parse_age_convention(std::string_view text);

struct InversionOptions {
  AgeConvention convention = AgeConvention::all_crossings;
  // Full width of an occupancy bin in ln(diameter).
  double occupancy_bin_width = 0.1;
};

/// Ages that `history` contributes to `threshold` under `options`.
std::vector<double> observed_ages(const GrowthHistory& history, Diameter threshold,
                                  const InversionOptions& options);

inline constexpr std::array<double, 5> kReportLevels = {0.05, 0.25, 0.50, 0.75, 0.95};

/// Empirical quantiles, linear interpolation between order statistics at rank (n - 1) * level.
/// Throws DomainError on empty input or a level outside (0, 1).
std::vector<double> percentiles(std::span<const double> values, std::span<const double> levels);

struct AgePercentiles {
  double p5;
  double p25;
  double p50;
  double p75;
  double p95;

  friend bool operator==(const AgePercentiles&, const AgePercentiles&) = default;
};

struct AgeRow {
  double diameter_cm = 0.0;
  std::size_t n_observations = 0;
  // Empty when nothing was observed at this size.
  std::optional<AgePercentiles> percentiles;
  // Pooled ages; not serialized.
  std::vector<double> ages;
};

struct AgeTable {
  std::vector<AgeRow> rows;
  std::size_t n_histories = 0;
  std::size_t n_truncated = 0;
  InversionOptions options;

  const AgeRow* find(double diameter_cm) const;
};

/// Pools ages from every history (merged in index order) and summarises each threshold.
AgeTable build_age_table(std::span<const GrowthHistory> ensemble, const DiameterGrid& grid,
                         const InversionOptions& options = {});

/// diameter_cm,p5,p25,p50,p75,p95,n_crossings; percentiles left blank on empty rows.
void write_age_table_csv(std::ostream& out, const AgeTable& table);
AgeTable read_age_table_csv(std::istream& in);

nlohmann::json age_table_to_json(const AgeTable& table);
AgeTable age_table_from_json(const nlohmann::json& doc);

}  // namespace tumorage
