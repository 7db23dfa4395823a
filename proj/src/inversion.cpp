#include "tumorage/inversion.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>

#include <fmt/format.h>
#include <fmt/ostream.h>
#include <nlohmann/json.hpp>

#include "tumorage/errors.hpp"

namespace tumorage {

DiameterGrid::DiameterGrid(std::vector<double> thresholds_cm) : thresholds_(std::move(thresholds_cm)) {
  if (thresholds_.empty()) throw DomainError("diameter grid is empty");
  for (std::size_t i = 0; i < thresholds_.size(); ++i) {
    const double d = thresholds_[i];
    if (!(d > 0.0) || !std::isfinite(d)) {
      throw DomainError(fmt::format("grid diameter must be positive, got {}", d));
    }
    if (i > 0 && !(d > thresholds_[i - 1])) {
      throw DomainError(fmt::format("grid must be strictly increasing ({} after {})", d, thresholds_[i - 1]));
    }
  }
}

DiameterGrid DiameterGrid::standard() {
  return DiameterGrid({0.3, 0.4, 0.5, 0.7, 1.0, 1.3, 1.8, 2.5, 3.3, 4.5, 6.0, 8.2, 11.0, 14.9});
}

void DiameterGrid::check_within(const SimulationConfig& config) const {
  const double lo = diameter_of(config.v0.ml).cm;
  const double hi = diameter_of(config.v_max.ml).cm;
  if (!(thresholds_.front() > lo) || !(thresholds_.back() < hi)) {
    throw DomainError(fmt::format("grid [{}, {}] cm must lie strictly inside ({:.4f}, {:.4f}) cm",
                                  thresholds_.front(), thresholds_.back(), lo, hi));
  }
}

std::vector<Crossing> crossing_times(const GrowthHistory& history, Diameter threshold) {
  const double target = std::log2(diameter_to_volume(threshold).ml);
  std::vector<Crossing> out;
  for (std::size_t i = 0; i < history.n_steps(); ++i) {
    const double start = std::log2(history.volumes[i]);
    const double end = std::log2(history.volumes[i + 1]);
    Direction direction;
    if (start < target && end >= target) {
      direction = Direction::up;
    } else if (start > target && end <= target) {
      direction = Direction::down;
    } else {
      continue;
    }
    const double t0 = history.time_at(i);
    const double offset = (target - start) / history.rdts[i];
    out.push_back({t0 + std::clamp(offset, 0.0, history.interval_years), direction});
  }
  return out;
}

std::string_view to_string(AgeConvention convention) {
  switch (convention) {
    case AgeConvention::all_crossings:
      return "all-crossings";
    case AgeConvention::first_crossing:
      return "first-crossing";
    case AgeConvention::occupancy:
      return "occupancy";
  }
  return "unknown";
}

AgeConvention parse_age_convention(std::string_view text) {
  for (auto c : {AgeConvention::all_crossings, AgeConvention::first_crossing, AgeConvention::occupancy}) {
    if (text == to_string(c)) return c;
  }
  throw DomainError(fmt::format("unknown age convention `{}`", text));
}

std::vector<double> observed_ages(const GrowthHistory& history, Diameter threshold,
                                  const InversionOptions& options) {
  std::vector<double> ages;
  switch (options.convention) {
    case AgeConvention::all_crossings:
      for (const auto& c : crossing_times(history, threshold)) ages.push_back(c.age);
      break;
    case AgeConvention::first_crossing:
      for (const auto& c : crossing_times(history, threshold)) {
        if (c.direction == Direction::up) {
          ages.push_back(c.age);
          break;
        }
      }
      break;
    case AgeConvention::occupancy: {
      if (!(options.occupancy_bin_width > 0.0)) throw DomainError("occupancy bin width must be positive");
      const double half = 0.5 * options.occupancy_bin_width;
      const double centre = std::log(threshold.cm);
      for (std::size_t i = 1; i < history.volumes.size(); ++i) {
        const double offset = std::log(diameter_of(history.volumes[i]).cm) - centre;
        if (offset >= -half && offset < half) ages.push_back(history.time_at(i));
      }
      break;
    }
  }
  return ages;
}

std::vector<double> percentiles(std::span<const double> values, std::span<const double> levels) {
  if (values.empty()) throw DomainError("percentiles: no values");
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  std::vector<double> out;
  out.reserve(levels.size());
  for (double level : levels) {
    if (!(level > 0.0 && level < 1.0)) {
      throw DomainError(fmt::format("percentile level must lie in (0, 1), got {}", level));
    }
    const double rank = level * static_cast<double>(sorted.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(rank));
    const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
    const double frac = rank - static_cast<double>(lo);
    out.push_back(sorted[lo] + frac * (sorted[hi] - sorted[lo]));
  }
  return out;
}

const AgeRow* AgeTable::find(double diameter_cm) const {
  auto it = std::find_if(rows.begin(), rows.end(),
                         [&](const AgeRow& r) { return r.diameter_cm == diameter_cm; });
  return it == rows.end() ? nullptr : &*it;
}

AgeTable build_age_table(std::span<const GrowthHistory> ensemble, const DiameterGrid& grid,
                         const InversionOptions& options) {
  if (ensemble.empty()) throw DomainError("build_age_table: empty ensemble");
  AgeTable table;
  table.n_histories = ensemble.size();
  table.n_truncated = count_truncated(ensemble);
  table.options = options;
  for (double d : grid.thresholds()) {
    AgeRow row;
    row.diameter_cm = d;
    for (const auto& history : ensemble) {
      auto ages = observed_ages(history, Diameter{d}, options);
      row.ages.insert(row.ages.end(), ages.begin(), ages.end());
    }
    row.n_observations = row.ages.size();
    if (!row.ages.empty()) {
      const auto q = percentiles(row.ages, kReportLevels);
      row.percentiles = AgePercentiles{q[0], q[1], q[2], q[3], q[4]};
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

void write_age_table_csv(std::ostream& out, const AgeTable& table) {
  out << "diameter_cm,p5,p25,p50,p75,p95,n_crossings\n";
  for (const auto& row : table.rows) {
    if (row.percentiles) {
      const auto& p = *row.percentiles;
      fmt::print(out, "{},{:.6f},{:.6f},{:.6f},{:.6f},{:.6f},{}\n", row.diameter_cm, p.p5, p.p25,
                 p.p50, p.p75, p.p95, row.n_observations);
    } else {
      fmt::print(out, "{},,,,,,{}\n", row.diameter_cm, row.n_observations);
    }
  }
}

namespace {

double parse_double(std::string_view field, std::size_t line_no) {
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc{} || ptr != field.data() + field.size()) {
    throw ParseError(fmt::format("line {}: cannot parse `{}` as a number", line_no, field));
  }
  return value;
}

}  // namespace

AgeTable read_age_table_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line.rfind("diameter_cm,p5,p25,p50,p75,p95,n_crossings", 0) != 0) {
    throw ParseError("age table CSV: missing header");
  }
  AgeTable table;
  std::vector<double> diameters;
  for (std::size_t line_no = 2; std::getline(in, line); ++line_no) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::stringstream ss(line);
    for (std::string f; std::getline(ss, f, ',');) fields.push_back(f);
    if (fields.size() == 6 && line.back() == ',') fields.emplace_back();
    if (fields.size() != 7) throw ParseError(fmt::format("line {}: expected 7 fields", line_no));
    AgeRow row;
    row.diameter_cm = parse_double(fields[0], line_no);
    row.n_observations = static_cast<std::size_t>(parse_double(fields[6], line_no));
    if (!fields[1].empty()) {
      row.percentiles = AgePercentiles{parse_double(fields[1], line_no), parse_double(fields[2], line_no),
                                       parse_double(fields[3], line_no), parse_double(fields[4], line_no),
                                       parse_double(fields[5], line_no)};
    }
    diameters.push_back(row.diameter_cm);
    table.rows.push_back(std::move(row));
  }
  DiameterGrid check(diameters);
  return table;
}

nlohmann::json age_table_to_json(const AgeTable& table) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& row : table.rows) {
    nlohmann::json r{{"diameter_cm", row.diameter_cm}, {"n_crossings", row.n_observations}};
    if (row.percentiles) {
      const auto& p = *row.percentiles;
      r["p5"] = p.p5;
      r["p25"] = p.p25;
      r["p50"] = p.p50;
      r["p75"] = p.p75;
      r["p95"] = p.p95;
    } else {
      for (const char* key : {"p5", "p25", "p50", "p75", "p95"}) r[key] = nullptr;
    }
    rows.push_back(std::move(r));
  }
  return {{"rows", std::move(rows)},
          {"n_histories", table.n_histories},
          {"n_truncated", table.n_truncated},
          {"age_convention", to_string(table.options.convention)},
          {"occupancy_bin_width", table.options.occupancy_bin_width}};
}

AgeTable age_table_from_json(const nlohmann::json& doc) {
  try {
    AgeTable table;
    table.n_histories = doc.value("n_histories", std::size_t{0});
    table.n_truncated = doc.value("n_truncated", std::size_t{0});
    if (doc.contains("age_convention")) {
      table.options.convention = parse_age_convention(doc.at("age_convention").get<std::string>());
    }
    table.options.occupancy_bin_width = doc.value("occupancy_bin_width", 0.1);
    std::vector<double> diameters;
    for (const auto& r : doc.at("rows")) {
      AgeRow row;
      row.diameter_cm = r.at("diameter_cm").get<double>();
      row.n_observations = r.value("n_crossings", std::size_t{0});
      if (!r.at("p50").is_null()) {
        row.percentiles = AgePercentiles{r.at("p5").get<double>(), r.at("p25").get<double>(),
                                         r.at("p50").get<double>(), r.at("p75").get<double>(),
                                         r.at("p95").get<double>()};
      }
      diameters.push_back(row.diameter_cm);
      table.rows.push_back(std::move(row));
    }
    DiameterGrid check(diameters);
    return table;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(fmt::format("age table JSON: {}", e.what()));
  }
}

}  // namespace tumorage
