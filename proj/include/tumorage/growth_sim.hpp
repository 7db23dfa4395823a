#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <vector>

#include "tumorage/geometry.hpp"
#include "tumorage/random.hpp"
#include "tumorage/rdt_model.hpp"

namespace tumorage {

struct SimulationConfig {
  Volume v0{0.01};
  Volume v_max{4200.0};
  double interval_years = 245.0 / 365.0;
  std::size_t n_histories = 10000;
  std::uint64_t seed = 0;
  double rho = 0.0;
  std::size_t max_steps = 10000;

  /// Throws DomainError when the fields are inconsistent.
  void validate() const;
};

/// One simulated trajectory sampled at the interval boundaries.
///
/// Point i sits at t_i = i * interval (years since t0) with volume volumes[i]; rdts[i] is
/// the growth rate applied over [t_i, t_{i+1}], so volumes has one more entry than rdts.
struct GrowthHistory {
  double interval_years = 0.0;
  std::vector<double> volumes;
  std::vector<double> rdts;
  // Hit the step cap before exceeding v_max.
  bool truncated = false;

  std::size_t n_steps() const { return rdts.size(); }
  double time_at(std::size_t i) const { return static_cast<double>(i) * interval_years; }
  double final_volume() const { return volumes.back(); }

  friend bool operator==(const GrowthHistory&, const GrowthHistory&) = default;
};

/// v * 2^(h * rdt). Throws OverflowError if the result is not a positive finite volume.
Volume grow_step(Volume v, double rdt, double interval_years);

// Supplies the RDT for the next interval.
using RdtSource = std::function<double()>;

/// Grows from config.v0 until the volume first exceeds config.v_max, or flags the history
/// truncated after config.max_steps intervals.
GrowthHistory simulate_history(const RdtSource& next_rdt, const SimulationConfig& config);

/// Draws RDTs i.i.d. from `model` when config.rho == 0, otherwise through the copula sampler.
GrowthHistory simulate_history(const RdtMixture& model, const SimulationConfig& config, Rng& rng);

/// config.n_histories histories; history k uses Rng(derive_seed(config.seed, k)), so the
/// result is identical for any `threads` (0 means hardware concurrency).
std::vector<GrowthHistory> simulate_ensemble(const RdtMixture& model,
                                             const SimulationConfig& config,
                                             unsigned threads = 1);

std::size_t count_truncated(std::span<const GrowthHistory> ensemble);

/// CSV with columns history_id,t_years,volume_ml,diameter_cm; one row per point.
void write_ensemble_csv(std::ostream& out, std::span<const GrowthHistory> ensemble);

}  // namespace tumorage
