#include "tumorage/growth_sim.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include <fmt/format.h>
#include <fmt/ostream.h>

#include "tumorage/correlated_sampler.hpp"
#include "tumorage/errors.hpp"
#include "tumorage/parallel.hpp"

namespace tumorage {

void SimulationConfig::validate() const {
  if (!(v0.ml > 0.0) || !std::isfinite(v0.ml)) {
    throw DomainError(fmt::format("v0 must be positive, got {}", v0.ml));
  }
  if (!(v_max.ml > v0.ml) || !std::isfinite(v_max.ml)) {
    throw DomainError(fmt::format("v_max must exceed v0, got {} <= {}", v_max.ml, v0.ml));
  }
  if (!(interval_years > 0.0) || !std::isfinite(interval_years)) {
    throw DomainError(fmt::format("interval must be positive, got {}", interval_years));
  }
  if (n_histories < 1) throw DomainError("n_histories must be at least 1");
  if (max_steps < 1) throw DomainError("max_steps must be at least 1");
  if (!(rho >= 0.0 && rho < 1.0)) throw DomainError(fmt::format("rho must lie in [0, 1), got {}", rho));
}

Volume grow_step(Volume v, double rdt, double interval_years) {
  if (!(v.ml > 0.0) || !(interval_years > 0.0)) {
    throw DomainError("grow_step: volume and interval must be positive");
  }
  const double next = std::exp2(interval_years * rdt) * v.ml;
  if (!std::isfinite(next) || !(next > 0.0)) {
    throw OverflowError(fmt::format("grow_step: {} mL * 2^({} * {}) is not representable", v.ml,
                                    interval_years, rdt));
  }
  return Volume{next};
}

GrowthHistory simulate_history(const RdtSource& next_rdt, const SimulationConfig& config) {
  config.validate();
  GrowthHistory history;
  history.interval_years = config.interval_years;
  history.volumes.push_back(config.v0.ml);
  Volume v = config.v0;
  while (v.ml <= config.v_max.ml) {
    if (history.rdts.size() == config.max_steps) {
      history.truncated = true;
      break;
    }
    const double rdt = next_rdt();
    v = grow_step(v, rdt, config.interval_years);
    history.rdts.push_back(rdt);
    history.volumes.push_back(v.ml);
  }
  return history;
}

GrowthHistory simulate_history(const RdtMixture& model, const SimulationConfig& config, Rng& rng) {
  if (config.rho == 0.0) {
    return simulate_history([&] { return model.sample(rng); }, config);
  }
  CorrelatedRdtSampler sampler(model, CorrelationConfig{config.rho});
  return simulate_history([&] { return sampler.next(rng); }, config);
}

std::vector<GrowthHistory> simulate_ensemble(const RdtMixture& model,
                                             const SimulationConfig& config, unsigned threads) {
  model.validate();
  config.validate();
  std::vector<GrowthHistory> ensemble(config.n_histories);
  parallel_for(ensemble.size(), threads, [&](std::size_t k) {
    Rng rng(derive_seed(config.seed, k));
    ensemble[k] = simulate_history(model, config, rng);
  });
  return ensemble;
}

std::size_t count_truncated(std::span<const GrowthHistory> ensemble) {
  return static_cast<std::size_t>(
      std::count_if(ensemble.begin(), ensemble.end(), [](const auto& h) { return h.truncated; }));
}

void write_ensemble_csv(std::ostream& out, std::span<const GrowthHistory> ensemble) {
  out << "history_id,t_years,volume_ml,diameter_cm\n";
  for (std::size_t k = 0; k < ensemble.size(); ++k) {
    const auto& h = ensemble[k];
    for (std::size_t i = 0; i < h.volumes.size(); ++i) {
      fmt::print(out, "{},{:.6f},{:.9g},{:.6f}\n", k, h.time_at(i), h.volumes[i],
                 diameter_of(h.volumes[i]).cm);
    }
  }
}

}  // namespace tumorage
