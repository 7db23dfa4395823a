#include "tumorage/correlated_sampler.hpp"

#include <cmath>

#include <fmt/format.h>

#include "tumorage/errors.hpp"
#include "tumorage/normal.hpp"

namespace tumorage {

CorrelatedRdtSampler::CorrelatedRdtSampler(const RdtMixture& model, CorrelationConfig config)
    : model_(model), rho_(config.rho), innovation_scale_(std::sqrt(1.0 - config.rho * config.rho)) {
  model_.validate();
  if (!(rho_ >= 0.0 && rho_ < 1.0)) {
    throw DomainError(fmt::format("rho must lie in [0, 1), got {}", rho_));
  }
}

double CorrelatedRdtSampler::next(Rng& rng) {
  const double eps = standard_normal(rng);
  latent_ = started_ ? rho_ * latent_ + innovation_scale_ * eps : eps;
  started_ = true;
  // Phi can round to exactly 0 or 1 beyond ~8 sigma; those lie outside quantile's domain.
  double u = normal_cdf(latent_);
  if (u <= 0.0) u = std::nextafter(0.0, 1.0);
  if (u >= 1.0) u = std::nextafter(1.0, 0.0);
  return model_.quantile(u);
}

std::vector<double> correlated_rdt_sequence(const RdtMixture& model, CorrelationConfig config,
                                            Rng& rng, std::size_t length) {
  if (length == 0) throw DomainError("correlated_rdt_sequence: length must be at least 1");
  CorrelatedRdtSampler sampler(model, config);
  std::vector<double> out;
  out.reserve(length);
  for (std::size_t i = 0; i < length; ++i) out.push_back(sampler.next(rng));
  return out;
}

}  // namespace tumorage
