#pragma once

#include <cstddef>
#include <vector>

#include "tumorage/random.hpp"
#include "tumorage/rdt_model.hpp"

namespace tumorage {

struct CorrelationConfig {
  // Lag-1 correlation of the latent Gaussian series, in [0, 1).
  double rho = 0.0;
};

/// Serially correlated RDT stream via a Gaussian copula.
///
/// A stationary AR(1) series x_{i+1} = rho x_i + sqrt(1 - rho^2) e_i, x_0 ~ N(0, 1), is
/// pushed through the standard normal CDF and then the mixture quantile, so every value
/// has exactly the mixture marginal. The correlation of the RDT values themselves is
/// somewhat smaller than rho.
class CorrelatedRdtSampler {
 public:
  CorrelatedRdtSampler(const RdtMixture& model, CorrelationConfig config);

  double next(Rng& rng);

  // Latent Gaussian value behind the most recent draw.
  double last_latent() const { return latent_; }

 private:
  RdtMixture model_;
  double rho_;
  double innovation_scale_;
  double latent_ = 0.0;
  bool started_ = false;
};

std::vector<double> correlated_rdt_sequence(const RdtMixture& model, CorrelationConfig config,
                                            Rng& rng, std::size_t length);

}  // namespace tumorage
