#pragma once

// Brute-force references used by tests only. Kept independent of the library's closed forms.

#include <cmath>
#include <vector>

#include "tumorage/growth_sim.hpp"

namespace tumorage::oracle {

// Walks each interval in `substeps` equal pieces, recomputing the volume from the interval
// start, and reports the end of each piece in which the volume passes `threshold_ml`.
inline std::vector<double> substep_crossings(const GrowthHistory& h, double threshold_ml, int substeps) {
  std::vector<double> out;
  const double dt = h.interval_years / substeps;
  double v = h.volumes.front();
  for (std::size_t i = 0; i < h.n_steps(); ++i) {
    const double start = h.volumes[i];
    for (int j = 1; j <= substeps; ++j) {
      const double next = start * std::exp2(h.rdts[i] * dt * j);
      if ((v < threshold_ml && next >= threshold_ml) || (v > threshold_ml && next <= threshold_ml)) {
        out.push_back(h.time_at(i) + dt * j);
      }
      v = next;
    }
    v = h.volumes[i + 1];
  }
  return out;
}

// Pearson correlation of (x_i, x_{i+1}).
inline double lag1_correlation(const std::vector<double>& x) {
  const std::size_t n = x.size() - 1;
  double ma = 0.0;
  double mb = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    ma += x[i];
    mb += x[i + 1];
  }
  ma /= static_cast<double>(n);
  mb /= static_cast<double>(n);
  double sab = 0.0;
  double saa = 0.0;
  double sbb = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sab += (x[i] - ma) * (x[i + 1] - mb);
    saa += (x[i] - ma) * (x[i] - ma);
    sbb += (x[i + 1] - mb) * (x[i + 1] - mb);
  }
  return sab / std::sqrt(saa * sbb);
}

}  // namespace tumorage::oracle
