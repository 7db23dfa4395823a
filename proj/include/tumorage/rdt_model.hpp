#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>
#include <vector>

#include "tumorage/random.hpp"

namespace tumorage {

/// Distribution of reciprocal doubling time (doublings per year).
///
/// With probability `p_negative` the value is -X with X ~ Exp(lambda_neg) (a shrinking
/// tumor); otherwise it is +Y with Y ~ Exp(lambda_pos). Both lambdas are rates, so the
/// branch means are 1/lambda.
struct RdtMixture {
  double p_negative;
  double lambda_pos;
  double lambda_neg;

  /// Throws DomainError when a parameter is outside its range.
  void validate() const;

  double cdf(double x) const;
  /// Inverse CDF for u in (0, 1).
  double quantile(double u) const;
  double sample(Rng& rng) const;
  double mean() const;

  friend bool operator==(const RdtMixture&, const RdtMixture&) = default;
};

/// p = 0.35, lambda_pos = 0.79, lambda_neg = 5.0.
RdtMixture default_model();

/// Per-branch maximum likelihood: p is the fraction of negative samples and each lambda is
/// the reciprocal mean magnitude of its branch. Zero counts as positive. Needs at least two
/// samples on each side of zero (InsufficientDataError otherwise).
RdtMixture fit(std::span<const double> samples);

/// One-sample Kolmogorov-Smirnov statistic of `samples` against `model`.
double ks_distance(const RdtMixture& model, std::span<const double> samples);

/// Reads an `rdt` CSV: one header line, then one value per line. Blank lines are skipped.
/// Throws ParseError listing every bad line number.
std::vector<double> read_rdt_csv(std::istream& in);
std::vector<double> read_rdt_csv(const std::filesystem::path& path);

}  // namespace tumorage
