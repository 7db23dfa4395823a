#include "tumorage/rdt_model.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <string>

#include <fmt/format.h>

#include "tumorage/errors.hpp"

namespace tumorage {

void RdtMixture::validate() const {
  if (!(p_negative >= 0.0 && p_negative <= 1.0)) {
    throw DomainError(fmt::format("p_negative must lie in [0, 1], got {}", p_negative));
  }
  if (!(lambda_pos > 0.0) || !std::isfinite(lambda_pos)) {
    throw DomainError(fmt::format("lambda_pos must be positive, got {}", lambda_pos));
  }
  if (!(lambda_neg > 0.0) || !std::isfinite(lambda_neg)) {
    throw DomainError(fmt::format("lambda_neg must be positive, got {}", lambda_neg));
  }
}

double RdtMixture::cdf(double x) const {
  if (std::isnan(x)) throw DomainError("cdf: argument is NaN");
  if (x <= 0.0) return p_negative * std::exp(lambda_neg * x);
  return p_negative + (1.0 - p_negative) * -std::expm1(-lambda_pos * x);
}

double RdtMixture::quantile(double u) const {
  if (!(u > 0.0 && u < 1.0)) {
    throw DomainError(fmt::format("quantile: probability must lie in (0, 1), got {}", u));
  }
  if (u <= p_negative) return std::log(u / p_negative) / lambda_neg;
  return -std::log1p(-(u - p_negative) / (1.0 - p_negative)) / lambda_pos;
}

double RdtMixture::sample(Rng& rng) const { return quantile(uniform_open01(rng)); }

double RdtMixture::mean() const {
  return (1.0 - p_negative) / lambda_pos - p_negative / lambda_neg;
}

RdtMixture default_model() { return RdtMixture{0.35, 0.79, 5.0}; }

RdtMixture fit(std::span<const double> samples) {
  std::size_t n_neg = 0;
  std::size_t n_pos = 0;
  double sum_neg = 0.0;
  double sum_pos = 0.0;
  for (double x : samples) {
    if (!std::isfinite(x)) throw DomainError("fit: non-finite sample");
    if (x < 0.0) {
      ++n_neg;
      sum_neg -= x;
    } else {
      ++n_pos;
      sum_pos += x;
    }
  }
  if (n_neg < 2 || n_pos < 2) {
    throw InsufficientDataError(fmt::format(
        "fit needs at least 2 negative and 2 non-negative samples, got {} and {}", n_neg, n_pos));
  }
  // An all-zero positive branch has no finite rate.
  if (!(sum_pos > 0.0)) throw InsufficientDataError("fit: positive branch has zero mean");

  RdtMixture model{static_cast<double>(n_neg) / static_cast<double>(samples.size()),
                   static_cast<double>(n_pos) / sum_pos, static_cast<double>(n_neg) / sum_neg};
  model.validate();
  return model;
}

double ks_distance(const RdtMixture& model, std::span<const double> samples) {
  if (samples.empty()) throw DomainError("ks_distance: no samples");
  std::vector<double> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end());
  const auto n = static_cast<double>(sorted.size());
  double worst = 0.0;
  for (std::size_t i = 0; i < sorted.size();) {
    // Ties form a single jump in the empirical CDF.
    std::size_t j = i;
    while (j < sorted.size() && sorted[j] == sorted[i]) ++j;
    const double f = model.cdf(sorted[i]);
    worst = std::max({worst, std::abs(f - static_cast<double>(i) / n),
                      std::abs(static_cast<double>(j) / n - f)});
    i = j;
  }
  return worst;
}

std::vector<double> read_rdt_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw ParseError("empty RDT file: expected header `rdt`");
  auto trim = [](std::string& s) {
    const auto first = s.find_first_not_of(" \t\r");
    const auto last = s.find_last_not_of(" \t\r");
    s = first == std::string::npos ? std::string{} : s.substr(first, last - first + 1);
  };
  trim(line);
  if (line != "rdt") throw ParseError(fmt::format("line 1: expected header `rdt`, got `{}`", line));

  std::vector<double> values;
  std::vector<std::size_t> bad_lines;
  for (std::size_t line_no = 2; std::getline(in, line); ++line_no) {
    trim(line);
    if (line.empty()) continue;
    double value = 0.0;
    const char* end = line.data() + line.size();
    auto [ptr, ec] = std::from_chars(line.data(), end, value);
    if (ec != std::errc{} || ptr != end || !std::isfinite(value)) {
      bad_lines.push_back(line_no);
      continue;
    }
    values.push_back(value);
  }
  if (!bad_lines.empty()) {
    throw ParseError(fmt::format("unparsable RDT values on line(s) {}", fmt::join(bad_lines, ", ")));
  }
  return values;
}

std::vector<double> read_rdt_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(fmt::format("cannot open {}", path.string()));
  return read_rdt_csv(in);
}

}  // namespace tumorage
