#pragma once

#include <cstddef>
#include <functional>
#include <ostream>
#include <span>
#include <vector>

#include <nlohmann/json.hpp>

namespace zpf {

struct MomentReport {
  std::size_t count = 0;
  double mean = 0.0;
  double variance = 0.0;  // unbiased
  double skewness = 0.0;  // adjusted Fisher-Pearson; NaN below 3 samples
  double excess_kurtosis = 0.0;  // unbiased G2, Gaussian -> 0; NaN below 4 samples
  double se_mean = 0.0;
  double se_variance = 0.0;
};

/// Sample moments. Needs at least two finite samples.
MomentReport moments(std::span<const double> samples);

struct KSResult {
  double statistic = 0.0;
  std::size_t n = 0;
  double alpha = 0.0;
  double critical_value = 0.0;
  bool pass = false;
};

/// Asymptotic two-sided Kolmogorov critical coefficient sqrt(-ln(alpha/2) / 2),
/// 1.628 at alpha = 0.01 and 1.358 at alpha = 0.05.
double ks_critical_coefficient(double alpha);

/// One-sample two-sided Kolmogorov-Smirnov test against a continuous cdf.
/// Needs n >= 10; throws ValidationError if the cdf decreases over the sorted samples.
KSResult ks_test(std::span<const double> samples, const std::function<double(double)>& cdf, double alpha);

struct Histogram {
  std::vector<double> edges;
  std::vector<double> densities;
  std::size_t total = 0;
  std::size_t in_range = 0;
};

/// Density-normalized histogram: sum(density * width) = in-range fraction.
Histogram histogram(std::span<const double> samples, std::size_t bins, double lo, double hi);

void to_json(nlohmann::json& j, const MomentReport& r);
void to_json(nlohmann::json& j, const KSResult& r);
void to_json(nlohmann::json& j, const Histogram& h);
void write_csv(std::ostream& os, const Histogram& h);

}  // namespace zpf
