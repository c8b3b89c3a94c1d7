#include "zpf/statistics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "zpf/error.hpp"
#include "zpf/format.hpp"

namespace zpf {

MomentReport moments(std::span<const double> samples) {
  require(samples.size() >= 2, "moments need at least two samples");
  for (double x : samples) require(std::isfinite(x), "moments: non-finite sample");

  const double n = static_cast<double>(samples.size());
  double mean = 0.0;
  for (double x : samples) mean += x;
  mean /= n;

  double m2 = 0.0, m3 = 0.0, m4 = 0.0;
  for (double x : samples) {
    const double d = x - mean;
    const double d2 = d * d;
    m2 += d2;
    m3 += d2 * d;
    m4 += d2 * d2;
  }
  m2 /= n;
  m3 /= n;
  m4 /= n;

  MomentReport r;
  r.count = samples.size();
  r.mean = mean;
  r.variance = m2 * n / (n - 1.0);
  constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
  r.skewness = kNaN;
  r.excess_kurtosis = kNaN;
  if (m2 > 0.0 && n >= 3.0) r.skewness = m3 / std::pow(m2, 1.5) * std::sqrt(n * (n - 1.0)) / (n - 2.0);
  if (m2 > 0.0 && n >= 4.0) {
    const double g2 = m4 / (m2 * m2) - 3.0;
    r.excess_kurtosis = ((n + 1.0) * g2 + 6.0) * (n - 1.0) / ((n - 2.0) * (n - 3.0));
  }
  r.se_mean = std::sqrt(r.variance / n);
  r.se_variance = std::sqrt(std::max(0.0, (m4 - r.variance * r.variance * (n - 3.0) / (n - 1.0)) / n));
  return r;
}

double ks_critical_coefficient(double alpha) {
  require(alpha > 0.0 && alpha < 1.0, "significance must lie in (0, 1)");
  return std::sqrt(-0.5 * std::log(0.5 * alpha));
}

KSResult ks_test(std::span<const double> samples, const std::function<double(double)>& cdf, double alpha) {
  require(samples.size() >= 10, "ks_test needs at least 10 samples");
  std::vector<double> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end());

  const double n = static_cast<double>(sorted.size());
  double d = 0.0;
  double previous = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const double f = cdf(sorted[i]);
    if (!(f >= 0.0 && f <= 1.0)) throw ValidationError("ks_test: cdf value outside [0, 1]");
    if (f < previous - 1e-12) throw ValidationError("ks_test: cdf is not monotone over the samples");
    previous = f;
    const double i_d = static_cast<double>(i);
    d = std::max({d, (i_d + 1.0) / n - f, f - i_d / n});
  }

  KSResult r;
  r.statistic = std::clamp(d, 0.0, 1.0);
  r.n = sorted.size();
  r.alpha = alpha;
  r.critical_value = ks_critical_coefficient(alpha) / std::sqrt(n);
  r.pass = r.statistic < r.critical_value;
  return r;
}

Histogram histogram(std::span<const double> samples, std::size_t bins, double lo, double hi) {
  require(bins >= 1, "histogram needs at least one bin");
  require(std::isfinite(lo) && std::isfinite(hi) && lo < hi, "histogram range must satisfy lo < hi");
  Histogram h;
  h.edges.resize(bins + 1);
  for (std::size_t i = 0; i <= bins; ++i)
    h.edges[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(bins);
  h.edges.back() = hi;

  std::vector<std::size_t> counts(bins, 0);
  const double width = (hi - lo) / static_cast<double>(bins);
  for (double x : samples) {
    if (!(x >= lo && x <= hi)) continue;
    auto b = static_cast<std::size_t>((x - lo) / width);
    b = std::min(b, bins - 1);
    ++counts[b];
    ++h.in_range;
  }
  h.total = samples.size();
  h.densities.assign(bins, 0.0);
  if (h.total > 0)
    for (std::size_t b = 0; b < bins; ++b)
      h.densities[b] = static_cast<double>(counts[b]) / (static_cast<double>(h.total) * (h.edges[b + 1] - h.edges[b]));
  return h;
}

void to_json(nlohmann::json& j, const MomentReport& r) {
  j = {{"count", r.count},         {"mean", r.mean},
       {"variance", r.variance},   {"skewness", r.skewness},
       {"excess_kurtosis", r.excess_kurtosis},
       {"se_mean", r.se_mean},     {"se_variance", r.se_variance}};
}

void to_json(nlohmann::json& j, const KSResult& r) {
  j = {{"statistic", r.statistic},
       {"n", r.n},
       {"alpha", r.alpha},
       {"critical_value", r.critical_value},
       {"pass", r.pass}};
}

void to_json(nlohmann::json& j, const Histogram& h) {
  j = {{"edges", h.edges}, {"densities", h.densities}, {"total", h.total}, {"in_range", h.in_range}};
}

void write_csv(std::ostream& os, const Histogram& h) {
  os << "lo,hi,density\n";
  for (std::size_t b = 0; b < h.densities.size(); ++b)
    os << format_double(h.edges[b]) << ',' << format_double(h.edges[b + 1]) << ',' << format_double(h.densities[b])
       << '\n';
}

}  // namespace zpf
