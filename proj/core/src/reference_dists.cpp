#include "zpf/reference_dists.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>

#include "zpf/error.hpp"

namespace zpf {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kInf = std::numeric_limits<double>::infinity();

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void check_level(int n) {
  require(n >= 0 && n <= kMaxOscillatorLevel, "oscillator level must lie in [0, 170]");
}

}  // namespace

double classical_oscillator_pdf(double x, double amplitude) {
  require(amplitude > 0.0, "amplitude must be positive");
  const double gap = amplitude * amplitude - x * x;
  if (gap < 0.0) return 0.0;
  if (gap == 0.0) return kInf;
  return 1.0 / (kPi * std::sqrt(gap));
}

double arcsine_cdf(double x, double amplitude) {
  require(amplitude > 0.0, "amplitude must be positive");
  if (x <= -amplitude) return 0.0;
  if (x >= amplitude) return 1.0;
  return std::asin(x / amplitude) / kPi + 0.5;
}

std::vector<double> hermite_functions(int n, double y) {
  check_level(n);
  std::vector<double> phi(static_cast<std::size_t>(n) + 1);
  phi[0] = std::exp(-0.5 * y * y) / std::sqrt(std::sqrt(kPi));
  if (n >= 1) phi[1] = std::numbers::sqrt2 * y * phi[0];
  for (int k = 1; k < n; ++k) {
    const double kk = k;
    phi[k + 1] = std::sqrt(2.0 / (kk + 1.0)) * y * phi[k] - std::sqrt(kk / (kk + 1.0)) * phi[k - 1];
  }
  return phi;
}

double quantum_oscillator_pdf(int n, double x, double alpha) {
  require(alpha > 0.0, "alpha must be positive");
  const double phi = hermite_functions(n, alpha * x).back();
  return alpha * phi * phi;
}

double quantum_oscillator_cdf(int n, double x, double alpha) {
  require(alpha > 0.0, "alpha must be positive");
  const double y = alpha * x;
  const auto phi = hermite_functions(n, y);
  double f = 0.5 * std::erfc(-y);
  for (int k = 1; k <= n; ++k) f -= phi[k] * phi[k - 1] / std::sqrt(2.0 * k);
  return std::clamp(f, 0.0, 1.0);
}

double gaussian_mode_pdf(double value, double sigma) {
  require(sigma > 0.0, "sigma must be positive");
  return std::exp(-0.5 * value * value / (sigma * sigma)) / std::sqrt(2.0 * kPi * sigma * sigma);
}

double gaussian_cdf(double value, double sigma) {
  require(sigma > 0.0, "sigma must be positive");
  return 0.5 * std::erfc(-value / (sigma * std::numbers::sqrt2));
}

AnalyticDistribution::AnalyticDistribution(Kind kind) : kind_(kind) {
  std::visit(Overloaded{[](const GaussianMode& d) { require(d.sigma > 0.0, "sigma must be positive"); },
                        [](const GaussianTotal3D& d) { require(d.sigma > 0.0, "sigma must be positive"); },
                        [](const Arcsine& d) { require(d.amplitude > 0.0, "amplitude must be positive"); },
                        [](const ClassicalOscillator& d) { require(d.amplitude > 0.0, "amplitude must be positive"); },
                        [](const QuantumOscillator& d) {
                          check_level(d.n);
                          require(d.alpha > 0.0, "alpha must be positive");
                        }},
             kind_);
}

double AnalyticDistribution::pdf(double x) const {
  return std::visit(Overloaded{[x](const GaussianMode& d) { return gaussian_mode_pdf(x, d.sigma); },
                               [x](const GaussianTotal3D& d) { return gaussian_mode_pdf(x, d.sigma); },
                               [x](const Arcsine& d) { return classical_oscillator_pdf(x, d.amplitude); },
                               [x](const ClassicalOscillator& d) { return classical_oscillator_pdf(x, d.amplitude); },
                               [x](const QuantumOscillator& d) { return quantum_oscillator_pdf(d.n, x, d.alpha); }},
                    kind_);
}

double AnalyticDistribution::cdf(double x) const {
  return std::visit(Overloaded{[x](const GaussianMode& d) { return gaussian_cdf(x, d.sigma); },
                               [x](const GaussianTotal3D& d) { return gaussian_cdf(x, d.sigma); },
                               [x](const Arcsine& d) { return arcsine_cdf(x, d.amplitude); },
                               [x](const ClassicalOscillator& d) { return arcsine_cdf(x, d.amplitude); },
                               [x](const QuantumOscillator& d) { return quantum_oscillator_cdf(d.n, x, d.alpha); }},
                    kind_);
}

std::pair<double, double> AnalyticDistribution::support() const {
  return std::visit(Overloaded{[](const Arcsine& d) { return std::pair{-d.amplitude, d.amplitude}; },
                               [](const ClassicalOscillator& d) { return std::pair{-d.amplitude, d.amplitude}; },
                               [](const auto&) { return std::pair{-kInf, kInf}; }},
                    kind_);
}

double AnalyticDistribution::pdf3(const Vec3& v) const {
  const auto* d = std::get_if<GaussianTotal3D>(&kind_);
  require(d != nullptr, "pdf3 is defined only for GaussianTotal3D");
  const double var = d->sigma * d->sigma;
  return std::pow(2.0 * kPi * var, -1.5) * std::exp(-0.5 * dot(v, v) / var);
}

double total_field_sigma(double omega_cutoff, const PhysicalConstants& constants) {
  require(omega_cutoff > 0.0, "omega_cutoff must be positive");
  const double c3 = constants.c * constants.c * constants.c;
  const double w4 = std::pow(omega_cutoff, 4);
  return std::sqrt(constants.hbar * w4 / (24.0 * kPi * kPi * constants.eps0 * c3));
}

double zero_point_energy_density(double omega, const PhysicalConstants& constants) {
  require(omega >= 0.0, "omega must be non-negative");
  return constants.hbar * omega * omega * omega / (2.0 * kPi * kPi * std::pow(constants.c, 3));
}

double zero_point_energy_in_band(double lo, double hi, const PhysicalConstants& constants) {
  require(0.0 <= lo && lo <= hi, "band must satisfy 0 <= lo <= hi");
  return constants.hbar * (std::pow(hi, 4) - std::pow(lo, 4)) / (8.0 * kPi * kPi * std::pow(constants.c, 3));
}

std::vector<double> lattice_energy_density(const ModeGrid& grid, std::span<const double> edges) {
  require(edges.size() >= 2, "need at least one bin");
  const double volume = grid.require_volume();
  std::vector<double> out(edges.size() - 1, 0.0);
  for (const auto& m : grid.modes())
    for (std::size_t b = 0; b + 1 < edges.size(); ++b)
      if (m.omega > edges[b] && m.omega <= edges[b + 1]) {
        out[b] += 0.5 * grid.constants().hbar * m.omega;
        break;
      }
  for (double& e : out) e /= volume;
  return out;
}

double mode_energy(double sigma, double volume, const PhysicalConstants& constants) {
  require(sigma >= 0.0 && volume > 0.0, "mode_energy needs sigma >= 0 and volume > 0");
  return constants.eps0 * volume * sigma * sigma;
}

double gaussian_generating(double s, double sigma) { return std::exp(-0.5 * s * s * sigma * sigma); }

double boyer_generating(double s, const Vec3& direction, const ModeGrid& grid) {
  const Vec3 dir = normalized(direction);
  double value = 1.0;
  for (const auto& m : grid.modes()) {
    const double arg = std::numbers::sqrt2 * m.sigma * s * dot(dir, m.eps);
    value *= std::cyl_bessel_j(0.0, std::abs(arg));
  }
  return value;
}

double lattice_component_variance(const ModeGrid& grid, const Vec3& direction) {
  const Vec3 dir = normalized(direction);
  double total = 0.0;
  for (const auto& m : grid.modes()) {
    const double c = dot(dir, m.eps);
    total += m.sigma * m.sigma * c * c;
  }
  return total;
}

GeneratingFunction gaussian_gf(double sigma) {
  return {"gaussian", [sigma](double s) { return gaussian_generating(s, sigma); }};
}

GeneratingFunction bessel_product_gf(const ModeGrid& grid, const Vec3& direction) {
  const Vec3 dir = normalized(direction);
  std::vector<double> coeff;
  coeff.reserve(grid.size());
  for (const auto& m : grid.modes()) {
    const double c = std::abs(std::numbers::sqrt2 * m.sigma * dot(dir, m.eps));
    if (c > 0.0) coeff.push_back(c);
  }
  return {"bessel_product", [coeff = std::move(coeff)](double s) {
            double value = 1.0;
            for (double c : coeff) value *= std::cyl_bessel_j(0.0, c * std::abs(s));
            return value;
          }};
}

GeneratingFunction smoothed(GeneratingFunction gf, double width) {
  require(width > 0.0, "smoothing width must be positive");
  auto name = gf.name() + "*gaussian";
  return {std::move(name), [gf = std::move(gf), width](double s) { return gf(s) * gaussian_generating(s, width); }};
}

std::vector<double> invert_characteristic(const GeneratingFunction& gf, const InversionRange& range,
                                          std::span<const double> x) {
  require(range.s_max > 0.0 && range.intervals >= 2, "inversion range needs s_max > 0 and >= 2 intervals");
  if (std::abs(gf(range.s_max)) > 1e-10)
    throw ConvergenceError("insufficient s-range: |g(s_max)| = " + std::to_string(std::abs(gf(range.s_max))) +
                           " exceeds 1e-10");

  const std::size_t n = range.intervals;
  const double h = range.s_max / static_cast<double>(n);
  std::vector<double> g(n + 1);
  for (std::size_t i = 0; i <= n; ++i) g[i] = gf(h * static_cast<double>(i));
  g.front() *= 0.5;
  g.back() *= 0.5;

  std::vector<double> pdf(x.size());
  for (std::size_t j = 0; j < x.size(); ++j) {
    // cos(s_i x) by complex rotation, re-anchored periodically to bound drift.
    const std::complex<double> step = std::polar(1.0, h * x[j]);
    std::complex<double> phase = 1.0;
    double sum = 0.0;
    for (std::size_t i = 0; i <= n; ++i) {
      if (i % 512 == 0) phase = std::polar(1.0, h * static_cast<double>(i) * x[j]);
      sum += g[i] * phase.real();
      phase *= step;
    }
    pdf[j] = sum * h / kPi;
  }

  if (range.renormalize && x.size() >= 2) {
    double mass = 0.0;
    for (std::size_t j = 0; j + 1 < x.size(); ++j) mass += 0.5 * (pdf[j] + pdf[j + 1]) * (x[j + 1] - x[j]);
    require(mass > 0.0, "inverted density has non-positive mass on the x grid");
    for (double& p : pdf) p /= mass;
  }
  return pdf;
}

}  // namespace zpf
