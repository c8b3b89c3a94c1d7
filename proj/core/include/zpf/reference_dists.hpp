#pragma once

// Analytic target distributions and generating functions.

#include <cstddef>
#include <functional>
#include <limits>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "zpf/mode_lattice.hpp"
#include "zpf/vec3.hpp"

namespace zpf {

// ---- closed-form densities -------------------------------------------------

/// Position density of a fixed-amplitude sinusoid, 1/(pi sqrt(A^2 - x^2)) on |x| < A.
/// Infinite at |x| = A, zero outside.
double classical_oscillator_pdf(double x, double amplitude);

/// (1/pi) asin(x/A) + 1/2 on (-A, A), clamped to 0 and 1 outside.
double arcsine_cdf(double x, double amplitude);

/// Normalized Hermite functions phi_0(y) .. phi_n(y), from the recurrence
/// phi_{k+1} = sqrt(2/(k+1)) y phi_k - sqrt(k/(k+1)) phi_{k-1}.
std::vector<double> hermite_functions(int n, double y);

/// Position density of oscillator level n with length scale 1/alpha:
/// alpha / (sqrt(pi) 2^n n!) H_n(alpha x)^2 exp(-alpha^2 x^2). Levels above 170 are rejected.
double quantum_oscillator_pdf(int n, double x, double alpha);

/// Cumulative of quantum_oscillator_pdf, via F_k = F_{k-1} - phi_k phi_{k-1} / sqrt(2k).
double quantum_oscillator_cdf(int n, double x, double alpha);

inline constexpr int kMaxOscillatorLevel = 170;

double gaussian_mode_pdf(double value, double sigma);
double gaussian_cdf(double value, double sigma);

// ---- distribution objects --------------------------------------------------

struct GaussianMode {
  double sigma = 1.0;
};
/// Isotropic 3D Gaussian with per-component scale sigma. pdf/cdf act on one component.
struct GaussianTotal3D {
  double sigma = 1.0;
};
struct Arcsine {
  double amplitude = 1.0;
};
struct QuantumOscillator {
  int n = 0;
  double alpha = 1.0;
};
struct ClassicalOscillator {
  double amplitude = 1.0;
};

class AnalyticDistribution {
 public:
  using Kind = std::variant<GaussianMode, GaussianTotal3D, Arcsine, QuantumOscillator, ClassicalOscillator>;

  explicit AnalyticDistribution(Kind kind);

  const Kind& kind() const { return kind_; }
  double pdf(double x) const;
  double cdf(double x) const;
  /// Closed interval outside of which pdf vanishes (infinite for Gaussians).
  std::pair<double, double> support() const;
  /// Joint density of the full vector (GaussianTotal3D only).
  double pdf3(const Vec3& v) const;

  std::function<double(double)> cdf_function() const {
    return [d = *this](double x) { return d.cdf(x); };
  }

 private:
  Kind kind_;
};

// ---- zero-point field scales ---------------------------------------------

/// Per-component standard deviation of the total field with a hard frequency
/// cutoff: sqrt(hbar w_c^4 / (24 pi^2 eps0 c^3)).
double total_field_sigma(double omega_cutoff, const PhysicalConstants& constants = {});

/// hbar w^3 / (2 pi^2 c^3), energy per unit volume per unit angular frequency.
double zero_point_energy_density(double omega, const PhysicalConstants& constants = {});

/// Integral of zero_point_energy_density over [lo, hi].
double zero_point_energy_in_band(double lo, double hi, const PhysicalConstants& constants = {});

/// Lattice energy per unit volume, sum of hbar w / 2 over modes with edges[i] < w <= edges[i+1].
std::vector<double> lattice_energy_density(const ModeGrid& grid, std::span<const double> edges);

/// eps0 V sigma^2; equals hbar w / 2 when sigma is the mode scale.
double mode_energy(double sigma, double volume, const PhysicalConstants& constants = {});

// ---- generating functions --------------------------------------------------

/// Real, even characteristic function g(s) of a scalar observable.
class GeneratingFunction {
 public:
  GeneratingFunction(std::string name, std::function<double(double)> eval)
      : name_(std::move(name)), eval_(std::move(eval)) {}

  double operator()(double s) const { return eval_(s); }
  const std::string& name() const { return name_; }

 private:
  std::string name_;
  std::function<double(double)> eval_;
};

/// exp(-s^2 sigma^2 / 2).
double gaussian_generating(double s, double sigma);

/// Product over modes of J0(sqrt(2) sigma_k s (s_hat . eps_k)): the Boyer field
/// component along s_hat.
double boyer_generating(double s, const Vec3& direction, const ModeGrid& grid);

/// Variance of the field component along `direction`, sum_k sigma_k^2 (s_hat . eps_k)^2.
double lattice_component_variance(const ModeGrid& grid, const Vec3& direction);

GeneratingFunction gaussian_gf(double sigma);
GeneratingFunction bessel_product_gf(const ModeGrid& grid, const Vec3& direction);
/// gf multiplied by exp(-s^2 width^2 / 2): the observable plus an independent
/// Gaussian of standard deviation `width`. Lets slowly decaying functions be inverted.
GeneratingFunction smoothed(GeneratingFunction gf, double width);

struct InversionRange {
  double s_max = 40.0;
  std::size_t intervals = 4000;
  bool renormalize = true;
};

/// pdf(x) = (1/pi) int_0^s_max g(s) cos(s x) ds by the trapezoid rule.
/// Throws ConvergenceError ("insufficient s-range") when |g(s_max)| > 1e-10.
/// With renormalize set, the result is scaled to unit trapezoid mass over x.
std::vector<double> invert_characteristic(const GeneratingFunction& gf, const InversionRange& range,
                                          std::span<const double> x);

}  // namespace zpf
