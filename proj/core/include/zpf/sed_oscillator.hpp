#pragma once

// Classical electron oscillator driven by a stochastic zero-point field,
// solved in the frequency domain:
//   q'' + nu0^2 q - gamma q''' = gamma' E,   q(nu) = h(nu) E(nu).

#include <complex>
#include <cstdint>

#include <nlohmann/json.hpp>

#include "zpf/fields.hpp"
#include "zpf/mode_lattice.hpp"
#include "zpf/reference_dists.hpp"

namespace zpf {

struct OscillatorParams {
  double nu0 = 1.0;          // natural angular frequency
  double gamma = 1e-6;       // radiation damping time
  double gamma_prime = 1.0;  // drive coefficient, charge / mass
  double mass = 1.0;

  /// gamma = e^2 / (6 pi eps0 m c^3), gamma' = e / m, mass = m.
  static OscillatorParams from_constants(double nu0, const PhysicalConstants& constants);

  void validate() const;

  /// The narrow-resonance closed forms need gamma * nu0 << 1; false above 1e-2.
  bool resonance_approximation_valid() const { return gamma * nu0 <= 1e-2; }

  friend bool operator==(const OscillatorParams&, const OscillatorParams&) = default;
};

void to_json(nlohmann::json& j, const OscillatorParams& p);
void from_json(const nlohmann::json& j, OscillatorParams& p);

/// h(nu) = gamma' / (nu0^2 - nu^2 + i gamma nu^3).
std::complex<double> transfer(double nu, const OscillatorParams& p);

/// Steady-state coordinate at time t and r = 0:
/// q = sum_k eps_k sigma_k Re{a_k conj(e^{i w t} h(w))}, with a_k the realization's drive
/// amplitude (w_k for the modified field, sqrt(2) e^{i theta_k} for Boyer).
Vec3 coordinate_sample(const FieldRealization& real, const ModeGrid& grid, const OscillatorParams& p, double t = 0.0);

/// n coordinates; sample i equals coordinate_sample of draw_realization(kind, grid, seed, i).
SampleSet sample_coordinates(FieldKind kind, const ModeGrid& grid, const OscillatorParams& p, double t,
                             std::size_t n, std::uint64_t seed, unsigned workers = 0);

/// Exact variance of q along `direction` for this grid: sum_k (s_hat . eps_k)^2 sigma_k^2 |h(w_k)|^2.
double oscillator_axis_variance(const ModeGrid& grid, const OscillatorParams& p, const Vec3& direction);

/// Exact generating function exp(-s^2 oscillator_axis_variance / 2), valid for any grid.
double oscillator_generating(double s, const Vec3& direction, const ModeGrid& grid, const OscillatorParams& p);
GeneratingFunction oscillator_gf(const ModeGrid& grid, const OscillatorParams& p, const Vec3& direction);

struct ResonanceIntegral {
  double quadrature = 0.0;
  double closed_form = 0.0;
  /// omega_max below 10 nu0, where the tail above omega_max is not negligible.
  bool short_range = false;
};

/// int_0^omega_max w^3 |h(w)|^2 dw by graded Gauss-Legendre panels around a
/// refinement window of width 100 gamma nu0^3 at nu0, next to pi gamma'^2 / (2 gamma nu0).
/// Throws ConvergenceError when panel doubling stops changing the result by less than 0.1%.
ResonanceIntegral resonance_integral(const OscillatorParams& p, double omega_max);

/// pi gamma'^2 / (2 gamma nu0).
double resonance_closed_form(const OscillatorParams& p);

/// hbar / (2 m nu0).
double predicted_variance(const OscillatorParams& p, const PhysicalConstants& constants = {});

/// Per-axis variance from the continuum exponent with the resonance closed form
/// inserted: hbar / (6 pi^2 c^3 eps0) * pi gamma'^2 / (2 gamma nu0).
double resonance_variance(const OscillatorParams& p, const PhysicalConstants& constants = {});

/// Isotropic Gaussian (2 pi s^2)^{-3/2} exp(-q^2 / 2 s^2), s^2 = predicted_variance.
double oscillator_pdf(const Vec3& q, const OscillatorParams& p, const PhysicalConstants& constants = {});

/// <q_x^2 + q_y^2> = hbar / (m nu0).
double bohr_radius_sq(const OscillatorParams& p, const PhysicalConstants& constants = {});

/// Shell grid for oscillator runs: centred on nu0, half-width
/// max(10 gamma nu0^3, 100 resonance half-widths) and one shell per half-width.
ShellSpec default_shell_spec(const OscillatorParams& p);

}  // namespace zpf
