#pragma once

// Discrete k-space mode sets for the transverse electric field.

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "zpf/vec3.hpp"

namespace zpf {

/// Unit system. Defaults to hbar = eps0 = c = m_e = e = 1.
struct PhysicalConstants {
  double hbar = 1.0;
  double eps0 = 1.0;
  double c = 1.0;
  double electron_mass = 1.0;
  double electron_charge = 1.0;

  /// CODATA SI values.
  static PhysicalConstants si();

  /// Throws ValidationError naming the first non-positive field.
  void validate() const;

  friend bool operator==(const PhysicalConstants&, const PhysicalConstants&) = default;
};

void to_json(nlohmann::json& j, const PhysicalConstants& pc);
void from_json(const nlohmann::json& j, PhysicalConstants& pc);

/// One transverse mode: wavevector, polarization, frequency and field scale.
struct Mode {
  Vec3 k;
  int polarization = 1;  // 1 or 2
  Vec3 eps;
  double omega = 0.0;
  double sigma = 0.0;
  /// Integer lattice index for periodic-box grids; {shell, direction, 0} for shell grids.
  std::array<int, 3> index{};
};

/// Radial-shell layout: `shells` frequency shells uniform over
/// [center - half_width, center + half_width], each holding the six rotated
/// octahedron directions and two polarizations per direction.
struct ShellSpec {
  double center = 1.0;
  double half_width = 0.1;
  int shells = 100;

  friend bool operator==(const ShellSpec&, const ShellSpec&) = default;
};

void to_json(nlohmann::json& j, const ShellSpec& s);
void from_json(const nlohmann::json& j, ShellSpec& s);

class ModeGrid {
 public:
  enum class Geometry { PeriodicBox, RadialShells, Explicit };

  Geometry geometry() const { return geometry_; }
  std::span<const Mode> modes() const { return modes_; }
  std::size_t size() const { return modes_.size(); }
  const Mode& operator[](std::size_t i) const { return modes_[i]; }
  const PhysicalConstants& constants() const { return constants_; }

  /// Quantization volume. Absent for shell grids, whose per-mode weights
  /// come from a continuum quadrature instead of a box.
  std::optional<double> volume() const { return volume_; }
  /// Box volume, throwing ValidationError for grids without one.
  double require_volume() const;
  double box_side() const { return box_side_; }
  double omega_cutoff() const { return omega_cutoff_; }
  const std::optional<ShellSpec>& shell_spec() const { return shell_spec_; }

  /// Content hash of the mode list; identifies the grid a realization was drawn on.
  std::uint64_t fingerprint() const { return fingerprint_; }

 private:
  friend ModeGrid build_grid(double, double, const PhysicalConstants&);
  friend ModeGrid build_grid_from_wavevectors(std::span<const Vec3>, double, const PhysicalConstants&);
  friend ModeGrid build_shell_grid(const ShellSpec&, const PhysicalConstants&);

  ModeGrid(Geometry geometry, std::vector<Mode> modes, const PhysicalConstants& constants);

  Geometry geometry_;
  std::vector<Mode> modes_;
  PhysicalConstants constants_;
  std::optional<double> volume_;
  double box_side_ = 0.0;
  double omega_cutoff_ = 0.0;
  std::optional<ShellSpec> shell_spec_;
  std::uint64_t fingerprint_ = 0;
};

/// Periodic-box lattice k = 2 pi n / L, n in Z^3 \ {0}, keeping c|k| <= omega_cutoff.
/// Modes are ordered lexicographically in n, then by polarization.
/// Throws EmptyGridError when no wavevector survives the cutoff.
ModeGrid build_grid(double box_side, double omega_cutoff, const PhysicalConstants& constants = {});

/// Two polarization modes for each listed wavevector, in a box of the given volume.
ModeGrid build_grid_from_wavevectors(std::span<const Vec3> wavevectors, double volume,
                                     const PhysicalConstants& constants = {});

/// Shell grid clustered around a resonance. Each mode carries
/// sigma^2 = hbar w^3 dw / (4 pi^2 eps0 c^3 N_dir) so that sums over modes
/// reproduce the free-space continuum.
ModeGrid build_shell_grid(const ShellSpec& spec, const PhysicalConstants& constants = {});

/// sqrt(hbar omega / (2 eps0 V)).
double mode_sigma(double omega, double volume, const PhysicalConstants& constants = {});

/// (eps1, eps2) such that (eps1, eps2, k/|k|) is a right-handed orthonormal triad.
/// eps1 = normalize(z x k) unless k is along z, where eps1 = x and eps2 = sign(k_z) y.
std::pair<Vec3, Vec3> polarization_basis(const Vec3& k);

/// Sum over both polarizations, integrated over all k directions, of (s . eps)^2.
/// Closed form 8 pi |s|^2 / 3.
double angular_polarization_integral(const Vec3& s);

struct MonteCarloEstimate {
  double value = 0.0;
  double std_error = 0.0;
};

/// Monte Carlo estimate of angular_polarization_integral from uniformly
/// random directions.
MonteCarloEstimate angular_polarization_integral_mc(const Vec3& s, std::size_t directions, std::uint64_t seed);

struct ContinuumComparison {
  double discrete_sum = 0.0;
  double continuum_integral = 0.0;
};

/// Sum of f(omega) over the grid's modes next to V/(pi^2 c^3) * int_0^cutoff w^2 f(w) dw.
ContinuumComparison continuum_sum_check(const ModeGrid& grid, const std::function<double(double)>& f);

void to_json(nlohmann::json& j, const ModeGrid& grid);

}  // namespace zpf
