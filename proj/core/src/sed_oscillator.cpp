#include "zpf/sed_oscillator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "zpf/error.hpp"
#include "zpf/format.hpp"
#include "zpf/parallel.hpp"
#include "zpf/quadrature.hpp"

namespace zpf {

namespace {

constexpr double kPi = std::numbers::pi;

// Panel edges from `edge` out to `edge + sign * reach`, the first panel about
// `first` wide and the rest growing geometrically. Returned in ascending order.
std::vector<double> graded_edges(double edge, double reach, double first, int sign, std::size_t panels) {
  std::vector<double> d(panels + 1);
  const double ratio = reach / first;
  for (std::size_t i = 0; i <= panels; ++i) {
    const double u = static_cast<double>(i) / static_cast<double>(panels);
    d[i] = reach * std::expm1(u * std::log1p(ratio)) / ratio;
  }
  d.back() = reach;
  std::vector<double> out(panels + 1);
  for (std::size_t i = 0; i <= panels; ++i) out[i] = edge + sign * d[i];
  if (sign < 0) std::reverse(out.begin(), out.end());
  return out;
}

}  // namespace

OscillatorParams OscillatorParams::from_constants(double nu0, const PhysicalConstants& constants) {
  constants.validate();
  const double e = constants.electron_charge;
  const double m = constants.electron_mass;
  const double c3 = constants.c * constants.c * constants.c;
  OscillatorParams p{nu0, e * e / (6.0 * kPi * constants.eps0 * m * c3), e / m, m};
  p.validate();
  return p;
}

void OscillatorParams::validate() const {
  require(nu0 > 0.0 && std::isfinite(nu0), "oscillator.nu0 must be positive");
  require(gamma > 0.0 && std::isfinite(gamma), "oscillator.gamma must be positive");
  require(gamma_prime > 0.0 && std::isfinite(gamma_prime), "oscillator.gamma_prime must be positive");
  require(mass > 0.0 && std::isfinite(mass), "oscillator.mass must be positive");
}

void to_json(nlohmann::json& j, const OscillatorParams& p) {
  j = {{"nu0", p.nu0}, {"gamma", p.gamma}, {"gamma_prime", p.gamma_prime}, {"mass", p.mass}};
}

void from_json(const nlohmann::json& j, OscillatorParams& p) {
  j.at("nu0").get_to(p.nu0);
  j.at("gamma").get_to(p.gamma);
  j.at("gamma_prime").get_to(p.gamma_prime);
  j.at("mass").get_to(p.mass);
}

std::complex<double> transfer(double nu, const OscillatorParams& p) {
  return p.gamma_prime / std::complex<double>(p.nu0 * p.nu0 - nu * nu, p.gamma * nu * nu * nu);
}

Vec3 coordinate_sample(const FieldRealization& real, const ModeGrid& grid, const OscillatorParams& p, double t) {
  real.check_grid(grid);
  Vec3 q;
  for (std::size_t m = 0; m < grid.size(); ++m) {
    const Mode& mode = grid[m];
    const auto response = std::conj(std::polar(1.0, mode.omega * t) * transfer(mode.omega, p));
    q += mode.eps * (mode.sigma * (real.drive_amplitude(m) * response).real());
  }
  return q;
}

SampleSet sample_coordinates(FieldKind kind, const ModeGrid& grid, const OscillatorParams& p, double t,
                             std::size_t n, std::uint64_t seed, unsigned workers) {
  require(n >= 1, "realization count must be >= 1");
  p.validate();
  std::vector<std::complex<double>> response(grid.size());
  for (std::size_t m = 0; m < grid.size(); ++m) {
    const Mode& mode = grid[m];
    response[m] = mode.sigma * std::conj(std::polar(1.0, mode.omega * t) * transfer(mode.omega, p));
  }
  std::vector<Vec3> values(n);
  parallel_for(n, workers, [&](std::size_t i) {
    Vec3 q;
    for (std::size_t m = 0; m < grid.size(); ++m)
      q += grid[m].eps * (draw_drive_amplitude(kind, seed, m, i) * response[m]).real();
    values[i] = q;
  });
  return {std::move(values), {"oscillator_coordinate", kind, grid.fingerprint(), {Vec3{}, t}, seed, std::nullopt}};
}

double oscillator_axis_variance(const ModeGrid& grid, const OscillatorParams& p, const Vec3& direction) {
  const Vec3 dir = normalized(direction);
  double total = 0.0;
  for (const auto& m : grid.modes()) {
    const double c = dot(dir, m.eps);
    total += c * c * m.sigma * m.sigma * std::norm(transfer(m.omega, p));
  }
  return total;
}

double oscillator_generating(double s, const Vec3& direction, const ModeGrid& grid, const OscillatorParams& p) {
  return std::exp(-0.5 * s * s * oscillator_axis_variance(grid, p, direction));
}

GeneratingFunction oscillator_gf(const ModeGrid& grid, const OscillatorParams& p, const Vec3& direction) {
  const double variance = oscillator_axis_variance(grid, p, direction);
  return {"oscillator_product", [variance](double s) { return std::exp(-0.5 * s * s * variance); }};
}

double resonance_closed_form(const OscillatorParams& p) {
  p.validate();
  return kPi * p.gamma_prime * p.gamma_prime / (2.0 * p.gamma * p.nu0);
}

ResonanceIntegral resonance_integral(const OscillatorParams& p, double omega_max) {
  p.validate();
  require(omega_max > p.nu0, "omega_max must exceed nu0");

  const auto integrand = [&](double w) { return w * w * w * std::norm(transfer(w, p)); };
  const double width = std::min(100.0 * p.gamma * p.nu0 * p.nu0 * p.nu0, p.nu0);
  // below this the peak cannot be sampled in double precision around nu0
  if (width < 1e5 * std::numeric_limits<double>::epsilon() * p.nu0)
    throw ConvergenceError("resonance linewidth " + format_double(width / 100.0) +
                           " is below floating-point resolution at nu0");
  const double lo = std::max(p.nu0 - 0.5 * width, 0.5 * p.nu0);
  const double hi = std::min(p.nu0 + 0.5 * width, 0.5 * (p.nu0 + omega_max));

  const auto evaluate = [&](std::size_t panels) {
    double total = quad::composite(integrand, graded_edges(lo, lo, 0.25 * (hi - lo), -1, panels));
    total += quad::composite(integrand, quad::uniform_edges(lo, hi, panels));
    total += quad::composite(integrand, graded_edges(hi, omega_max - hi, 0.25 * (hi - lo), +1, panels));
    return total;
  };

  double previous = evaluate(16);
  double change = 1.0;
  for (std::size_t panels = 32; panels <= 8192; panels *= 2) {
    const double current = evaluate(panels);
    change = std::abs(current - previous) / std::abs(current);
    previous = current;
    if (change < 1e-10) break;
  }
  if (!(change <= 1e-3))
    throw ConvergenceError("resonance quadrature did not converge: last doubling changed the result by " +
                           std::to_string(100.0 * change) + "%");
  return {previous, resonance_closed_form(p), omega_max < 10.0 * p.nu0};
}

double predicted_variance(const OscillatorParams& p, const PhysicalConstants& constants) {
  p.validate();
  return constants.hbar / (2.0 * p.mass * p.nu0);
}

double resonance_variance(const OscillatorParams& p, const PhysicalConstants& constants) {
  const double c3 = constants.c * constants.c * constants.c;
  return constants.hbar / (6.0 * kPi * kPi * c3 * constants.eps0) * resonance_closed_form(p);
}

double oscillator_pdf(const Vec3& q, const OscillatorParams& p, const PhysicalConstants& constants) {
  const double var = predicted_variance(p, constants);
  return std::pow(2.0 * kPi * var, -1.5) * std::exp(-0.5 * dot(q, q) / var);
}

double bohr_radius_sq(const OscillatorParams& p, const PhysicalConstants& constants) {
  p.validate();
  return constants.hbar / (p.mass * p.nu0);
}

ShellSpec default_shell_spec(const OscillatorParams& p) {
  p.validate();
  const double half_linewidth = 0.5 * p.gamma * p.nu0 * p.nu0;
  double half_width = std::max(10.0 * p.gamma * p.nu0 * p.nu0 * p.nu0, 100.0 * half_linewidth);
  half_width = std::min(half_width, 0.5 * p.nu0);
  const int shells = std::clamp(static_cast<int>(std::lround(2.0 * half_width / half_linewidth)), 1, 4000);
  return {p.nu0, half_width, shells};
}

}  // namespace zpf
