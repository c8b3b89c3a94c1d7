#include "zpf/mode_lattice.hpp"

#include <bit>
#include <cmath>
#include <numbers>
#include <string>

#include "zpf/error.hpp"
#include "zpf/quadrature.hpp"
#include "zpf/random.hpp"

namespace zpf {

namespace {

constexpr double kPi = std::numbers::pi;

class Fnv1a {
 public:
  void add(std::uint64_t word) {
    for (int i = 0; i < 8; ++i) {
      hash_ ^= (word >> (8 * i)) & 0xFFu;
      hash_ *= 0x100000001B3ull;
    }
  }
  void add(double v) { add(std::bit_cast<std::uint64_t>(v)); }
  void add(const Vec3& v) {
    add(v.x);
    add(v.y);
    add(v.z);
  }
  std::uint64_t value() const { return hash_; }

 private:
  std::uint64_t hash_ = 0xCBF29CE484222325ull;
};

// Rotation about a fixed irrational axis by `angle` (Rodrigues).
Vec3 rotate(const Vec3& v, double angle) {
  static const Vec3 axis = normalized(Vec3{1.0, 2.0, 3.0});
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  return v * c + cross(axis, v) * s + axis * (dot(axis, v) * (1.0 - c));
}

void push_pair(std::vector<Mode>& modes, const Vec3& k, double omega, double sigma, std::array<int, 3> index) {
  const auto [e1, e2] = polarization_basis(k);
  modes.push_back({k, 1, e1, omega, sigma, index});
  modes.push_back({k, 2, e2, omega, sigma, index});
}

}  // namespace

PhysicalConstants PhysicalConstants::si() {
  return {1.054571817e-34, 8.8541878128e-12, 299792458.0, 9.1093837015e-31, 1.602176634e-19};
}

void PhysicalConstants::validate() const {
  const std::pair<const char*, double> fields[] = {{"hbar", hbar},
                                                   {"eps0", eps0},
                                                   {"c", c},
                                                   {"electron_mass", electron_mass},
                                                   {"electron_charge", electron_charge}};
  for (const auto& [name, value] : fields)
    require(std::isfinite(value) && value > 0.0, std::string("constants.") + name + " must be positive");
}

void to_json(nlohmann::json& j, const PhysicalConstants& pc) {
  j = {{"hbar", pc.hbar}, {"eps0", pc.eps0}, {"c", pc.c},
       {"electron_mass", pc.electron_mass}, {"electron_charge", pc.electron_charge}};
}

void from_json(const nlohmann::json& j, PhysicalConstants& pc) {
  PhysicalConstants d;
  pc.hbar = j.value("hbar", d.hbar);
  pc.eps0 = j.value("eps0", d.eps0);
  pc.c = j.value("c", d.c);
  pc.electron_mass = j.value("electron_mass", d.electron_mass);
  pc.electron_charge = j.value("electron_charge", d.electron_charge);
}

void to_json(nlohmann::json& j, const ShellSpec& s) {
  j = {{"center", s.center}, {"half_width", s.half_width}, {"shells", s.shells}};
}

void from_json(const nlohmann::json& j, ShellSpec& s) {
  j.at("center").get_to(s.center);
  j.at("half_width").get_to(s.half_width);
  j.at("shells").get_to(s.shells);
}

ModeGrid::ModeGrid(Geometry geometry, std::vector<Mode> modes, const PhysicalConstants& constants)
    : geometry_(geometry), modes_(std::move(modes)), constants_(constants) {
  if (modes_.empty()) throw EmptyGridError();
  Fnv1a h;
  h.add(static_cast<std::uint64_t>(geometry_));
  for (const auto& m : modes_) {
    h.add(m.k);
    h.add(static_cast<std::uint64_t>(m.polarization));
    h.add(m.eps);
    h.add(m.omega);
    h.add(m.sigma);
  }
  fingerprint_ = h.value();
}

double ModeGrid::require_volume() const {
  if (!volume_) throw ValidationError("grid has no box volume (shell grids are volume-free)");
  return *volume_;
}

ModeGrid build_grid(double box_side, double omega_cutoff, const PhysicalConstants& constants) {
  require(box_side > 0.0 && std::isfinite(box_side), "box_side must be positive");
  require(omega_cutoff > 0.0 && std::isfinite(omega_cutoff), "omega_cutoff must be positive");
  constants.validate();

  const double volume = box_side * box_side * box_side;
  const double dk = 2.0 * kPi / box_side;
  // c |k| <= cutoff  <=>  |n|^2 <= (cutoff / (c dk))^2, with a little slack for
  // lattice points that sit on the cutoff sphere.
  const double radius = omega_cutoff / (constants.c * dk);
  const double radius_sq = radius * radius * (1.0 + 1e-12);
  const int extent = static_cast<int>(std::floor(radius * (1.0 + 1e-12)));

  std::vector<Mode> modes;
  for (int i = -extent; i <= extent; ++i)
    for (int j = -extent; j <= extent; ++j)
      for (int l = -extent; l <= extent; ++l) {
        const long n_sq = long{i} * i + long{j} * j + long{l} * l;
        if (n_sq == 0 || static_cast<double>(n_sq) > radius_sq) continue;
        const Vec3 k{dk * i, dk * j, dk * l};
        const double omega = constants.c * norm(k);
        push_pair(modes, k, omega, mode_sigma(omega, volume, constants), {i, j, l});
      }

  ModeGrid grid(ModeGrid::Geometry::PeriodicBox, std::move(modes), constants);
  grid.volume_ = volume;
  grid.box_side_ = box_side;
  grid.omega_cutoff_ = omega_cutoff;
  return grid;
}

ModeGrid build_grid_from_wavevectors(std::span<const Vec3> wavevectors, double volume,
                                     const PhysicalConstants& constants) {
  require(volume > 0.0 && std::isfinite(volume), "volume must be positive");
  constants.validate();
  std::vector<Mode> modes;
  double max_omega = 0.0;
  for (const auto& k : wavevectors) {
    const double omega = constants.c * norm(k);
    require(omega > 0.0, "wavevectors must be nonzero");
    max_omega = std::max(max_omega, omega);
    push_pair(modes, k, omega, mode_sigma(omega, volume, constants), {0, 0, 0});
  }
  ModeGrid grid(ModeGrid::Geometry::Explicit, std::move(modes), constants);
  grid.volume_ = volume;
  grid.box_side_ = std::cbrt(volume);
  grid.omega_cutoff_ = max_omega;
  return grid;
}

ModeGrid build_shell_grid(const ShellSpec& spec, const PhysicalConstants& constants) {
  require(spec.shells >= 1, "shells must be >= 1");
  require(spec.half_width > 0.0, "half_width must be positive");
  require(spec.center - spec.half_width > 0.0, "shell band must lie at positive frequency");
  constants.validate();

  static constexpr Vec3 kOctahedron[] = {{1, 0, 0}, {-1, 0, 0}, {0, 1, 0}, {0, -1, 0}, {0, 0, 1}, {0, 0, -1}};
  constexpr int kDirections = 6;
  const double golden_angle = kPi * (3.0 - std::sqrt(5.0));
  const double d_omega = 2.0 * spec.half_width / spec.shells;
  const double c3 = constants.c * constants.c * constants.c;

  std::vector<Mode> modes;
  modes.reserve(static_cast<std::size_t>(spec.shells) * kDirections * 2);
  for (int s = 0; s < spec.shells; ++s) {
    const double omega = spec.center - spec.half_width + (s + 0.5) * d_omega;
    const double sigma_sq =
        constants.hbar * omega * omega * omega * d_omega / (4.0 * kPi * kPi * constants.eps0 * c3 * kDirections);
    const double sigma = std::sqrt(sigma_sq);
    for (int d = 0; d < kDirections; ++d) {
      const Vec3 direction = rotate(kOctahedron[d], golden_angle * s);
      push_pair(modes, direction * (omega / constants.c), omega, sigma, {s, d, 0});
    }
  }
  ModeGrid grid(ModeGrid::Geometry::RadialShells, std::move(modes), constants);
  grid.omega_cutoff_ = spec.center + spec.half_width;
  grid.shell_spec_ = spec;
  return grid;
}

double mode_sigma(double omega, double volume, const PhysicalConstants& constants) {
  require(omega > 0.0 && volume > 0.0, "mode_sigma needs positive omega and volume");
  return std::sqrt(constants.hbar * omega / (2.0 * constants.eps0 * volume));
}

std::pair<Vec3, Vec3> polarization_basis(const Vec3& k) {
  const double length = norm(k);
  require(length > 0.0 && std::isfinite(length), "polarization_basis needs a nonzero wavevector");
  const Vec3 k_hat = k * (1.0 / length);
  if (std::hypot(k_hat.x, k_hat.y) <= 1e-12) {
    const double sign = k.z > 0.0 ? 1.0 : -1.0;
    return {Vec3{1, 0, 0}, Vec3{0, sign, 0}};
  }
  const Vec3 eps1 = normalized(cross(Vec3{0, 0, 1}, k_hat));
  return {eps1, cross(k_hat, eps1)};
}

double angular_polarization_integral(const Vec3& s) { return 8.0 * kPi * dot(s, s) / 3.0; }

MonteCarloEstimate angular_polarization_integral_mc(const Vec3& s, std::size_t directions, std::uint64_t seed) {
  require(directions >= 2, "need at least two directions");
  StreamRng rng(seed, streams::kDirections);
  double sum = 0.0;
  double sum_sq = 0.0;
  for (std::size_t i = 0; i < directions; ++i) {
    const auto [u1, u2] = rng.uniform_pair();
    const double z = 2.0 * u1 - 1.0;
    const double rho = std::sqrt(std::max(0.0, 1.0 - z * z));
    const double phi = 2.0 * kPi * u2;
    const Vec3 k{rho * std::cos(phi), rho * std::sin(phi), z};
    const auto [e1, e2] = polarization_basis(k);
    const double a = dot(s, e1);
    const double b = dot(s, e2);
    const double x = 4.0 * kPi * (a * a + b * b);
    sum += x;
    sum_sq += x * x;
  }
  const double n = static_cast<double>(directions);
  const double mean = sum / n;
  const double var = (sum_sq - n * mean * mean) / (n - 1.0);
  return {mean, std::sqrt(std::max(var, 0.0) / n)};
}

ContinuumComparison continuum_sum_check(const ModeGrid& grid, const std::function<double(double)>& f) {
  const double volume = grid.require_volume();
  const double c = grid.constants().c;
  ContinuumComparison out;
  for (const auto& m : grid.modes()) out.discrete_sum += f(m.omega);
  const auto edges = quad::uniform_edges(0.0, grid.omega_cutoff(), 64);
  const double integral = quad::composite([&](double w) { return w * w * f(w); }, edges);
  out.continuum_integral = volume / (kPi * kPi * c * c * c) * integral;
  return out;
}

void to_json(nlohmann::json& j, const ModeGrid& grid) {
  auto modes = nlohmann::json::array();
  for (const auto& m : grid.modes()) {
    nlohmann::json entry = {{"lambda", m.polarization},
                            {"eps", {m.eps.x, m.eps.y, m.eps.z}},
                            {"omega", m.omega},
                            {"sigma", m.sigma}};
    if (grid.geometry() == ModeGrid::Geometry::PeriodicBox)
      entry["n"] = m.index;
    else
      entry["k"] = {m.k.x, m.k.y, m.k.z};
    modes.push_back(std::move(entry));
  }
  j = {{"box_side", grid.box_side()},
       {"omega_cutoff", grid.omega_cutoff()},
       {"constants", grid.constants()},
       {"modes", std::move(modes)}};
  if (grid.shell_spec()) j["shells"] = *grid.shell_spec();
}

}  // namespace zpf
