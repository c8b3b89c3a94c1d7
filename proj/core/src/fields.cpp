#include "zpf/fields.hpp"

#include <cmath>
#include <numbers>

#include "zpf/error.hpp"
#include "zpf/format.hpp"
#include "zpf/parallel.hpp"
#include "zpf/random.hpp"

namespace zpf {

namespace {

constexpr double kSqrt2 = std::numbers::sqrt2;

std::string grid_id_hex(std::uint64_t id) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i, id >>= 4) out[static_cast<std::size_t>(i)] = kDigits[id & 0xF];
  return out;
}

double term(const Mode& m, std::complex<double> a, const EvalPoint& at) {
  const double phase = mode_phase(m, at);
  return m.sigma * (a.real() * std::cos(phase) - a.imag() * std::sin(phase));
}

}  // namespace

std::string_view to_string(FieldKind kind) { return kind == FieldKind::Boyer ? "boyer" : "modified"; }

FieldKind parse_field_kind(std::string_view text) {
  if (text == "boyer") return FieldKind::Boyer;
  if (text == "modified") return FieldKind::Modified;
  throw ValidationError("kind must be 'boyer' or 'modified', got '" + std::string(text) + "'");
}

FieldRealization FieldRealization::from_phases(const ModeGrid& grid, std::vector<double> phases) {
  require(phases.size() == grid.size(), "phase count must match grid mode count");
  for (double p : phases) require(p >= 0.0 && p < 2.0 * std::numbers::pi, "phases must lie in [0, 2pi)");
  FieldRealization out(FieldKind::Boyer, grid.fingerprint());
  out.phases_ = std::move(phases);
  return out;
}

FieldRealization FieldRealization::from_amplitudes(const ModeGrid& grid,
                                                   std::vector<std::complex<double>> amplitudes) {
  require(amplitudes.size() == grid.size(), "amplitude count must match grid mode count");
  FieldRealization out(FieldKind::Modified, grid.fingerprint());
  out.amplitudes_ = std::move(amplitudes);
  return out;
}

std::span<const double> FieldRealization::phases() const {
  require(kind_ == FieldKind::Boyer, "phases are defined only for the Boyer field");
  return phases_;
}

std::span<const std::complex<double>> FieldRealization::amplitudes() const {
  require(kind_ == FieldKind::Modified, "complex amplitudes are defined only for the modified field");
  return amplitudes_;
}

std::complex<double> FieldRealization::drive_amplitude(std::size_t mode) const {
  if (kind_ == FieldKind::Modified) return amplitudes_.at(mode);
  return std::polar(kSqrt2, phases_.at(mode));
}

void FieldRealization::check_grid(const ModeGrid& grid) const {
  if (grid.fingerprint() != grid_id_ || grid.size() != size())
    throw GridMismatchError("realization was drawn on a different grid");
}

double draw_phase(std::uint64_t seed, std::size_t mode, std::uint64_t replica) {
  return uniform_phase(uniform_pair(seed, mode, replica).first);
}

std::complex<double> draw_amplitude(std::uint64_t seed, std::size_t mode, std::uint64_t replica) {
  const auto [u1, u2] = uniform_pair(seed, mode, replica);
  const auto [u, v] = box_muller(u1, u2);
  return {u, v};
}

std::complex<double> draw_drive_amplitude(FieldKind kind, std::uint64_t seed, std::size_t mode,
                                          std::uint64_t replica) {
  if (kind == FieldKind::Modified) return draw_amplitude(seed, mode, replica);
  return std::polar(kSqrt2, draw_phase(seed, mode, replica));
}

FieldRealization draw_realization(FieldKind kind, const ModeGrid& grid, std::uint64_t seed, std::uint64_t replica) {
  FieldRealization out(kind, grid.fingerprint());
  out.seed_ = seed;
  out.replica_ = replica;
  if (kind == FieldKind::Boyer) {
    out.phases_.resize(grid.size());
    for (std::size_t m = 0; m < grid.size(); ++m) out.phases_[m] = draw_phase(seed, m, replica);
  } else {
    out.amplitudes_.resize(grid.size());
    for (std::size_t m = 0; m < grid.size(); ++m) out.amplitudes_[m] = draw_amplitude(seed, m, replica);
  }
  return out;
}

Vec3 eval_field(const FieldRealization& real, const ModeGrid& grid, const EvalPoint& at) {
  real.check_grid(grid);
  Vec3 e;
  for (std::size_t m = 0; m < grid.size(); ++m) e += grid[m].eps * term(grid[m], real.drive_amplitude(m), at);
  return e;
}

double mode_amplitude(const FieldRealization& real, const ModeGrid& grid, std::size_t mode, const EvalPoint& at) {
  real.check_grid(grid);
  if (mode >= grid.size()) throw ValidationError("mode index out of range");
  return term(grid[mode], real.drive_amplitude(mode), at);
}

double mode_intensity(const FieldRealization& real, std::size_t mode) {
  if (real.kind() != FieldKind::Modified) throw ValidationError("intensity defined only for Modified field");
  if (mode >= real.size()) throw ValidationError("mode index out of range");
  return 0.5 * std::norm(real.amplitudes()[mode]);
}

std::size_t SampleSet::count() const {
  return std::visit([](const auto& v) { return v.size(); }, values);
}

std::span<const double> SampleSet::scalars() const {
  const auto* v = std::get_if<std::vector<double>>(&values);
  require(v != nullptr, "sample set holds vectors, not scalars");
  return *v;
}

std::span<const Vec3> SampleSet::vectors() const {
  const auto* v = std::get_if<std::vector<Vec3>>(&values);
  require(v != nullptr, "sample set holds scalars, not vectors");
  return *v;
}

std::vector<double> SampleSet::component(int axis) const {
  require(axis >= 0 && axis < 3, "axis must be 0, 1 or 2");
  std::vector<double> out;
  out.reserve(count());
  for (const auto& v : vectors()) out.push_back(v[static_cast<std::size_t>(axis)]);
  return out;
}

SampleSet sample_mode_batch(FieldKind kind, const ModeGrid& grid, std::size_t mode, const EvalPoint& at,
                            std::size_t n, std::uint64_t seed, unsigned workers) {
  require(n >= 1, "sample count must be >= 1");
  if (mode >= grid.size()) throw ValidationError("mode index out of range");
  const Mode& m = grid[mode];
  std::vector<double> values(n);
  parallel_for(n, workers, [&](std::size_t i) { values[i] = term(m, draw_drive_amplitude(kind, seed, mode, i), at); });
  return {std::move(values), {"mode_amplitude", kind, grid.fingerprint(), at, seed, mode}};
}

SampleSet sample_field_batch(FieldKind kind, const ModeGrid& grid, const EvalPoint& at, std::size_t n,
                             std::uint64_t seed, unsigned workers) {
  require(n >= 1, "sample count must be >= 1");
  std::vector<double> phase(grid.size());
  for (std::size_t m = 0; m < grid.size(); ++m) phase[m] = mode_phase(grid[m], at);
  std::vector<Vec3> values(n);
  parallel_for(n, workers, [&](std::size_t i) {
    Vec3 e;
    for (std::size_t m = 0; m < grid.size(); ++m) {
      const auto a = draw_drive_amplitude(kind, seed, m, i);
      const double amp = grid[m].sigma * (a.real() * std::cos(phase[m]) - a.imag() * std::sin(phase[m]));
      e += grid[m].eps * amp;
    }
    values[i] = e;
  });
  return {std::move(values), {"field", kind, grid.fingerprint(), at, seed, std::nullopt}};
}

double field_component_variance(const ModeGrid& grid, int axis) {
  require(axis >= 0 && axis < 3, "axis must be 0, 1 or 2");
  double total = 0.0;
  for (const auto& m : grid.modes()) {
    const double c = m.eps[static_cast<std::size_t>(axis)];
    total += c * c * m.sigma * m.sigma;
  }
  return total;
}

void write_csv(std::ostream& os, const SampleSet& samples) {
  const auto& meta = samples.meta;
  os << "# quantity: " << meta.quantity << '\n'
     << "# kind: " << to_string(meta.kind) << '\n'
     << "# grid: " << grid_id_hex(meta.grid_id) << '\n'
     << "# r: " << format_double(meta.point.r.x) << ',' << format_double(meta.point.r.y) << ','
     << format_double(meta.point.r.z) << '\n'
     << "# t: " << format_double(meta.point.t) << '\n'
     << "# seed: " << meta.seed << '\n'
     << "# count: " << samples.count() << '\n';
  if (meta.mode_index) os << "# mode_index: " << *meta.mode_index << '\n';
  if (const auto* s = std::get_if<std::vector<double>>(&samples.values)) {
    os << "value\n";
    for (double v : *s) os << format_double(v) << '\n';
  } else {
    os << "x,y,z\n";
    for (const auto& v : std::get<std::vector<Vec3>>(samples.values))
      os << format_double(v.x) << ',' << format_double(v.y) << ',' << format_double(v.z) << '\n';
  }
}

void to_json(nlohmann::json& j, const SampleSet& samples) {
  const auto& meta = samples.meta;
  j = {{"quantity", meta.quantity},
       {"kind", to_string(meta.kind)},
       {"grid", grid_id_hex(meta.grid_id)},
       {"r", {meta.point.r.x, meta.point.r.y, meta.point.r.z}},
       {"t", meta.point.t},
       {"seed", meta.seed},
       {"count", samples.count()}};
  if (meta.mode_index) j["mode_index"] = *meta.mode_index;
  if (const auto* s = std::get_if<std::vector<double>>(&samples.values)) {
    j["values"] = *s;
  } else {
    auto arr = nlohmann::json::array();
    for (const auto& v : std::get<std::vector<Vec3>>(samples.values)) arr.push_back({v.x, v.y, v.z});
    j["values"] = std::move(arr);
  }
}

}  // namespace zpf
