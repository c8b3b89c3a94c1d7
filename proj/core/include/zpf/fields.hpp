#pragma once

// Stochastic zero-point field ensembles.
//
// Both field kinds are written as E(r,t) = sum_k eps_k sigma_k Re{a_k e^{i(k.r - wt)}}:
//   Boyer:    a_k = sqrt(2) e^{i theta_k}, theta_k uniform on [0, 2pi)
//   Modified: a_k = w_k = u_k + i v_k,     u_k, v_k independent standard normals
// The per-mode variables of realization `replica` are drawn from the counter
// stream (seed, mode index, replica).

#include <complex>
#include <cstdint>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "zpf/mode_lattice.hpp"
#include "zpf/vec3.hpp"

namespace zpf {

enum class FieldKind { Boyer, Modified };

std::string_view to_string(FieldKind kind);
/// Accepts "boyer" or "modified"; throws ValidationError otherwise.
FieldKind parse_field_kind(std::string_view text);

/// Spacetime point at which a field is evaluated.
struct EvalPoint {
  Vec3 r;
  double t = 0.0;

  friend bool operator==(const EvalPoint&, const EvalPoint&) = default;
};

/// Phase k.r - omega t of a mode at a spacetime point.
inline double mode_phase(const Mode& m, const EvalPoint& p) { return dot(m.k, p.r) - m.omega * p.t; }

class FieldRealization {
 public:
  /// Boyer realization with explicit phases, each in [0, 2pi).
  static FieldRealization from_phases(const ModeGrid& grid, std::vector<double> phases);
  /// Modified realization with explicit complex amplitudes.
  static FieldRealization from_amplitudes(const ModeGrid& grid, std::vector<std::complex<double>> amplitudes);

  FieldKind kind() const { return kind_; }
  std::uint64_t grid_id() const { return grid_id_; }
  std::uint64_t seed() const { return seed_; }
  std::uint64_t replica() const { return replica_; }
  std::size_t size() const { return kind_ == FieldKind::Boyer ? phases_.size() : amplitudes_.size(); }

  std::span<const double> phases() const;
  std::span<const std::complex<double>> amplitudes() const;

  /// a_k in the common form above.
  std::complex<double> drive_amplitude(std::size_t mode) const;

  /// Throws GridMismatchError unless this realization was drawn on `grid`.
  void check_grid(const ModeGrid& grid) const;

  friend bool operator==(const FieldRealization&, const FieldRealization&) = default;

 private:
  friend FieldRealization draw_realization(FieldKind, const ModeGrid&, std::uint64_t, std::uint64_t);
  FieldRealization(FieldKind kind, std::uint64_t grid_id) : kind_(kind), grid_id_(grid_id) {}

  FieldKind kind_;
  std::uint64_t grid_id_;
  std::uint64_t seed_ = 0;
  std::uint64_t replica_ = 0;
  std::vector<double> phases_;
  std::vector<std::complex<double>> amplitudes_;
};

/// Phase of `mode` in realization `replica`.
double draw_phase(std::uint64_t seed, std::size_t mode, std::uint64_t replica);
/// Complex amplitude of `mode` in realization `replica`.
std::complex<double> draw_amplitude(std::uint64_t seed, std::size_t mode, std::uint64_t replica);
/// a_k of `mode` in realization `replica`, for either kind.
std::complex<double> draw_drive_amplitude(FieldKind kind, std::uint64_t seed, std::size_t mode,
                                          std::uint64_t replica);

FieldRealization draw_realization(FieldKind kind, const ModeGrid& grid, std::uint64_t seed,
                                  std::uint64_t replica = 0);

/// Exact finite mode sum at (r, t).
Vec3 eval_field(const FieldRealization& real, const ModeGrid& grid, const EvalPoint& at = {});

/// Coefficient E_k of eps_k in the mode expansion at (r, t).
double mode_amplitude(const FieldRealization& real, const ModeGrid& grid, std::size_t mode,
                      const EvalPoint& at = {});

/// |w_k|^2 / 2. Only defined for the modified field.
double mode_intensity(const FieldRealization& real, std::size_t mode);

struct SampleMeta {
  std::string quantity;
  FieldKind kind = FieldKind::Modified;
  std::uint64_t grid_id = 0;
  EvalPoint point;
  std::uint64_t seed = 0;
  std::optional<std::size_t> mode_index;
};

/// A batch of Monte Carlo samples plus what is needed to regenerate it.
struct SampleSet {
  std::variant<std::vector<double>, std::vector<Vec3>> values;
  SampleMeta meta;

  std::size_t count() const;
  /// Scalar samples; throws ValidationError for vector sets.
  std::span<const double> scalars() const;
  std::span<const Vec3> vectors() const;
  /// One Cartesian component of a vector set.
  std::vector<double> component(int axis) const;
};

/// n samples of E_k at (r, t); sample i equals mode_amplitude of draw_realization(kind, grid, seed, i).
SampleSet sample_mode_batch(FieldKind kind, const ModeGrid& grid, std::size_t mode, const EvalPoint& at,
                            std::size_t n, std::uint64_t seed, unsigned workers = 0);

/// n samples of the total field vector E(r, t); sample i comes from replica i.
SampleSet sample_field_batch(FieldKind kind, const ModeGrid& grid, const EvalPoint& at, std::size_t n,
                             std::uint64_t seed, unsigned workers = 0);

/// Variance of one Cartesian component of the total field: sum_k (eps_k . axis)^2 sigma_k^2.
double field_component_variance(const ModeGrid& grid, int axis);

/// CSV with '#' metadata header, one value or "x,y,z" triple per row.
void write_csv(std::ostream& os, const SampleSet& samples);
void to_json(nlohmann::json& j, const SampleSet& samples);

}  // namespace zpf
