#pragma once

// Run configuration for zpfsim: JSON config file, then flag overrides.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "zpf/fields.hpp"
#include "zpf/mode_lattice.hpp"
#include "zpf/sed_oscillator.hpp"

namespace zpf::cli {

struct BoxGrid {
  double box_side = 0.0;
  double omega_cutoff = 0.0;
  friend bool operator==(const BoxGrid&, const BoxGrid&) = default;
};

struct ExplicitGrid {
  std::vector<Vec3> wavevectors;
  double volume = 1.0;
  friend bool operator==(const ExplicitGrid&, const ExplicitGrid&) = default;
};

struct ShellGrid {
  ShellSpec spec;
  friend bool operator==(const ShellGrid&, const ShellGrid&) = default;
};

using GridSpec = std::variant<BoxGrid, ExplicitGrid, ShellGrid>;

ModeGrid build(const GridSpec& spec, const PhysicalConstants& constants);
nlohmann::json grid_to_json(const GridSpec& spec);

enum class Command { SampleMode, TotalField, Oscillator, Figure1, Generating };

std::string_view to_string(Command c);
bool uses_randomness(Command c);

struct RunConfig {
  Command command = Command::SampleMode;
  std::optional<std::uint64_t> seed;
  FieldKind kind = FieldKind::Modified;
  std::size_t samples = 0;
  double alpha = 0.01;
  unsigned workers = 0;
  std::filesystem::path out = ".";
  PhysicalConstants constants;
  std::optional<GridSpec> grid;
  EvalPoint point;

  std::size_t mode_index = 0;  // sample-mode
  int component = 0;           // total-field
  std::size_t bins = 40;       // total-field

  double nu0 = 1.0;                             // oscillator
  std::optional<OscillatorParams> oscillator;   // oscillator, explicit params

  std::size_t points = 3000;  // figure1

  std::vector<GridSpec> sweep;  // generating
  Vec3 direction{0, 0, 1};
  double s_sigma_max = 5.0;
  std::size_t s_points = 101;

  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

/// Per-command defaults.
RunConfig defaults_for(Command c);

/// Overlay a JSON config document onto `cfg`. Errors carry "<source>:<line>:" when
/// the offending key can be located in `text`.
void apply_config_text(RunConfig& cfg, const std::string& text, const std::string& source);
void apply_config_file(RunConfig& cfg, const std::filesystem::path& path);

/// Fills derived defaults (oscillator params, grids) and checks ranges.
void finalize(RunConfig& cfg);

/// Fully resolved config; applying it to defaults_for(command) reproduces cfg.
nlohmann::json manifest(const RunConfig& cfg);

}  // namespace zpf::cli
