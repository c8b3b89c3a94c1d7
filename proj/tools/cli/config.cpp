#include "config.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "zpf/error.hpp"

namespace zpf::cli {

namespace {

using json = nlohmann::json;
using Path = std::vector<std::variant<std::string, std::size_t>>;

std::string path_string(const Path& path) {
  std::string out;
  for (const auto& p : path) {
    if (const auto* key = std::get_if<std::string>(&p)) {
      if (!out.empty()) out += '.';
      out += *key;
    } else {
      out += '[' + std::to_string(std::get<std::size_t>(p)) + ']';
    }
  }
  return out.empty() ? "<root>" : out;
}

// Walks already-validated JSON text to find where a value sits. Only used for error messages.
class TextLocator {
 public:
  explicit TextLocator(const std::string& text) : s_(text) {}

  std::optional<int> line_of(const Path& path) const {
    std::size_t pos = 0;
    skip_ws(pos);
    std::size_t key_pos = pos;
    for (const auto& step : path) {
      if (pos >= s_.size()) return std::nullopt;
      if (const auto* key = std::get_if<std::string>(&step)) {
        if (s_[pos] != '{') return std::nullopt;
        ++pos;
        bool found = false;
        while (true) {
          skip_ws(pos);
          if (pos >= s_.size() || s_[pos] == '}') return std::nullopt;
          const std::size_t start = pos;
          const std::string name = read_string(pos);
          skip_ws(pos);
          ++pos;  // ':'
          skip_ws(pos);
          if (name == *key) {
            key_pos = start;
            found = true;
            break;
          }
          skip_value(pos);
          skip_ws(pos);
          if (pos < s_.size() && s_[pos] == ',') ++pos;
        }
        if (!found) return std::nullopt;
      } else {
        if (s_[pos] != '[') return std::nullopt;
        ++pos;
        for (std::size_t i = 0; i < std::get<std::size_t>(step); ++i) {
          skip_ws(pos);
          skip_value(pos);
          skip_ws(pos);
          if (pos >= s_.size() || s_[pos] != ',') return std::nullopt;
          ++pos;
        }
        skip_ws(pos);
        key_pos = pos;
      }
    }
    return 1 + static_cast<int>(std::count(s_.begin(), s_.begin() + static_cast<std::ptrdiff_t>(key_pos), '\n'));
  }

 private:
  void skip_ws(std::size_t& pos) const {
    while (pos < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos]))) ++pos;
  }

  std::string read_string(std::size_t& pos) const {
    std::string out;
    ++pos;
    while (pos < s_.size() && s_[pos] != '"') {
      if (s_[pos] == '\\') ++pos;
      if (pos < s_.size()) out += s_[pos++];
    }
    ++pos;
    return out;
  }

  void skip_value(std::size_t& pos) const {
    if (pos >= s_.size()) return;
    const char c = s_[pos];
    if (c == '"') {
      read_string(pos);
    } else if (c == '{' || c == '[') {
      int depth = 0;
      while (pos < s_.size()) {
        const char d = s_[pos];
        if (d == '"') {
          read_string(pos);
          continue;
        }
        if (d == '{' || d == '[') ++depth;
        if (d == '}' || d == ']') --depth;
        ++pos;
        if (depth == 0) return;
      }
    } else {
      while (pos < s_.size() && s_[pos] != ',' && s_[pos] != '}' && s_[pos] != ']' &&
             !std::isspace(static_cast<unsigned char>(s_[pos])))
        ++pos;
    }
  }

  const std::string& s_;
};

class Reader {
 public:
  Reader(const std::string& text, const std::string& source) : locator_(text), source_(source) {}

  [[noreturn]] void fail(const Path& path, const std::string& problem) const {
    std::string where = source_;
    if (const auto line = locator_.line_of(path)) where += ':' + std::to_string(*line);
    throw ValidationError(where + ": " + path_string(path) + ": " + problem);
  }

  const json& object(const json& v, const Path& path) const {
    if (!v.is_object()) fail(path, "expected an object");
    return v;
  }

  double number(const json& v, const Path& path) const {
    if (!v.is_number()) fail(path, "expected a number");
    const double x = v.get<double>();
    if (!std::isfinite(x)) fail(path, "must be finite");
    return x;
  }

  double positive(const json& v, const Path& path) const {
    const double x = number(v, path);
    if (!(x > 0.0)) fail(path, "must be positive");
    return x;
  }

  std::uint64_t unsigned_integer(const json& v, const Path& path, std::uint64_t min = 0) const {
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0))
      fail(path, "expected a non-negative integer");
    const auto x = v.get<std::uint64_t>();
    if (x < min) fail(path, "must be >= " + std::to_string(min));
    return x;
  }

  std::string string(const json& v, const Path& path) const {
    if (!v.is_string()) fail(path, "expected a string");
    return v.get<std::string>();
  }

  Vec3 vec3(const json& v, const Path& path) const {
    if (!v.is_array() || v.size() != 3) fail(path, "expected an array of 3 numbers");
    return {number(v[0], with(path, std::size_t{0})), number(v[1], with(path, std::size_t{1})),
            number(v[2], with(path, std::size_t{2}))};
  }

  static Path with(Path path, std::variant<std::string, std::size_t> step) {
    path.push_back(std::move(step));
    return path;
  }

  void only_keys(const json& obj, const Path& path, std::initializer_list<std::string_view> allowed) const {
    for (const auto& [key, value] : obj.items()) {
      if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) fail(with(path, key), "unknown key");
    }
  }

  const json& need(const json& obj, const Path& path, const std::string& key) const {
    if (!obj.contains(key)) fail(path, "missing key '" + key + "'");
    return obj.at(key);
  }

  GridSpec grid(const json& v, const Path& path) const {
    object(v, path);
    if (v.contains("box_side") || v.contains("omega_cutoff")) {
      only_keys(v, path, {"box_side", "omega_cutoff"});
      return BoxGrid{positive(need(v, path, "box_side"), with(path, "box_side")),
                     positive(need(v, path, "omega_cutoff"), with(path, "omega_cutoff"))};
    }
    if (v.contains("wavevectors")) {
      only_keys(v, path, {"wavevectors", "volume"});
      const auto p = with(path, "wavevectors");
      const auto& list = v.at("wavevectors");
      if (!list.is_array() || list.empty()) fail(p, "expected a non-empty array of 3-vectors");
      ExplicitGrid g;
      for (std::size_t i = 0; i < list.size(); ++i) g.wavevectors.push_back(vec3(list[i], with(p, i)));
      if (v.contains("volume")) g.volume = positive(v.at("volume"), with(path, "volume"));
      return g;
    }
    if (v.contains("shells")) {
      only_keys(v, path, {"shells"});
      const auto p = with(path, "shells");
      const auto& s = object(v.at("shells"), p);
      only_keys(s, p, {"center", "half_width", "shells"});
      ShellSpec spec;
      spec.center = positive(need(s, p, "center"), with(p, "center"));
      spec.half_width = positive(need(s, p, "half_width"), with(p, "half_width"));
      spec.shells = static_cast<int>(unsigned_integer(need(s, p, "shells"), with(p, "shells"), 1));
      if (!(spec.half_width < spec.center)) fail(with(p, "half_width"), "must be smaller than center");
      return ShellGrid{spec};
    }
    fail(path, "expected {box_side, omega_cutoff}, {wavevectors, volume} or {shells}");
  }

  void constants(const json& v, const Path& path, PhysicalConstants& pc) const {
    object(v, path);
    only_keys(v, path, {"hbar", "eps0", "c", "electron_mass", "electron_charge"});
    const auto set = [&](const char* key, double& field) {
      if (v.contains(key)) field = positive(v.at(key), with(path, key));
    };
    set("hbar", pc.hbar);
    set("eps0", pc.eps0);
    set("c", pc.c);
    set("electron_mass", pc.electron_mass);
    set("electron_charge", pc.electron_charge);
  }

  void oscillator(const json& v, const Path& path, RunConfig& cfg) const {
    object(v, path);
    only_keys(v, path, {"nu0", "gamma", "gamma_prime", "mass"});
    const double nu0 = positive(need(v, path, "nu0"), with(path, "nu0"));
    if (v.size() == 1) {
      cfg.nu0 = nu0;
      cfg.oscillator.reset();
      return;
    }
    OscillatorParams p;
    p.nu0 = nu0;
    p.gamma = positive(need(v, path, "gamma"), with(path, "gamma"));
    p.gamma_prime = positive(need(v, path, "gamma_prime"), with(path, "gamma_prime"));
    p.mass = positive(need(v, path, "mass"), with(path, "mass"));
    cfg.nu0 = nu0;
    cfg.oscillator = p;
  }

 private:
  TextLocator locator_;
  const std::string& source_;
};

}  // namespace

std::string_view to_string(Command c) {
  switch (c) {
    case Command::SampleMode: return "sample-mode";
    case Command::TotalField: return "total-field";
    case Command::Oscillator: return "oscillator";
    case Command::Figure1: return "figure1";
    case Command::Generating: return "generating";
  }
  return "?";
}

bool uses_randomness(Command c) {
  return c == Command::SampleMode || c == Command::TotalField || c == Command::Oscillator;
}

ModeGrid build(const GridSpec& spec, const PhysicalConstants& constants) {
  if (const auto* b = std::get_if<BoxGrid>(&spec)) return build_grid(b->box_side, b->omega_cutoff, constants);
  if (const auto* e = std::get_if<ExplicitGrid>(&spec))
    return build_grid_from_wavevectors(e->wavevectors, e->volume, constants);
  return build_shell_grid(std::get<ShellGrid>(spec).spec, constants);
}

nlohmann::json grid_to_json(const GridSpec& spec) {
  if (const auto* b = std::get_if<BoxGrid>(&spec)) return {{"box_side", b->box_side}, {"omega_cutoff", b->omega_cutoff}};
  if (const auto* e = std::get_if<ExplicitGrid>(&spec)) {
    json ks = json::array();
    for (const auto& k : e->wavevectors) ks.push_back({k.x, k.y, k.z});
    return {{"wavevectors", ks}, {"volume", e->volume}};
  }
  return {{"shells", std::get<ShellGrid>(spec).spec}};
}

RunConfig defaults_for(Command c) {
  RunConfig cfg;
  cfg.command = c;
  switch (c) {
    case Command::SampleMode: cfg.samples = 100'000; break;
    case Command::TotalField: cfg.samples = 10'000; break;
    case Command::Oscillator:
      cfg.samples = 100'000;
      // c = 10 in these units keeps the radiative linewidth narrow
      cfg.constants = {1.0, 1.0, 10.0, 1.0, 1.0};
      break;
    case Command::Figure1:
    case Command::Generating: break;
  }
  return cfg;
}

void apply_config_text(RunConfig& cfg, const std::string& text, const std::string& source) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ValidationError(source + ": " + e.what());
  }
  const Reader r(text, source);
  r.object(root, {});
  for (const auto& [key, v] : root.items()) {
    const Path p{key};
    if (key == "command") {
      if (r.string(v, p) != to_string(cfg.command))
        r.fail(p, "config is for '" + v.get<std::string>() + "', not '" + std::string(to_string(cfg.command)) + "'");
    } else if (key == "seed") {
      cfg.seed = r.unsigned_integer(v, p);
    } else if (key == "kind") {
      try {
        cfg.kind = parse_field_kind(r.string(v, p));
      } catch (const ValidationError&) {
        r.fail(p, "must be \"boyer\" or \"modified\"");
      }
    } else if (key == "samples") {
      cfg.samples = r.unsigned_integer(v, p, 1);
    } else if (key == "alpha") {
      cfg.alpha = r.number(v, p);
      if (!(cfg.alpha > 0.0 && cfg.alpha < 1.0)) r.fail(p, "must lie in (0, 1)");
    } else if (key == "workers") {
      cfg.workers = static_cast<unsigned>(r.unsigned_integer(v, p));
    } else if (key == "out") {
      cfg.out = r.string(v, p);
    } else if (key == "constants") {
      r.constants(v, p, cfg.constants);
    } else if (key == "grid") {
      cfg.grid = r.grid(v, p);
    } else if (key == "point") {
      r.object(v, p);
      r.only_keys(v, p, {"r", "t"});
      if (v.contains("r")) cfg.point.r = r.vec3(v.at("r"), Reader::with(p, "r"));
      if (v.contains("t")) cfg.point.t = r.number(v.at("t"), Reader::with(p, "t"));
    } else if (key == "mode_index") {
      cfg.mode_index = r.unsigned_integer(v, p);
    } else if (key == "component") {
      cfg.component = static_cast<int>(r.unsigned_integer(v, p));
      if (cfg.component > 2) r.fail(p, "must be 0, 1 or 2");
    } else if (key == "bins") {
      cfg.bins = r.unsigned_integer(v, p, 1);
    } else if (key == "oscillator") {
      r.oscillator(v, p, cfg);
    } else if (key == "points") {
      cfg.points = r.unsigned_integer(v, p, 2);
    } else if (key == "sweep") {
      if (!v.is_array() || v.empty()) r.fail(p, "expected a non-empty array of grids");
      cfg.sweep.clear();
      for (std::size_t i = 0; i < v.size(); ++i) cfg.sweep.push_back(r.grid(v[i], Reader::with(p, i)));
    } else if (key == "direction") {
      cfg.direction = r.vec3(v, p);
      if (norm(cfg.direction) == 0.0) r.fail(p, "must be nonzero");
    } else if (key == "s_sigma_max") {
      cfg.s_sigma_max = r.positive(v, p);
    } else if (key == "s_points") {
      cfg.s_points = r.unsigned_integer(v, p, 2);
    } else {
      r.fail(p, "unknown key");
    }
  }
}

void apply_config_file(RunConfig& cfg, const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot read config file '" + path.string() + "'");
  std::ostringstream text;
  text << in.rdbuf();
  apply_config_text(cfg, text.str(), path.string());
}

void finalize(RunConfig& cfg) {
  if (uses_randomness(cfg.command) && !cfg.seed)
    throw ValidationError("seed is required: pass --seed N or set \"seed\" in the config");
  require(cfg.samples >= 1 || !uses_randomness(cfg.command), "samples must be >= 1");
  require(cfg.alpha > 0.0 && cfg.alpha < 1.0, "alpha must lie in (0, 1)");
  require(cfg.component >= 0 && cfg.component <= 2, "component must be 0, 1 or 2");
  require(cfg.bins >= 1, "bins must be >= 1");
  cfg.constants.validate();

  switch (cfg.command) {
    case Command::SampleMode:
    case Command::TotalField:
      if (!cfg.grid) cfg.grid = BoxGrid{4 * std::numbers::pi, 2.0};
      break;
    case Command::Oscillator:
      if (!cfg.oscillator) cfg.oscillator = OscillatorParams::from_constants(cfg.nu0, cfg.constants);
      cfg.oscillator->validate();
      cfg.nu0 = cfg.oscillator->nu0;
      if (!cfg.grid) cfg.grid = ShellGrid{default_shell_spec(*cfg.oscillator)};
      break;
    case Command::Figure1:
      require(cfg.points >= 2, "points must be >= 2");
      break;
    case Command::Generating:
      if (cfg.sweep.empty())
        for (double f : {1.0, 2.0, 4.0}) cfg.sweep.push_back(BoxGrid{8 * std::numbers::pi * std::cbrt(f), 1.0});
      require(cfg.s_points >= 2, "s_points must be >= 2");
      require(norm(cfg.direction) > 0.0, "direction must be nonzero");
      break;
  }
}

nlohmann::json manifest(const RunConfig& cfg) {
  json j;
  j["command"] = to_string(cfg.command);
  if (cfg.seed) j["seed"] = *cfg.seed;
  j["out"] = cfg.out.string();
  j["workers"] = cfg.workers;
  j["constants"] = cfg.constants;
  const auto point = json{{"r", {cfg.point.r.x, cfg.point.r.y, cfg.point.r.z}}, {"t", cfg.point.t}};
  switch (cfg.command) {
    case Command::SampleMode:
    case Command::TotalField:
    case Command::Oscillator:
      j["kind"] = to_string(cfg.kind);
      j["samples"] = cfg.samples;
      j["alpha"] = cfg.alpha;
      if (cfg.grid) j["grid"] = grid_to_json(*cfg.grid);
      j["point"] = point;
      break;
    default: break;
  }
  if (cfg.command == Command::SampleMode) j["mode_index"] = cfg.mode_index;
  if (cfg.command == Command::TotalField) {
    j["component"] = cfg.component;
    j["bins"] = cfg.bins;
  }
  if (cfg.command == Command::Oscillator) {
    if (cfg.oscillator)
      j["oscillator"] = *cfg.oscillator;
    else
      j["oscillator"] = {{"nu0", cfg.nu0}};
  }
  if (cfg.command == Command::Figure1) j["points"] = cfg.points;
  if (cfg.command == Command::Generating) {
    j["sweep"] = json::array();
    for (const auto& g : cfg.sweep) j["sweep"].push_back(grid_to_json(g));
    j["direction"] = {cfg.direction.x, cfg.direction.y, cfg.direction.z};
    j["s_sigma_max"] = cfg.s_sigma_max;
    j["s_points"] = cfg.s_points;
  }
  return j;
}

}  // namespace zpf::cli
