#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <sstream>

#include "CLI11.hpp"

#include "zpf/error.hpp"
#include "zpf/format.hpp"
#include "zpf/quadrature.hpp"
#include "zpf/reference_dists.hpp"
#include "zpf/statistics.hpp"

namespace zpf::cli {

namespace {

using json = nlohmann::json;

void write_file(const RunConfig& cfg, const std::string& name, const std::function<void(std::ostream&)>& body) {
  std::filesystem::create_directories(cfg.out);
  const auto path = cfg.out / name;
  std::ofstream os(path);
  if (!os) throw Error("cannot write '" + path.string() + "'");
  body(os);
  if (!os) throw Error("write failed for '" + path.string() + "'");
}

void write_json(const RunConfig& cfg, const std::string& name, const json& j) {
  write_file(cfg, name, [&](std::ostream& os) { os << j.dump(2) << '\n'; });
}

json vec(const Vec3& v) { return {v.x, v.y, v.z}; }

json grid_summary(const ModeGrid& grid, const RunConfig& cfg) {
  json g = grid_to_json(*cfg.grid);
  g["modes"] = grid.size();
  return g;
}

json sample_mode(const RunConfig& cfg) {
  const auto grid = build(*cfg.grid, cfg.constants);
  if (cfg.mode_index >= grid.size())
    throw ValidationError("mode_index " + std::to_string(cfg.mode_index) + " out of range: grid has " +
                          std::to_string(grid.size()) + " modes");
  const Mode& m = grid[cfg.mode_index];
  const auto set = sample_mode_batch(cfg.kind, grid, cfg.mode_index, cfg.point, cfg.samples, *cfg.seed, cfg.workers);
  const auto xs = set.scalars();
  const double sigma = m.sigma;
  const double amp = std::numbers::sqrt2 * sigma;

  json s;
  s["command"] = "sample-mode";
  s["kind"] = to_string(cfg.kind);
  s["seed"] = *cfg.seed;
  s["samples"] = cfg.samples;
  s["grid"] = grid_summary(grid, cfg);
  s["mode"] = {{"index", cfg.mode_index}, {"k", vec(m.k)}, {"eps", vec(m.eps)}, {"omega", m.omega}, {"sigma", sigma}};
  s["point"] = {{"r", vec(cfg.point.r)}, {"t", cfg.point.t}};
  s["moments"] = moments(xs);
  s["ks_gaussian"] = ks_test(xs, [&](double x) { return gaussian_cdf(x, sigma); }, cfg.alpha);
  s["ks_arcsine"] = ks_test(xs, [&](double x) { return arcsine_cdf(x, amp); }, cfg.alpha);

  write_file(cfg, "samples.csv", [&](std::ostream& os) { write_csv(os, set); });
  return s;
}

json total_field(const RunConfig& cfg) {
  const auto grid = build(*cfg.grid, cfg.constants);
  const auto set = sample_field_batch(cfg.kind, grid, cfg.point, cfg.samples, *cfg.seed, cfg.workers);
  const auto xs = set.component(cfg.component);
  const double sigma = std::sqrt(field_component_variance(grid, cfg.component));
  const auto hist = histogram(xs, cfg.bins, -5 * sigma, 5 * sigma);

  json s;
  s["command"] = "total-field";
  s["kind"] = to_string(cfg.kind);
  s["seed"] = *cfg.seed;
  s["samples"] = cfg.samples;
  s["grid"] = grid_summary(grid, cfg);
  s["point"] = {{"r", vec(cfg.point.r)}, {"t", cfg.point.t}};
  s["component"] = cfg.component;
  s["sigma_component"] = sigma;
  if (const auto* box = std::get_if<BoxGrid>(&*cfg.grid))
    s["sigma_continuum"] = total_field_sigma(box->omega_cutoff, cfg.constants);
  s["moments"] = moments(xs);
  s["ks_gaussian"] = ks_test(xs, [&](double x) { return gaussian_cdf(x, sigma); }, cfg.alpha);

  write_file(cfg, "samples.csv", [&](std::ostream& os) { write_csv(os, set); });
  write_file(cfg, "histogram.csv", [&](std::ostream& os) { write_csv(os, hist); });
  return s;
}

json oscillator(const RunConfig& cfg, std::ostream& warn) {
  const OscillatorParams& p = *cfg.oscillator;
  const auto integral = resonance_integral(p, 100.0 * p.nu0);
  const auto grid = build(*cfg.grid, cfg.constants);
  const auto set = sample_coordinates(cfg.kind, grid, p, cfg.point.t, cfg.samples, *cfg.seed, cfg.workers);

  json axes = json::array();
  for (int a = 0; a < 3; ++a) {
    const auto xs = set.component(a);
    const double exact = oscillator_axis_variance(grid, p, unit_axis(a));
    axes.push_back({{"axis", a},
                    {"moments", moments(xs)},
                    {"exact_variance", exact},
                    {"ks_gaussian", ks_test(xs, [&](double x) { return gaussian_cdf(x, std::sqrt(exact)); }, cfg.alpha)}});
  }
  double r2 = 0.0;
  for (const auto& q : set.vectors()) r2 += q.x * q.x + q.y * q.y;
  r2 /= static_cast<double>(set.count());

  json warnings = json::array();
  if (!p.resonance_approximation_valid()) {
    const std::string w = "gamma * nu0 = " + format_double(p.gamma * p.nu0) +
                          " exceeds 1e-2; resonance-approximation predictions are unreliable";
    warn << "warning: " << w << '\n';
    warnings.push_back(w);
  }

  json s;
  s["command"] = "oscillator";
  s["kind"] = to_string(cfg.kind);
  s["seed"] = *cfg.seed;
  s["samples"] = cfg.samples;
  s["t"] = cfg.point.t;
  s["params"] = p;
  s["grid"] = grid_summary(grid, cfg);
  s["axes"] = axes;
  s["predicted_variance"] = predicted_variance(p, cfg.constants);
  s["resonance_variance"] = resonance_variance(p, cfg.constants);
  s["bohr_radius_sq"] = {{"predicted", bohr_radius_sq(p, cfg.constants)}, {"estimate", r2}};
  s["resonance_integral"] = {{"omega_max", 100.0 * p.nu0},
                             {"quadrature", integral.quadrature},
                             {"closed_form", integral.closed_form}};
  s["resonance_approximation_valid"] = p.resonance_approximation_valid();
  s["warnings"] = warnings;

  write_file(cfg, "coordinates.csv", [&](std::ostream& os) { write_csv(os, set); });
  return s;
}

void write_curve(const RunConfig& cfg, const std::string& name, const std::vector<double>& x,
                 const std::function<double(double)>& f) {
  write_file(cfg, name, [&](std::ostream& os) {
    os << "x,density\n";
    for (double v : x) os << format_double(v) << ',' << format_double(f(v)) << '\n';
  });
}

json figure1(const RunConfig& cfg) {
  constexpr int kLevel = 12;
  constexpr double kAlpha = 5.0;
  constexpr double kAmplitude = 1.0;  // sqrt(2 n + 1) / alpha
  const double lo = -1.5, hi = 1.5;
  const double dx = (hi - lo) / static_cast<double>(cfg.points);
  std::vector<double> x(cfg.points);
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = lo + (static_cast<double>(i) + 0.5) * dx;

  const auto pc = [](double v) { return classical_oscillator_pdf(v, kAmplitude); };
  const auto p12 = [](double v) { return quantum_oscillator_pdf(kLevel, v, kAlpha); };
  const auto p0 = [](double v) { return quantum_oscillator_pdf(0, v, 1.0); };
  write_curve(cfg, "classical.csv", x, pc);
  write_curve(cfg, "quantum_n12.csv", x, p12);
  write_curve(cfg, "quantum_n0.csv", x, p0);

  int zeros = 0;
  double prev = hermite_functions(kLevel, kAlpha * x.front()).back();
  for (std::size_t i = 1; i < x.size(); ++i) {
    const double cur = hermite_functions(kLevel, kAlpha * x[i]).back();
    if ((cur < 0) != (prev < 0)) ++zeros;
    prev = cur;
  }
  const auto peak = std::max_element(x.begin(), x.end(), [&](double a, double b) { return p0(a) < p0(b); });

  json s;
  s["command"] = "figure1";
  s["points"] = cfg.points;
  s["classical"] = {{"amplitude", kAmplitude}, {"density_at_0", pc(0.0)}};
  s["quantum_n12"] = {{"alpha", kAlpha},
                      {"normalization", quad::composite(p12, quad::uniform_edges(-3.0, 3.0, 600))},
                      {"interior_zeros", zeros}};
  s["quantum_n0"] = {{"alpha", 1.0}, {"peak_x", *peak}};
  return s;
}

json generating(const RunConfig& cfg) {
  const Vec3 dir = normalized(cfg.direction);
  json rows = json::array();
  std::ostringstream table;
  table << "grid,modes,s,s_sigma,boyer,gaussian,deviation\n";
  for (std::size_t g = 0; g < cfg.sweep.size(); ++g) {
    const auto grid = build(cfg.sweep[g], cfg.constants);
    const double sigma = std::sqrt(lattice_component_variance(grid, dir));
    require(sigma > 0.0, "sweep grid " + std::to_string(g) + " has no field component along direction");
    double worst = 0.0;
    for (std::size_t i = 0; i < cfg.s_points; ++i) {
      const double ss = cfg.s_sigma_max * static_cast<double>(i) / static_cast<double>(cfg.s_points - 1);
      const double s = ss / sigma;
      const double b = boyer_generating(s, dir, grid);
      const double gg = gaussian_generating(s, sigma);
      worst = std::max(worst, std::abs(b - gg));
      table << g << ',' << grid.size() << ',' << format_double(s) << ',' << format_double(ss) << ','
            << format_double(b) << ',' << format_double(gg) << ',' << format_double(std::abs(b - gg)) << '\n';
    }
    json row = {{"grid", g}, {"spec", grid_to_json(cfg.sweep[g])}, {"modes", grid.size()}, {"sigma", sigma},
                {"max_deviation", worst}};
    if (grid.volume()) row["volume"] = *grid.volume();
    rows.push_back(row);
  }
  write_file(cfg, "generating.csv", [&](std::ostream& os) { os << table.str(); });
  write_file(cfg, "convergence.csv", [&](std::ostream& os) {
    os << "grid,modes,volume,sigma,max_deviation\n";
    for (const auto& r : rows)
      os << r["grid"].get<std::size_t>() << ',' << r["modes"].get<std::size_t>() << ','
         << (r.contains("volume") ? format_double(r["volume"].get<double>()) : "") << ','
         << format_double(r["sigma"].get<double>()) << ',' << format_double(r["max_deviation"].get<double>()) << '\n';
  });

  json s;
  s["command"] = "generating";
  s["direction"] = vec(dir);
  s["convergence"] = rows;
  return s;
}

}  // namespace

json run_command(const RunConfig& cfg, std::ostream& warn) {
  json s;
  switch (cfg.command) {
    case Command::SampleMode: s = sample_mode(cfg); break;
    case Command::TotalField: s = total_field(cfg); break;
    case Command::Oscillator: s = oscillator(cfg, warn); break;
    case Command::Figure1: s = figure1(cfg); break;
    case Command::Generating: s = generating(cfg); break;
  }
  write_json(cfg, "summary.json", s);
  write_json(cfg, "manifest.json", manifest(cfg));
  return s;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Monte Carlo experiments on stochastic zero-point fields", "zpfsim"};
  app.require_subcommand(1, 1);

  std::string config, out_dir, kind;
  std::uint64_t seed = 0;
  std::size_t samples = 0, mode = 0;
  unsigned workers = 0;
  int component = 0;
  double t = 0.0, nu0 = 1.0;
  std::vector<double> r;
  bool as_json = false;

  struct Sub {
    Command command;
    CLI::App* app;
  };
  std::vector<Sub> subs;
  const auto add = [&](Command c, const std::string& help) {
    CLI::App* sub = app.add_subcommand(std::string(to_string(c)), help);
    sub->add_option("--config", config, "JSON run configuration")->check(CLI::ExistingFile);
    sub->add_option("--out", out_dir, "Output directory");
    sub->add_flag("--json", as_json, "Print the summary JSON to stdout");
    if (uses_randomness(c)) {
      sub->add_option("--seed", seed, "RNG seed (required here or in the config)");
      sub->add_option("--kind", kind, "Field kind")->check(CLI::IsMember({"boyer", "modified"}));
      sub->add_option("--samples", samples, "Number of realizations")->check(CLI::PositiveNumber);
      sub->add_option("--workers", workers, "Worker threads (0 = hardware concurrency)");
      sub->add_option("--t", t, "Evaluation time");
    }
    subs.push_back({c, sub});
    return sub;
  };
  add(Command::SampleMode, "Single-mode amplitude samples with KS against Gaussian and arcsine laws")
      ->add_option("--mode", mode, "Mode index");
  auto* total = add(Command::TotalField, "Total field samples at one spacetime point");
  total->add_option("--component", component, "Cartesian component 0, 1 or 2")->check(CLI::Range(0, 2));
  add(Command::Oscillator, "Oscillator coordinate ensemble driven by the field")
      ->add_option("--nu0", nu0, "Natural angular frequency")->check(CLI::PositiveNumber);
  add(Command::Figure1, "Classical and quantum oscillator position densities");
  add(Command::Generating, "Bessel-product vs Gaussian generating functions across lattice densities");
  for (auto& s : subs)
    if (s.command == Command::SampleMode || s.command == Command::TotalField)
      s.app->add_option("--r", r, "Evaluation position x y z")->expected(3);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 1;
  }

  try {
    const auto it = std::find_if(subs.begin(), subs.end(), [](const Sub& s) { return s.app->parsed(); });
    const Command command = it->command;
    CLI::App& sub = *it->app;
    RunConfig cfg = defaults_for(command);
    if (!config.empty()) apply_config_file(cfg, config);
    const auto given = [&](const char* name) { return sub.get_option_no_throw(name) && sub.count(name) > 0; };
    if (given("--out")) cfg.out = out_dir;
    if (given("--seed")) cfg.seed = seed;
    if (given("--kind")) cfg.kind = parse_field_kind(kind);
    if (given("--samples")) cfg.samples = samples;
    if (given("--workers")) cfg.workers = workers;
    if (given("--t")) cfg.point.t = t;
    if (given("--r")) cfg.point.r = {r[0], r[1], r[2]};
    if (given("--mode")) cfg.mode_index = mode;
    if (given("--component")) cfg.component = component;
    if (given("--nu0")) {
      cfg.nu0 = nu0;
      cfg.oscillator.reset();
    }
    finalize(cfg);
    const json summary = run_command(cfg, err);
    if (as_json)
      out << summary.dump(2) << '\n';
    else
      out << to_string(command) << ": wrote results to " << cfg.out.string() << '\n';
    return 0;
  } catch (const ConvergenceError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace zpf::cli
