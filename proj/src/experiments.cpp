#include "darkstate/experiments.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <set>

#include <fmt/format.h>
#include <json.hpp>

#include "darkstate/perturbation.hpp"
#include "darkstate/spectra.hpp"
#include "darkstate/svg.hpp"

namespace darkstate {

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

const std::set<std::string> kKnownKeys = {
    "omega", "u",  "u_grid.lo",    "u_grid.hi", "u_grid.steps", "gamma", "local_dim", "N",
    "n_max", "t_end", "dt", "sample_every", "mode",    "order",        "output_dir"};

const std::set<std::string> kCommands = {"spectrum", "sweep", "perturb", "evolve", "verify"};

constexpr std::array<const char*, 10> kPalette = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
                                                  "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};

void flatten(const json& node, const std::string& prefix, std::map<std::string, json>& out) {
  for (const auto& [key, value] : node.items()) {
    const std::string name = prefix.empty() ? key : prefix + "." + key;
    if (value.is_object()) {
      flatten(value, name, out);
    } else {
      out[name] = value;
    }
  }
}

double as_number(const std::string& key, const json& v) {
  if (!v.is_number()) throw ConfigError(fmt::format("config key '{}' must be a number", key));
  return v.get<double>();
}

int as_integer(const std::string& key, const json& v) {
  if (!v.is_number_integer()) throw ConfigError(fmt::format("config key '{}' must be an integer", key));
  return v.get<int>();
}

std::string as_string(const std::string& key, const json& v) {
  if (!v.is_string()) throw ConfigError(fmt::format("config key '{}' must be a string", key));
  return v.get<std::string>();
}

void assign(RunConfig& c, const std::string& key, const json& v) {
  if (key == "omega") {
    c.omega = as_number(key, v);
  } else if (key == "u") {
    c.u = as_number(key, v);
  } else if (key.starts_with("u_grid.")) {
    if (!c.u_grid) c.u_grid = UGrid{};
    if (key == "u_grid.lo") c.u_grid->lo = as_number(key, v);
    if (key == "u_grid.hi") c.u_grid->hi = as_number(key, v);
    if (key == "u_grid.steps") c.u_grid->steps = as_integer(key, v);
  } else if (key == "gamma") {
    c.gamma = as_number(key, v);
  } else if (key == "local_dim") {
    c.local_dim = as_integer(key, v);
  } else if (key == "N") {
    c.manifold = as_integer(key, v);
  } else if (key == "n_max") {
    c.n_max = as_integer(key, v);
  } else if (key == "t_end") {
    c.t_end = as_number(key, v);
  } else if (key == "dt") {
    c.dt = as_number(key, v);
  } else if (key == "sample_every") {
    c.sample_every = as_number(key, v);
  } else if (key == "mode") {
    c.mode = as_string(key, v);
  } else if (key == "order") {
    c.order = as_integer(key, v);
  } else if (key == "output_dir") {
    c.output_dir = as_string(key, v);
  }
}

const char* class_color(const std::string& label) {
  if (label == "dark") return "#000000";
  if (label == "bright") return "#d62728";
  return "#1f77b4";
}

int manifold_or(const RunConfig& c, int fallback) { return c.manifold.value_or(fallback); }

fs::path output_path(const RunConfig& c, const std::string& stem, const std::string& extension) {
  return fs::path(c.output_dir) / (stem + extension);
}

std::string grid_tag(const UGrid& g) { return format_u(g.lo) + "-" + format_u(g.hi); }

}  // namespace

std::vector<double> UGrid::values() const {
  std::vector<double> out(static_cast<std::size_t>(steps));
  for (int i = 0; i < steps; ++i) {
    out[static_cast<std::size_t>(i)] = steps == 1 ? lo : lo + (hi - lo) * i / (steps - 1);
  }
  return out;
}

ModelParams RunConfig::params() const {
  ModelParams p;
  p.omega = omega_or_default();
  p.u = u;
  p.gamma = gamma;
  p.local_dim = local_dim;
  return p;
}

double RunConfig::omega_or_default() const {
  // Dynamics observables are omega-independent; other figures use E in units of omega.
  return omega.value_or(command == "evolve" ? 0.0 : 1.0);
}

void validate(const RunConfig& c) {
  if (!kCommands.contains(c.command)) throw ConfigError(fmt::format("unknown command '{}'", c.command));
  if (c.gamma != 1.0) throw ConfigError(fmt::format("gamma is the unit of the simulation and must be 1, got {}", c.gamma));
  c.params().validate();
  if (!std::isfinite(c.t_end) || !(c.t_end > 0.0)) throw ConfigError("t_end must be > 0");
  if (!(c.dt > 0.0) || c.dt > 0.01) throw ConfigError(fmt::format("dt must lie in (0, 0.01], got {}", c.dt));
  if (!(c.sample_every >= c.dt)) throw ConfigError("sample_every must be >= dt");
  if (c.order < 0 || c.order > 2) throw ConfigError(fmt::format("order must be 0, 1 or 2, got {}", c.order));
  if (c.n_max < 0) throw ConfigError("n_max must be >= 0");
  parse_mode(c.mode);
  if (c.u_grid) {
    const UGrid& g = *c.u_grid;
    if (g.steps < 2) throw ConfigError(fmt::format("u_grid.steps must be >= 2, got {}", g.steps));
    if (!std::isfinite(g.lo) || !std::isfinite(g.hi) || g.lo < 0.0 || !(g.hi > g.lo)) {
      throw ConfigError("u_grid needs 0 <= lo < hi");
    }
  }
  if (c.manifold) {
    const int n = *c.manifold;
    const int limit = c.command == "evolve" ? c.local_dim - 1 : 2 * (c.local_dim - 1);
    if (n < 0 || n > limit) throw ConfigError(fmt::format("N must lie in [0, {}], got {}", limit, n));
  }
}

RunConfig parse_run_config(const std::string& command, const std::string& json_text,
                           const std::vector<std::string>& overrides) {
  json doc;
  try {
    doc = json_text.empty() ? json::object() : json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(fmt::format("config is not valid JSON: {}", e.what()));
  }
  if (!doc.is_object()) throw ConfigError("config must be a JSON object");

  std::map<std::string, json> flat;
  flatten(doc, "", flat);
  for (const std::string& o : overrides) {
    const auto eq = o.find('=');
    if (eq == std::string::npos || eq == 0) throw ConfigError(fmt::format("override '{}' is not key=value", o));
    const std::string key = o.substr(0, eq);
    const std::string text = o.substr(eq + 1);
    json value = json::parse(text, nullptr, false);
    if (value.is_discarded()) value = text;
    flat[key] = value;
  }

  RunConfig c;
  c.command = command;
  for (const auto& [key, value] : flat) {
    if (!kKnownKeys.contains(key)) throw ConfigError(fmt::format("unknown config key '{}'", key));
    assign(c, key, value);
  }
  validate(c);
  return c;
}

RunConfig load_run_config(const std::string& command, const fs::path& path, const std::vector<std::string>& overrides) {
  std::string text;
  try {
    text = read_text_file(path);
  } catch (const std::exception& e) {
    throw ConfigError(e.what());
  }
  return parse_run_config(command, text, overrides);
}

std::string format_u(double u) { return fmt::format("{:g}", u); }

std::vector<Complex> numeric_dark_shift(const ModelParams& params, int manifold, const std::vector<double>& u_values) {
  std::vector<double> grid;
  const bool prepend = u_values.empty() || u_values.front() > 0.0;
  if (prepend) grid.push_back(0.0);
  grid.insert(grid.end(), u_values.begin(), u_values.end());

  const SweepResult sweep = sweep_u(params, manifold, grid);
  const int branch = sweep.branch_ids[0][static_cast<std::size_t>(sweep.systems[0].index_of_dark())];
  std::vector<Complex> out;
  for (std::size_t g = prepend ? 1 : 0; g < grid.size(); ++g) {
    out.push_back(sweep.on_branch(g, branch).lambda - params.omega * manifold);
  }
  return out;
}

std::string burst_json(const BurstMetrics& numerical, const BurstMetrics& perturbative) {
  auto record = [](const BurstMetrics& b) {
    nlohmann::ordered_json j;
    j["t_peak"] = b.t_peak;
    j["i_peak"] = b.i_peak;
    j["i_initial"] = b.i_initial;
    j["is_burst"] = b.is_burst;
    return j;
  };
  nlohmann::ordered_json doc;
  doc["numerical"] = record(numerical);
  doc["perturbative"] = record(perturbative);
  return doc.dump(2) + "\n";
}

// ---------------------------------------------------------------------------------------------
// spectrum

std::vector<fs::path> cmd_spectrum(const RunConfig& config) {
  const ModelParams params = config.params();
  const BasisMap basis(params.local_dim);
  std::string csv = std::string(kSpectrumCsvHeader) + "\n";
  for (int n = 0; n <= basis.max_manifold(); ++n) {
    if (config.manifold && *config.manifold != n) continue;
    csv += spectrum_csv_rows(manifold_spectrum(params, basis, n));
  }
  const std::string stem =
      fmt::format("spectrum_{}_{}", config.manifold ? std::to_string(*config.manifold) : "all", format_u(params.u));
  const fs::path csv_path = output_path(config, stem, ".csv");
  const fs::path svg_path = output_path(config, stem, ".svg");
  write_text_file(csv_path, csv);
  write_text_file(svg_path, spectrum_svg(read_csv(csv_path)));
  return {csv_path, svg_path};
}

std::string spectrum_svg(const CsvTable& spectrum) {
  const auto re = spectrum.numbers("re_lambda");
  const auto rate = spectrum.numbers("decay_rate");
  const auto manifold = spectrum.numbers("manifold");
  const auto cls = spectrum.strings("class");

  PlotPanel panel{"Eigenspectrum of H_eff", "decay rate / gamma", "E", {}, {}};
  std::map<std::string, PlotSeries> by_class;
  for (const char* name : {"dark", "faint", "bright"}) {
    by_class[name] = PlotSeries{name, class_color(name), MarkerStyle::kDots, {}, {}};
  }
  int max_manifold = 0;
  for (std::size_t i = 0; i < re.size(); ++i) {
    const std::string key = cls[i].starts_with("faint") ? "faint" : cls[i];
    by_class[key].x.push_back(rate[i]);
    by_class[key].y.push_back(re[i]);
    max_manifold = std::max(max_manifold, static_cast<int>(manifold[i]));
  }
  for (const char* name : {"dark", "faint", "bright"}) panel.series.push_back(by_class[name]);

  // Manifolds up to half the top manifold are free of truncation; mark the level between them.
  const int half = max_manifold / 2;
  double below = -1e300;
  double above = 1e300;
  for (std::size_t i = 0; i < re.size(); ++i) {
    const int n = static_cast<int>(manifold[i]);
    if (n == half) below = std::max(below, re[i]);
    if (n == half + 1) above = std::min(above, re[i]);
  }
  if (below > -1e300 && above < 1e300) panel.lines.push_back({0.5 * (below + above), "half filling", false});
  return render_svg({panel});
}

// ---------------------------------------------------------------------------------------------
// sweep

std::vector<fs::path> cmd_sweep(const RunConfig& config) {
  const ModelParams params = config.params();
  const int n = manifold_or(config, 2);
  const UGrid grid = config.u_grid.value_or(UGrid{0.0, 2.5, 251});
  const std::vector<double> u = grid.values();

  const SweepResult sweep = sweep_u(params, n, u);
  std::string csv = std::string(kSpectrumCsvHeader) + "\n";
  for (std::size_t g = 0; g < sweep.systems.size(); ++g) {
    csv += spectrum_csv_rows(sweep.systems[g], sweep.branch_ids[g]);
  }

  std::string ep_csv = std::string(kExceptionalPointCsvHeader) + "\n";
  for (const ExceptionalPoint& ep : exceptional_point_scan(params, n, grid.lo, grid.hi)) {
    ep_csv += fmt::format("{},{:.15g},{:.6g},{:.6g}\n", n, ep.u, ep.gap, ep.self_overlap);
  }

  const std::string stem = fmt::format("sweep_{}_{}", n, grid_tag(grid));
  const fs::path csv_path = output_path(config, stem, ".csv");
  const fs::path ep_path = output_path(config, stem, "_ep.csv");
  const fs::path svg_path = output_path(config, stem, ".svg");
  write_text_file(csv_path, csv);
  write_text_file(ep_path, ep_csv);
  write_text_file(svg_path, sweep_svg(read_csv(csv_path), read_csv(ep_path)));
  return {csv_path, ep_path, svg_path};
}

std::string sweep_svg(const CsvTable& branches, const CsvTable& exceptional_points) {
  const auto branch = branches.numbers("branch_id");
  const auto u = branches.numbers("u");
  const auto re = branches.numbers("re_lambda");
  const auto im = branches.numbers("im_lambda");

  std::map<int, std::pair<PlotSeries, PlotSeries>> lines;
  for (std::size_t i = 0; i < u.size(); ++i) {
    const int b = static_cast<int>(branch[i]);
    auto& [re_series, im_series] = lines[b];
    if (re_series.label.empty()) {
      const char* color = kPalette[static_cast<std::size_t>(b) % kPalette.size()];
      re_series = PlotSeries{fmt::format("branch {}", b), color, MarkerStyle::kLine, {}, {}};
      im_series = PlotSeries{"", color, MarkerStyle::kLine, {}, {}};
    }
    re_series.x.push_back(u[i]);
    re_series.y.push_back(re[i]);
    im_series.x.push_back(u[i]);
    im_series.y.push_back(im[i]);
  }

  PlotPanel re_panel{"Re lambda", "U / gamma", "Re lambda", {}, {}};
  PlotPanel im_panel{"Im lambda", "U / gamma", "Im lambda", {}, {}};
  for (auto& [b, pair] : lines) {
    re_panel.series.push_back(pair.first);
    im_panel.series.push_back(pair.second);
  }
  for (double ep : exceptional_points.numbers("u")) {
    const std::string label = fmt::format("EP {:.4f}", ep);
    re_panel.lines.push_back({ep, label, true});
    im_panel.lines.push_back({ep, label, true});
  }
  return render_svg({re_panel, im_panel}, 2);
}

// ---------------------------------------------------------------------------------------------
// perturb

std::vector<fs::path> cmd_perturb(const RunConfig& config) {
  ModelParams params = config.params();
  params.local_dim = std::max(params.local_dim, config.n_max + 1);
  const UGrid grid = config.u_grid.value_or(UGrid{0.025, 0.5, 20});
  const std::vector<double> u = grid.values();

  std::string csv = std::string(kPerturbCsvHeader) + "\n";
  for (int n = 0; n <= config.n_max; ++n) {
    if (config.manifold && *config.manifold != n) continue;
    const std::vector<Complex> numeric = numeric_dark_shift(params, n, u);
    for (std::size_t g = 0; g < u.size(); ++g) {
      const Complex analytic = total_energy_correction(params.with_u(u[g]), n);
      csv += fmt::format("{},{:.15g},{:.15g},{:.15g},{:.15g},{:.15g},{:.6e}\n", n, u[g], analytic.real(),
                         analytic.imag(), numeric[g].real(), numeric[g].imag(), std::abs(analytic - numeric[g]));
    }
  }

  const std::string stem =
      fmt::format("perturb_{}_{}", config.manifold ? std::to_string(*config.manifold) : "all", grid_tag(grid));
  const fs::path csv_path = output_path(config, stem, ".csv");
  const fs::path svg_path = output_path(config, stem, ".svg");
  write_text_file(csv_path, csv);
  write_text_file(svg_path, perturb_svg(read_csv(csv_path)));
  return {csv_path, svg_path};
}

std::string perturb_svg(const CsvTable& corrections) {
  const auto n = corrections.numbers("N");
  const auto u = corrections.numbers("u");
  const auto re_a = corrections.numbers("re_correction");
  const auto im_a = corrections.numbers("im_correction");
  const auto re_n = corrections.numbers("re_numeric_shift");
  const auto im_n = corrections.numbers("im_numeric_shift");

  struct Group {
    PlotSeries re_analytic, re_numeric, im_analytic, im_numeric;
  };
  std::map<int, Group> groups;
  for (std::size_t i = 0; i < u.size(); ++i) {
    const int key = static_cast<int>(n[i]);
    auto [it, inserted] = groups.try_emplace(key);
    Group& grp = it->second;
    if (inserted) {
      const char* color = kPalette[static_cast<std::size_t>(key) % kPalette.size()];
      grp.re_analytic = PlotSeries{fmt::format("N={}", key), color, MarkerStyle::kCrosses, {}, {}};
      grp.re_numeric = PlotSeries{"", color, MarkerStyle::kDots, {}, {}};
      grp.im_analytic = PlotSeries{"", color, MarkerStyle::kCrosses, {}, {}};
      grp.im_numeric = PlotSeries{"", color, MarkerStyle::kDots, {}, {}};
    }
    grp.re_analytic.x.push_back(u[i]);
    grp.re_analytic.y.push_back(re_a[i]);
    grp.re_numeric.x.push_back(u[i]);
    grp.re_numeric.y.push_back(re_n[i]);
    grp.im_analytic.x.push_back(u[i]);
    grp.im_analytic.y.push_back(im_a[i]);
    grp.im_numeric.x.push_back(u[i]);
    grp.im_numeric.y.push_back(im_n[i]);
  }

  PlotPanel re_panel{"Dark-state energy shift (x analytic, dots numeric)", "U / gamma", "Re shift", {}, {}};
  PlotPanel im_panel{"Dark-state decay shift (x analytic, dots numeric)", "U / gamma", "Im shift", {}, {}};
  for (auto& [key, grp] : groups) {
    re_panel.series.push_back(grp.re_analytic);
    re_panel.series.push_back(grp.re_numeric);
    im_panel.series.push_back(grp.im_analytic);
    im_panel.series.push_back(grp.im_numeric);
  }
  return render_svg({re_panel, im_panel}, 2);
}

// ---------------------------------------------------------------------------------------------
// evolve

std::vector<fs::path> cmd_evolve(const RunConfig& config) {
  const ModelParams params = config.params();
  const int n = manifold_or(config, 2);
  EvolveOptions options;
  options.t_end = config.t_end;
  options.dt = config.dt;
  options.sample_every = config.sample_every;
  options.mode = parse_mode(config.mode);

  const Trajectory numerical = evolve(params, gram_schmidt_dark_state(params, n), options);
  const Trajectory perturbative = evolve(params, assemble_state(params, n, config.order), options);

  const std::string stem = fmt::format("evolve_{}_{}", n, format_u(params.u));
  const fs::path numerical_path = output_path(config, stem, "_numerical.csv");
  const fs::path perturbative_path = output_path(config, stem, "_perturbative.csv");
  const fs::path burst_path = output_path(config, stem, "_burst.json");
  const fs::path svg_path = output_path(config, stem, ".svg");
  write_text_file(numerical_path, trajectory_csv(numerical));
  write_text_file(perturbative_path, trajectory_csv(perturbative));
  write_text_file(burst_path, burst_json(burst_metrics(intensity(numerical)), burst_metrics(intensity(perturbative))));
  write_text_file(svg_path, evolve_svg(read_csv(numerical_path), read_csv(perturbative_path)));
  return {numerical_path, perturbative_path, burst_path, svg_path};
}

std::string evolve_svg(const CsvTable& numerical, const CsvTable& perturbative) {
  PlotPanel pops{"Manifold populations (solid numerical, dashed perturbative)", "t gamma", "population", {}, {}};
  PlotPanel light{"Emission intensity", "t gamma", "gamma <b^dag b>", {}, {}};

  auto add = [&](const CsvTable& table, bool dashed) {
    const auto t = table.numbers("t");
    const MarkerStyle style = dashed ? MarkerStyle::kDashedLine : MarkerStyle::kLine;
    for (std::size_t k = 0;; ++k) {
      const std::string column = fmt::format("pop_manifold_{}", k);
      if (std::find(table.header.begin(), table.header.end(), column) == table.header.end()) break;
      const auto p = table.numbers(column);
      // Manifolds that never hold population only clutter the plot.
      if (*std::max_element(p.begin(), p.end()) < 1e-6) continue;
      pops.series.push_back(
          PlotSeries{dashed ? "" : fmt::format("N={}", k), kPalette[k % kPalette.size()], style, t, p});
    }
    light.series.push_back(PlotSeries{dashed ? "perturbative" : "numerical", dashed ? "#d62728" : "#1f77b4", style, t,
                                      table.numbers("intensity")});
  };
  add(numerical, false);
  add(perturbative, true);
  return render_svg({pops, light}, 2);
}

}  // namespace darkstate
