#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "darkstate/csv.hpp"
#include "darkstate/dynamics.hpp"
#include "darkstate/model.hpp"

namespace darkstate {

struct UGrid {
  double lo = 0.0;
  double hi = 0.0;
  int steps = 2;

  [[nodiscard]] std::vector<double> values() const;
};

/// Parameters shared by all subcommands. Keys are flat; nested JSON objects are read with
/// dotted names (u_grid.lo, u_grid.hi, u_grid.steps).
struct RunConfig {
  std::string command;
  std::optional<double> omega;  // command default when absent
  double u = 0.0;
  std::optional<UGrid> u_grid;
  double gamma = 1.0;
  int local_dim = 6;
  std::optional<int> manifold;  // key "N"
  int n_max = 6;
  double t_end = 20.0;
  double dt = 0.005;
  double sample_every = 0.05;
  std::string mode = "lindblad";
  int order = 2;
  std::string output_dir = ".";

  [[nodiscard]] ModelParams params() const;
  [[nodiscard]] double omega_or_default() const;
};

/// Parses a JSON config, applies `key=value` overrides (values parsed as JSON, else taken as
/// strings) and validates. Throws ConfigError on unknown keys, bad types or invalid values.
RunConfig parse_run_config(const std::string& command, const std::string& json_text,
                           const std::vector<std::string>& overrides = {});
RunConfig load_run_config(const std::string& command, const std::filesystem::path& path,
                          const std::vector<std::string>& overrides = {});

/// Checks parameter invariants for the configured command.
void validate(const RunConfig& config);

/// "0.5", "2.5", "0"
std::string format_u(double u);

// Each command writes CSV files, then renders its SVG from the CSV it just wrote.
// All return the paths written, CSV first.
std::vector<std::filesystem::path> cmd_spectrum(const RunConfig& config);
std::vector<std::filesystem::path> cmd_sweep(const RunConfig& config);
std::vector<std::filesystem::path> cmd_perturb(const RunConfig& config);
std::vector<std::filesystem::path> cmd_evolve(const RunConfig& config);

std::string spectrum_svg(const CsvTable& spectrum);
std::string sweep_svg(const CsvTable& branches, const CsvTable& exceptional_points);
std::string perturb_svg(const CsvTable& corrections);
std::string evolve_svg(const CsvTable& numerical, const CsvTable& perturbative);

inline constexpr const char* kPerturbCsvHeader =
    "N,u,re_correction,im_correction,re_numeric_shift,im_numeric_shift,residual";
inline constexpr const char* kExceptionalPointCsvHeader = "manifold,u,gap,self_overlap";

/// Dark-branch eigenvalue shift lambda_dark(u) - N omega for each u, following the branch that
/// is dark at u = 0.
std::vector<Complex> numeric_dark_shift(const ModelParams& params, int manifold, const std::vector<double>& u_values);

std::string burst_json(const BurstMetrics& numerical, const BurstMetrics& perturbative);

}  // namespace darkstate
