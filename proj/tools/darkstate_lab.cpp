// darkstate-lab: figure-reproduction and verification front end.
#include <cstdio>
#include <exception>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include "darkstate/acceptance.hpp"
#include "darkstate/experiments.hpp"

namespace ds = darkstate;

namespace {

int run_verify() {
  bool all = true;
  for (const ds::CriterionResult& r : ds::run_acceptance()) {
    std::puts(ds::format_result(r).c_str());
    all = all && r.passed;
  }
  return all ? 0 : static_cast<int>(ds::ExitCode::kFailure);
}

int run_figure(const std::string& command, const std::string& config_path, const std::string& out_dir,
               const std::vector<std::string>& overrides) {
  std::vector<std::string> all = overrides;
  if (!out_dir.empty()) all.push_back("output_dir=\"" + out_dir + "\"");
  const ds::RunConfig config = config_path.empty() ? ds::parse_run_config(command, "{}", all)
                                                   : ds::load_run_config(command, config_path, all);
  std::vector<std::filesystem::path> written;
  if (command == "spectrum") written = ds::cmd_spectrum(config);
  if (command == "sweep") written = ds::cmd_sweep(config);
  if (command == "perturb") written = ds::cmd_perturb(config);
  if (command == "evolve") written = ds::cmd_evolve(config);
  for (const auto& path : written) std::printf("wrote %s\n", path.string().c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dissipatively coupled anharmonic oscillators: spectra, perturbation theory and dynamics"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  std::vector<std::string> overrides;
  const std::pair<const char*, const char*> figures[] = {
      {"spectrum", "eigenspectrum of every excitation manifold"},
      {"sweep", "branch-tracked eigenvalues against U with exceptional points"},
      {"perturb", "perturbative dark-state shifts against the eigensolver"},
      {"evolve", "Lindblad relaxation from numerical and perturbative dark states"},
  };
  for (const auto& [name, help] : figures) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("--config", config_path, "JSON config file");
    sub->add_option("--out", out_dir, "output directory");
    sub->add_option("overrides", overrides, "key=value config overrides");
  }
  app.add_subcommand("verify", "run the acceptance suite");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : static_cast<int>(ds::ExitCode::kConfig);
  }

  const std::string command = app.get_subcommands().front()->get_name();
  try {
    if (command == "verify") return run_verify();
    return run_figure(command, config_path, out_dir, overrides);
  } catch (const ds::Error& e) {
    std::fprintf(stderr, "darkstate-lab %s: %s\n", command.c_str(), e.what());
    return static_cast<int>(e.exit_code());
  } catch (const std::exception& e) {
    std::fprintf(stderr, "darkstate-lab %s: %s\n", command.c_str(), e.what());
    return static_cast<int>(ds::ExitCode::kFailure);
  }
}
