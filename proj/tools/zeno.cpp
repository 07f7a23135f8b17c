#include <CLI11.hpp>

#include <iostream>

#include "cli/commands.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Zeno/anti-Zeno decay simulator: golden-rule theory and trajectory Monte Carlo"};
  app.set_version_flag("--version", zeno::cli::tool_version());
  app.require_subcommand(1);

  zeno::cli::CommandOptions opts;
  std::uint64_t seed = 0;
  std::size_t trajectories = 0;
  std::string config, out, input;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--config", config, "YAML run configuration")->check(CLI::ExistingFile);
    sub->add_option("--seed", seed, "Master seed (overrides the config)");
    sub->add_option("--out", out, "Output directory (overrides the config)");
    sub->add_option("--trajectories", trajectories, "Trajectories per point (overrides the config)");
    sub->add_option("--threads", opts.threads, "OpenMP threads, 0 for the runtime default")->check(CLI::NonNegativeNumber);
  };
  common(app.add_subcommand("theory-sweep", "Golden-rule T1 and dT1 over detuning x rate"));
  common(app.add_subcommand("mc-sweep", "Trajectory inversion-recovery sweep with corrections"));
  common(app.add_subcommand("spectroscopy", "Weak-probe line shapes and line metrics"));
  common(app.add_subcommand("ramsey", "Ramsey fringes after one quasi-measurement"));
  CLI::App* psd = app.add_subcommand("psd", "PSD and 1/f^alpha fit of a T1 time series");
  common(psd);
  psd->add_option("--input", input, "CSV with columns time_us,t1_us")->required()->check(CLI::ExistingFile);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : zeno::cli::kExitConfig;
  }

  CLI::App* sub = app.get_subcommands().front();
  if (!config.empty()) opts.config_path = config;
  if (sub->count("--seed")) opts.seed = seed;
  if (!out.empty()) opts.out_dir = out;
  if (sub->count("--trajectories")) opts.trajectories = trajectories;
  if (!input.empty()) opts.input = input;
  return zeno::cli::run_command(sub->get_name(), opts, std::cout, std::cerr);
}
