#include "rrlm/driver.hpp"

#include <CLI11.hpp>

#include <iostream>

namespace {

struct CommonOpts {
  std::string config;
  std::string preset_name = "desk";
  std::string out;
  std::uint64_t seed = 0;
  bool seed_set = false;
  bool out_set = false;
};

void add_common(CLI::App* cmd, CommonOpts& o) {
  cmd->add_option("--config", o.config, "key = value config file (overlays the preset)");
  cmd->add_option("--preset", o.preset_name, "constant preset: desk or paper43")
      ->check(CLI::IsMember({"desk", "paper43"}));
  cmd->add_option("--out", o.out, "output directory (overrides the config)")
      ->each([&](const std::string&) { o.out_set = true; });
  cmd->add_option("--seed", o.seed, "noise seed (overrides the config)")
      ->each([&](const std::string&) { o.seed_set = true; });
}

rrlm::RunManifest assemble(const CommonOpts& o) {
  rrlm::RunManifest m = rrlm::preset(o.preset_name);
  if (!o.config.empty()) rrlm::parse_manifest(o.config, m);
  if (o.out_set) m.out_dir = o.out;
  if (o.seed_set) m.seed = o.seed;
  return m;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"range-relaxed Levenberg-Marquardt solver and experiment driver"};
  app.require_subcommand(1);

  CommonOpts sim_opts, solve_opts, sweep_opts;
  auto* sim = app.add_subcommand("simulate", "generate exact and noisy data");
  add_common(sim, sim_opts);
  auto* solve = app.add_subcommand("solve", "run the solver on simulated data");
  add_common(solve, solve_opts);
  auto* sweep = app.add_subcommand("sweep", "run a noise/strategy sweep");
  add_common(sweep, sweep_opts);

  std::vector<std::string> report_dirs;
  std::string report_out;
  auto* report = app.add_subcommand("report", "aggregate run dirs into plot-ready columns");
  report->add_option("dirs", report_dirs, "completed run directories")->required();
  report->add_option("--out", report_out, "output directory")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (sim->parsed()) return rrlm::cmd_simulate(assemble(sim_opts));
    if (solve->parsed()) return rrlm::cmd_solve(assemble(solve_opts));
    if (sweep->parsed()) return rrlm::cmd_sweep(assemble(sweep_opts));
    if (report->parsed()) return rrlm::cmd_report(report_dirs, report_out);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
