// Command line driver: run, graph-stats, bounds, sweep.
#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "odopt/config.hpp"
#include "odopt/csv.hpp"
#include "odopt/error.hpp"
#include "odopt/experiment.hpp"
#include "odopt/kernels.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitRuntime = 3;

struct CommonFlags {
  std::string config;
  std::string preset;
  std::optional<std::uint64_t> seed;
  std::optional<long> horizon;
  std::string out = "out";
  bool dump_matrices = false;
  bool dump_weights = false;
  int threads = 0;
  std::vector<std::string> overrides;
};

void add_common(CLI::App* cmd, CommonFlags& f) {
  cmd->add_option("--config", f.config, "INI config file")->check(CLI::ExistingFile);
  cmd->add_option("--preset", f.preset, "fig2, fig3, fig4 or fig5")
      ->check(CLI::IsMember({"fig2", "fig3", "fig4", "fig5"}));
  cmd->add_option("--seed", f.seed, "master seed");
  cmd->add_option("-T,--horizon", f.horizon, "number of rounds");
  cmd->add_option("--out", f.out, "output directory");
  cmd->add_flag("--dump-matrices", f.dump_matrices, "write every P(t) under matrices/");
  cmd->add_flag("--dump-weights", f.dump_weights, "write per-agent mixing weights");
  cmd->add_option("--threads", f.threads, "worker threads (0 = OpenMP default)");
  cmd->add_option("--set", f.overrides, "section.key=value override, repeatable");
}

odopt::ExperimentConfig resolve(const CommonFlags& f) {
  odopt::ExperimentConfig cfg;
  if (!f.preset.empty()) odopt::apply_preset(cfg, f.preset);
  if (!f.config.empty()) odopt::load_config(cfg, f.config);
  for (const auto& kv : f.overrides) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos)
      throw odopt::Error(odopt::ErrorKind::config, "--set expects section.key=value, got '" + kv + "'");
    odopt::set_config_value(cfg, kv.substr(0, eq), kv.substr(eq + 1));
  }
  if (f.seed) cfg.seed = *f.seed;
  if (f.horizon) cfg.T = *f.horizon;
  cfg.out_dir = f.out;
  cfg.dump_matrices = cfg.dump_matrices || f.dump_matrices;
  cfg.dump_weights = cfg.dump_weights || f.dump_weights;
  odopt::validate_config(cfg);
  odopt::kernels::set_threads(f.threads);
  return cfg;
}

void report(const odopt::RunResult& r, const std::filesystem::path& dir) {
  std::cout << "rounds=" << r.rounds << " agents=" << r.agents()
            << " gamma=" << odopt::format_double(r.gamma_used) << " nu=" << r.nu
            << " coefficient=" << odopt::format_double(r.coefficient) << " out=" << dir.string()
            << '\n';
  if (r.aborted) std::cerr << "aborted: " << r.abort_message << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Online distributed dual averaging simulator"};
  app.require_subcommand(1);
  CommonFlags run_f, stats_f, bounds_f, sweep_f;
  std::string axis;
  std::vector<std::string> values;

  auto* run = app.add_subcommand("run", "simulate one configuration");
  add_common(run, run_f);
  auto* stats = app.add_subcommand("graph-stats", "connectivity diagnostics");
  add_common(stats, stats_f);
  auto* bnd = app.add_subcommand("bounds", "closed-form regret bounds");
  add_common(bnd, bounds_f);
  auto* swp = app.add_subcommand("sweep", "run one axis over several values");
  add_common(swp, sweep_f);
  swp->add_option("--axis", axis, "noise_family, graph_family, beta or jam_count");
  swp->add_option("--values", values, "comma separated values")->delimiter(',');

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (*run) {
      const auto cfg = resolve(run_f);
      const auto r = odopt::run_experiment(cfg, cfg.out_dir);
      report(r, cfg.out_dir);
      return r.aborted ? kExitRuntime : 0;
    }
    if (*stats) {
      const auto cfg = resolve(stats_f);
      const auto rows = odopt::graph_stats(cfg);
      std::filesystem::create_directories(cfg.out_dir);
      std::ofstream out(std::filesystem::path(cfg.out_dir) / "graph_stats.csv");
      odopt::write_graph_stats(out, rows);
      odopt::write_graph_stats(std::cout, rows);
      return 0;
    }
    if (*bnd) {
      const auto cfg = resolve(bounds_f);
      const auto b = odopt::bounds(cfg);
      std::filesystem::create_directories(cfg.out_dir);
      std::ofstream out(std::filesystem::path(cfg.out_dir) / "bounds.csv");
      odopt::write_bounds(out, b);
      odopt::write_bounds(std::cout, b);
      return 0;
    }
    if (*swp) {
      auto cfg = resolve(sweep_f);
      if (!axis.empty()) cfg.sweep_axis = axis;
      if (!values.empty()) cfg.sweep_values = values;
      const auto cells = odopt::sweep(cfg, cfg.out_dir);
      bool aborted = false;
      for (const auto& c : cells) {
        std::cout << cfg.sweep_axis << '=' << c.value << ' ';
        report(c.result, cfg.out_dir);
        aborted = aborted || c.result.aborted;
      }
      return aborted ? kExitRuntime : 0;
    }
  } catch (const odopt::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return e.kind() == odopt::ErrorKind::config ? kExitConfig : kExitRuntime;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return 0;
}
