#pragma once

#include <filesystem>
#include <functional>
#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include "odopt/config.hpp"
#include "odopt/graph.hpp"
#include "odopt/metrics.hpp"
#include "odopt/scenario.hpp"
#include "odopt/stochastic.hpp"

namespace odopt {

/// Library version echoed into meta files.
const char* version() noexcept;

struct RunOptions {
  /// Keep every P(t) in the result (forced on by auditing).
  bool keep_matrices = false;
  /// Called with (t, P(t)) right after assembly.
  std::function<void(long, const RowMatrix&)> on_matrix;
};

/// Everything a run produced. Histories are stacked one agent per row:
/// row (t - 1) * n + i belongs to agent i at round t.
struct RunResult {
  ExperimentConfig config;
  WeightedDigraph graph;
  std::vector<int> jammed;
  std::shared_ptr<const EstimationOracle> oracle;

  long rounds = 0;
  bool aborted = false;
  std::string abort_message;
  long abort_round = 0;
  int abort_agent = -1;

  /// x_i(t) and x_tilde_i(t): the decision played at round t and its average.
  RowMatrix x_history;
  RowMatrix x_tilde_history;
  /// y_i before round t, i.e. after t - 1 mixing steps.
  RowMatrix y_history;
  std::vector<RowMatrix> matrices;
  RowMatrix product;

  WeightingVector pi;
  std::string pi_source;
  double pi_gap = 0.0;
  double consensus_gap = 0.0;

  Vector theta_star;
  double L = 0.0;
  double R = 0.0;
  double M = 0.0;
  int nu = 1;
  int delta = 1;
  GammaEstimate gamma;
  /// Gamma fed to the bound: the configured value if any, else the estimate.
  double gamma_used = 0.0;
  ClosedFormGamma gamma_closed;
  /// Regret coefficient; NaN when gamma_used does not certify contraction.
  double coefficient = 0.0;
  double max_grad_norm = 0.0;
  bool lipschitz_valid = true;
  double jensen_min_slack = 0.0;
  bool audited = false;

  /// Rows are rounds, columns agents.
  RowMatrix regret_ind;
  RowMatrix regret_avg;
  RowMatrix deviation;
  /// NaN unless audited.
  RowMatrix deviation_bound;

  int agents() const noexcept { return graph.size(); }
  auto x_at(long t, int i) const { return x_history.row((t - 1) * agents() + i); }
  auto x_tilde_at(long t, int i) const { return x_tilde_history.row((t - 1) * agents() + i); }
};

/// Builds graph, schedule, sensors and observations, then runs T rounds.
/// Setup failures throw ErrorKind::config. Failures during the rounds or the
/// post-processing are caught and reported through `aborted`.
RunResult simulate(const ExperimentConfig& cfg, const RunOptions& options = {});

/// Whether simulate audits the network-effect bound for this config.
bool audit_enabled(const ExperimentConfig& cfg);

/// trace.csv, summary.csv and meta.ini.
void write_trace(std::ostream& out, const RunResult& r);
void write_summary(std::ostream& out, const RunResult& r);
void write_meta(std::ostream& out, const RunResult& r);

/// Runs `cfg` and writes every output into `dir`, including matrices/ and
/// weights.csv when requested. Returns the result for further inspection.
RunResult run_experiment(const ExperimentConfig& cfg, const std::filesystem::path& dir);

struct GraphStats {
  std::string family;
  int n = 0;
  std::size_t edges = 0;
  bool strongly_connected = false;
  int nu = 0;
  GammaEstimate gamma;
  ClosedFormGamma gamma_closed;
  /// Second largest eigenvalue modulus of the uniform-weight P(G).
  double lambda2 = 0.0;
};

/// Graph diagnostics with gamma taken over a burn-in run. When the config
/// sweeps graph_family, one entry per family in sweep order.
std::vector<GraphStats> graph_stats(const ExperimentConfig& cfg);
void write_graph_stats(std::ostream& out, const std::vector<GraphStats>& rows);

struct BoundsReport {
  BoundInputs inputs;
  long T = 1;
  std::string gamma_source;
  double coefficient = 0.0;
  double cumulative = 0.0;
  double running_average = 0.0;
  double time_averaged = 0.0;
  ClosedFormGamma gamma_closed;
};

/// Closed-form bounds for horizon cfg.T. Gamma comes from the config or, if
/// allowed, from a burn-in run; otherwise ErrorKind::config.
BoundsReport bounds(const ExperimentConfig& cfg);
void write_bounds(std::ostream& out, const BoundsReport& b);

/// Applies one sweep value to a copy of `cfg`. Throws ErrorKind::config for
/// an unknown axis or a malformed value.
ExperimentConfig apply_axis(const ExperimentConfig& cfg, const std::string& axis,
                            const std::string& value);

struct SweepCell {
  std::string value;
  RunResult result;
};

/// Runs every value of cfg.sweep_axis into `dir`/<axis>_<value>/ and writes
/// the combined sweep.csv. Cells share the master seed.
std::vector<SweepCell> sweep(const ExperimentConfig& cfg, const std::filesystem::path& dir);

}  // namespace odopt
