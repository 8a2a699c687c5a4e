#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "odopt/graph.hpp"
#include "odopt/scenario.hpp"
#include "odopt/switching.hpp"

namespace odopt {

enum class AuditMode { automatic, on, off };

/// Everything a run needs. Defaults reproduce the n = 100 estimation setup on
/// an Erdos-Renyi graph with p = 0.08.
struct ExperimentConfig {
  std::string preset;

  int n = 100;
  long T = 5000;
  std::uint64_t seed = 1;
  double beta = 0.9;
  double k = 0.25;
  bool adaptive = true;
  /// Loss normalizer for the allocator; 0 selects the scenario loss ceiling.
  double loss_normalizer = 0.0;
  AuditMode audit = AuditMode::automatic;

  GraphFamilySpec graph{GraphFamily::erdos_renyi, 100, 0.08, 4, false, 0, {}};
  /// Overrides graph.seed when set; otherwise it is derived from `seed`.
  std::optional<std::uint64_t> graph_seed;
  /// Edge-list file; takes precedence over the family when non-empty.
  std::string graph_file;

  ScheduleSpec schedule;
  ScenarioParams scenario;
  /// Sensors to jam, picked at random from the jamming stream. Ignored when
  /// an explicit list is given.
  int jam_count = 0;
  /// 1-based explicit jam list.
  std::vector<int> jammed;

  std::optional<double> gamma;
  std::optional<int> nu;
  /// Allow a short simulation to estimate gamma when it is not supplied.
  bool burn_in = true;
  /// Rounds of that simulation; 0 selects 2 delta nu.
  long burn_in_rounds = 0;

  std::string sweep_axis;
  std::vector<std::string> sweep_values;

  bool dump_matrices = false;
  bool dump_weights = false;
  std::string out_dir = "out";
};

/// Overwrites `cfg` with the named preset (fig2, fig3, fig4, fig5). Throws
/// ErrorKind::config for an unknown name.
void apply_preset(ExperimentConfig& cfg, const std::string& name);

/// Reads an INI file over `cfg`. Unknown sections or keys and malformed
/// values are config errors. The `[result]` section written into meta files
/// is skipped so a meta file can be fed back in.
void load_config(ExperimentConfig& cfg, const std::string& path);
void load_config(ExperimentConfig& cfg, std::istream& in);

/// Applies one `key=value` assignment using the same keys as the file format
/// (`section.key`).
void set_config_value(ExperimentConfig& cfg, const std::string& dotted_key,
                      const std::string& value);

/// Cross-field checks; throws ErrorKind::config.
void validate_config(const ExperimentConfig& cfg);

/// Writes the resolved configuration in the INI format load_config reads.
void write_config(std::ostream& out, const ExperimentConfig& cfg);

}  // namespace odopt
