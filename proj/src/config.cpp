#include "odopt/config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <algorithm>
#include <charconv>
#include <fstream>
#include <ostream>
#include <sstream>

#include "odopt/csv.hpp"
#include "odopt/error.hpp"

namespace odopt {

namespace {

[[noreturn]] void config_error(const std::string& msg) { throw Error(ErrorKind::config, msg); }

std::string trim(std::string s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

template <class T>
T parse_number(const std::string& key, const std::string& raw) {
  const std::string v = trim(raw);
  T out{};
  const auto* first = v.data();
  const auto* last = v.data() + v.size();
  auto [ptr, ec] = std::from_chars(first, last, out);
  if (ec != std::errc() || ptr != last || v.empty())
    config_error("bad value for '" + key + "': '" + raw + "'");
  return out;
}

bool parse_bool(const std::string& key, const std::string& raw) {
  std::string v = trim(raw);
  std::transform(v.begin(), v.end(), v.begin(), [](unsigned char c) { return std::tolower(c); });
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  config_error("bad boolean for '" + key + "': '" + raw + "'");
}

std::vector<std::string> split_list(const std::string& raw) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(raw);
  while (std::getline(in, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::string join(const std::vector<std::string>& items) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) out += (i ? "," : "") + items[i];
  return out;
}

AuditMode parse_audit(const std::string& raw) {
  const std::string v = trim(raw);
  if (v == "auto") return AuditMode::automatic;
  if (v == "on" || v == "true") return AuditMode::on;
  if (v == "off" || v == "false") return AuditMode::off;
  config_error("bad value for 'run.audit': '" + raw + "'");
}

const char* to_string(AuditMode m) {
  switch (m) {
    case AuditMode::automatic: return "auto";
    case AuditMode::on: return "on";
    case AuditMode::off: return "off";
  }
  return "auto";
}

}  // namespace

void apply_preset(ExperimentConfig& cfg, const std::string& name) {
  ExperimentConfig fresh;
  fresh.out_dir = cfg.out_dir;
  fresh.dump_matrices = cfg.dump_matrices;
  fresh.dump_weights = cfg.dump_weights;
  fresh.preset = name;
  if (name == "fig2") {
    // the defaults already are this setup
  } else if (name == "fig3") {
    fresh.graph.family = GraphFamily::random_regular;
    fresh.graph.k = 4;
    fresh.schedule.mode = ScheduleMode::jam_isolation;
    fresh.jam_count = 25;
    fresh.sweep_axis = "beta";
    fresh.sweep_values = {"0.9", "1"};
  } else if (name == "fig4") {
    fresh.graph.family = GraphFamily::random_regular;
    fresh.graph.k = 4;
    fresh.scenario.noise = NoiseFamily::gaussian;
    fresh.scenario.truncate = false;
    fresh.sweep_axis = "noise_family";
    fresh.sweep_values = {"gaussian", "uniform", "laplace"};
  } else if (name == "fig5") {
    fresh.sweep_axis = "graph_family";
    fresh.sweep_values = {"path", "random_tree", "random_regular", "erdos_renyi"};
  } else {
    config_error("unknown preset '" + name + "' (expected fig2, fig3, fig4 or fig5)");
  }
  cfg = std::move(fresh);
}

void set_config_value(ExperimentConfig& cfg, const std::string& key, const std::string& raw) {
  const std::string v = trim(raw);
  auto num = [&]<class T>(T& slot) { slot = parse_number<T>(key, v); };
  if (key == "run.n") num(cfg.n);
  else if (key == "run.T") num(cfg.T);
  else if (key == "run.seed") num(cfg.seed);
  else if (key == "run.beta") num(cfg.beta);
  else if (key == "run.k") num(cfg.k);
  else if (key == "run.adaptive") cfg.adaptive = parse_bool(key, v);
  else if (key == "run.loss_normalizer") num(cfg.loss_normalizer);
  else if (key == "run.audit") cfg.audit = parse_audit(v);
  else if (key == "run.preset") cfg.preset = v;
  else if (key == "graph.family") cfg.graph.family = parse_graph_family(v);
  else if (key == "graph.p") num(cfg.graph.p);
  else if (key == "graph.degree") num(cfg.graph.k);
  else if (key == "graph.directed") cfg.graph.directed = parse_bool(key, v);
  else if (key == "graph.seed") cfg.graph_seed = parse_number<std::uint64_t>(key, v);
  else if (key == "graph.file") cfg.graph_file = v;
  else if (key == "schedule.mode") cfg.schedule.mode = parse_schedule_mode(v);
  else if (key == "schedule.delta") num(cfg.schedule.delta);
  else if (key == "schedule.p_drop") num(cfg.schedule.p_drop);
  else if (key == "scenario.d") num(cfg.scenario.d);
  else if (key == "scenario.theta_max") num(cfg.scenario.theta_max);
  else if (key == "scenario.h_max") num(cfg.scenario.h_max);
  else if (key == "scenario.a_max") num(cfg.scenario.a_max);
  else if (key == "scenario.b_max") num(cfg.scenario.b_max);
  else if (key == "scenario.theta_true") {
    const auto parts = split_list(v);
    cfg.scenario.theta_true.resize(static_cast<Eigen::Index>(parts.size()));
    for (std::size_t c = 0; c < parts.size(); ++c)
      cfg.scenario.theta_true[static_cast<Eigen::Index>(c)] = parse_number<double>(key, parts[c]);
  } else if (key == "scenario.noise") cfg.scenario.noise = parse_noise_family(v);
  else if (key == "scenario.truncate") cfg.scenario.truncate = parse_bool(key, v);
  else if (key == "scenario.jam_count") num(cfg.jam_count);
  else if (key == "scenario.jammed") {
    cfg.jammed.clear();
    for (const auto& p : split_list(v)) cfg.jammed.push_back(parse_number<int>(key, p));
  } else if (key == "bounds.gamma") {
    if (v.empty()) cfg.gamma.reset(); else cfg.gamma = parse_number<double>(key, v);
  } else if (key == "bounds.nu") {
    if (v.empty()) cfg.nu.reset(); else cfg.nu = parse_number<int>(key, v);
  } else if (key == "bounds.burn_in") cfg.burn_in = parse_bool(key, v);
  else if (key == "bounds.burn_in_rounds") num(cfg.burn_in_rounds);
  else if (key == "sweep.axis") cfg.sweep_axis = v;
  else if (key == "sweep.values") cfg.sweep_values = split_list(v);
  else config_error("unknown config key '" + key + "'");
}

void load_config(ExperimentConfig& cfg, std::istream& in) {
  boost::property_tree::ptree tree;
  try {
    boost::property_tree::read_ini(in, tree);
  } catch (const boost::property_tree::ini_parser_error& e) {
    config_error(std::string("config parse error: ") + e.what());
  }
  // preset first so the remaining keys refine it
  if (auto run = tree.get_child_optional("run"))
    if (auto p = run->get_optional<std::string>("preset"); p && !trim(*p).empty())
      apply_preset(cfg, trim(*p));
  for (const auto& [section, body] : tree) {
    if (section == "result") continue;
    if (body.empty() && !body.data().empty())
      config_error("key '" + section + "' must live inside a section");
    for (const auto& [key, value] : body) {
      if (section == "run" && key == "preset") continue;
      set_config_value(cfg, section + "." + key, value.data());
    }
  }
}

void load_config(ExperimentConfig& cfg, const std::string& path) {
  std::ifstream in(path);
  if (!in) config_error("cannot open config file '" + path + "'");
  load_config(cfg, in);
}

void validate_config(const ExperimentConfig& cfg) {
  if (cfg.n < 1) config_error("run.n must be >= 1");
  if (cfg.T < 1) config_error("run.T must be >= 1");
  if (!(cfg.beta >= 0.0 && cfg.beta <= 1.0)) config_error("run.beta must lie in [0, 1]");
  if (!(cfg.k > 0.0)) config_error("run.k must be positive");
  if (!(cfg.loss_normalizer >= 0.0)) config_error("run.loss_normalizer must be >= 0");
  if (cfg.scenario.d < 1) config_error("scenario.d must be >= 1");
  if (cfg.jam_count < 0 || cfg.jam_count > cfg.n) config_error("scenario.jam_count out of range");
  for (int j : cfg.jammed)
    if (j < 1 || j > cfg.n) config_error("scenario.jammed entries must lie in 1..n");
  if (cfg.schedule.delta < 1) config_error("schedule.delta must be >= 1");
  if (!(cfg.schedule.p_drop >= 0.0 && cfg.schedule.p_drop <= 1.0))
    config_error("schedule.p_drop must lie in [0, 1]");
  if (cfg.gamma && !(*cfg.gamma >= 0.0 && *cfg.gamma < 1.0))
    config_error("bounds.gamma must lie in [0, 1)");
  if (cfg.nu && *cfg.nu < 1) config_error("bounds.nu must be >= 1");
  if (cfg.burn_in_rounds < 0) config_error("bounds.burn_in_rounds must be >= 0");
}

void write_config(std::ostream& out, const ExperimentConfig& cfg) {
  out << "[run]\n";
  if (!cfg.preset.empty()) out << "preset=" << cfg.preset << '\n';
  out << "n=" << cfg.n << "\nT=" << cfg.T << "\nseed=" << cfg.seed
      << "\nbeta=" << format_double(cfg.beta) << "\nk=" << format_double(cfg.k)
      << "\nadaptive=" << (cfg.adaptive ? "true" : "false")
      << "\nloss_normalizer=" << format_double(cfg.loss_normalizer)
      << "\naudit=" << to_string(cfg.audit) << "\n\n";
  out << "[graph]\nfamily=" << to_string(cfg.graph.family) << "\np=" << format_double(cfg.graph.p)
      << "\ndegree=" << cfg.graph.k << "\ndirected=" << (cfg.graph.directed ? "true" : "false")
      << '\n';
  if (cfg.graph_seed) out << "seed=" << *cfg.graph_seed << '\n';
  if (!cfg.graph_file.empty()) out << "file=" << cfg.graph_file << '\n';
  out << "\n[schedule]\nmode=" << to_string(cfg.schedule.mode) << "\ndelta=" << cfg.schedule.delta
      << "\np_drop=" << format_double(cfg.schedule.p_drop) << "\n\n";
  const auto& s = cfg.scenario;
  out << "[scenario]\nd=" << s.d << "\ntheta_max=" << format_double(s.theta_max)
      << "\nh_max=" << format_double(s.h_max) << "\na_max=" << format_double(s.a_max)
      << "\nb_max=" << format_double(s.b_max) << '\n';
  if (s.theta_true.size() > 0) {
    out << "theta_true=";
    for (Eigen::Index c = 0; c < s.theta_true.size(); ++c)
      out << (c ? "," : "") << format_double(s.theta_true[c]);
    out << '\n';
  }
  out << "noise=" << to_string(s.noise) << "\ntruncate=" << (s.truncate ? "true" : "false")
      << "\njam_count=" << cfg.jam_count << '\n';
  if (!cfg.jammed.empty()) {
    out << "jammed=";
    for (std::size_t j = 0; j < cfg.jammed.size(); ++j) out << (j ? "," : "") << cfg.jammed[j];
    out << '\n';
  }
  out << "\n[bounds]\n";
  if (cfg.gamma) out << "gamma=" << format_double(*cfg.gamma) << '\n';
  if (cfg.nu) out << "nu=" << *cfg.nu << '\n';
  out << "burn_in=" << (cfg.burn_in ? "true" : "false") << "\nburn_in_rounds=" << cfg.burn_in_rounds
      << '\n';
  out << "\n[sweep]\naxis=" << cfg.sweep_axis << "\nvalues=" << join(cfg.sweep_values) << '\n';
}

}  // namespace odopt
