#include "odopt/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <ostream>
#include <random>
#include <sstream>

#include "odopt/csv.hpp"
#include "odopt/doa.hpp"
#include "odopt/dwda.hpp"
#include "odopt/error.hpp"
#include "odopt/kernels.hpp"
#include "odopt/rng.hpp"
#include "odopt/switching.hpp"

#ifndef ODOPT_VERSION
#define ODOPT_VERSION "0.0.0"
#endif

namespace odopt {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kPiTolerance = 1e-9;
// n^3 T^2 / 2 budget for the automatic network-effect audit
constexpr double kAuditBudget = 5e9;

// Everything simulate() needs before the first round.
struct Setup {
  ExperimentConfig cfg;
  WeightedDigraph graph;
  std::unique_ptr<TopologySchedule> schedule;
  std::vector<int> jammed;
  std::shared_ptr<EstimationOracle> oracle;
  FeasibleSet chi;
  double L = 0.0, R = 0.0, M = 0.0;
  int nu = 1;
  int delta = 1;
};

std::vector<int> pick_jammed(const ExperimentConfig& cfg) {
  std::vector<int> out;
  if (!cfg.jammed.empty()) {
    for (int j : cfg.jammed) out.push_back(j - 1);
  } else if (cfg.jam_count > 0) {
    std::vector<int> order(static_cast<std::size_t>(cfg.n));
    std::iota(order.begin(), order.end(), 0);
    std::mt19937_64 rng(derive_seed(cfg.seed, Stream::jamming));
    std::shuffle(order.begin(), order.end(), rng);
    out.assign(order.begin(), order.begin() + cfg.jam_count);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

WeightedDigraph build_graph(ExperimentConfig& cfg) {
  if (!cfg.graph_file.empty()) {
    std::ifstream in(cfg.graph_file);
    if (!in) throw Error(ErrorKind::config, "cannot open graph file '" + cfg.graph_file + "'");
    auto g = read_edge_list(in);
    cfg.n = g.size();
    cfg.graph.family = GraphFamily::explicit_edges;
    return g;
  }
  cfg.graph.n = cfg.n;
  cfg.graph.seed = cfg.graph_seed ? *cfg.graph_seed : derive_seed(cfg.seed, Stream::graph);
  return generate(cfg.graph);
}

int resolve_nu(const ExperimentConfig& cfg, const TopologySchedule& sched) {
  if (cfg.nu) return *cfg.nu;
  const auto& g = sched.base();
  if (sched.mode() == ScheduleMode::fixed || sched.mode() == ScheduleMode::jam_isolation)
    return nu_fixed(g);
  return g.size() < 2 ? 1 : nu_switching(g.size());
}

Setup prepare(const ExperimentConfig& input, long T) {
  validate_config(input);
  Setup s;
  s.cfg = input;
  s.cfg.T = T;
  try {
    s.graph = build_graph(s.cfg);
    if (s.graph.size() < 1) throw Error(ErrorKind::config, "graph has no nodes");
    ScheduleSpec spec = s.cfg.schedule;
    spec.seed = derive_seed(s.cfg.seed, Stream::schedule);
    s.jammed = pick_jammed(s.cfg);
    spec.jammed = s.jammed;
    s.schedule = std::make_unique<TopologySchedule>(s.graph, spec);
    const auto report = validate_schedule(*s.schedule, T);
    if (!report.ok())
      throw Error(ErrorKind::config, "window " + std::to_string(report.first_violation) +
                                         " of the topology schedule is not strongly connected");
    if (T < s.schedule->delta() && !is_strongly_connected(s.graph))
      throw Error(ErrorKind::config, "base graph is not strongly connected");
    s.nu = resolve_nu(s.cfg, *s.schedule);
    s.delta = s.schedule->delta();

    auto& sc = s.cfg.scenario;
    sc.jammed = s.jammed;
    sc.validate();
    s.L = lipschitz_constant(sc);
    s.R = prox_radius(sc);
    s.M = s.cfg.loss_normalizer > 0.0 ? s.cfg.loss_normalizer : loss_ceiling(sc);
    if (!std::isfinite(s.M))
      throw Error(ErrorKind::config,
                  "loss ceiling overflows for these scenario values; set run.loss_normalizer");
    s.chi = FeasibleSet::ball(sc.d, sc.theta_max);
    auto sensors = make_sensors(sc, s.graph.size(), s.cfg.seed);
    auto obs = record_observations(sc, sensors, T, s.cfg.seed);
    s.oracle = std::make_shared<EstimationOracle>(std::move(sensors), std::move(obs), s.L);
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::config) throw;
    throw Error(ErrorKind::config, e.what());
  }
  return s;
}

void post_process(RunResult& r, const Setup& s, const RowMatrix& first_p) {
  const int n = r.agents();
  const long T = r.rounds;
  const auto& oracle = *s.oracle;
  const auto d = static_cast<int>(r.x_history.cols());

  r.theta_star = best_fixed(oracle.observations(), oracle.sensors(), T, s.cfg.scenario.theta_max);

  std::vector<double> at_star(static_cast<std::size_t>(T));
  for (long t = 1; t <= T; ++t) at_star[t - 1] = oracle.global_cost(t, r.theta_star);

  r.regret_ind.resize(T, n);
  r.regret_avg.resize(T, n);
  std::vector<double> jensen(static_cast<std::size_t>(n), std::numeric_limits<double>::infinity());
#pragma omp parallel for schedule(static)
  for (int i = 0; i < n; ++i) {
    double ind = 0.0, avg = 0.0;
    JensenCheck jc(d);
    for (long t = 1; t <= T; ++t) {
      ind += oracle.global_cost(t, r.x_at(t, i).transpose()) - at_star[t - 1];
      avg += oracle.global_cost(t, r.x_tilde_at(t, i).transpose()) - at_star[t - 1];
      r.regret_ind(t - 1, i) = ind;
      r.regret_avg(t - 1, i) = avg;
      const double slack = jc.push(r.x_at(t, i).transpose(), r.x_tilde_at(t, i).transpose(),
                                   oracle.quadratic(), oracle.linear(t), oracle.constant(t));
      jensen[i] = std::min(jensen[i], slack);
    }
  }
  r.jensen_min_slack = *std::min_element(jensen.begin(), jensen.end());

  // weighting vector: exact for a constant matrix, else from the product
  r.pi_source.clear();
  const bool constant_p = (s.schedule->mode() == ScheduleMode::fixed ||
                           s.schedule->mode() == ScheduleMode::jam_isolation) &&
                          (!s.cfg.adaptive || s.cfg.beta == 1.0);
  if (constant_p && first_p.size() > 0) {
    try {
      r.pi = stationary_vector(first_p);
      r.pi_source = "stationary";
    } catch (const ConvergenceError&) {
    }
  }
  if (r.pi_source.empty()) {
    try {
      r.pi = empirical_pi(r.product, kPiTolerance);
      r.pi_source = "empirical";
      r.pi_gap = kernels::parallel::max_column_spread(r.product);
    } catch (const ConvergenceError& e) {
      r.pi.pi = r.product.colwise().mean().transpose();
      r.pi_source = "product_mean";
      r.pi_gap = e.achieved_gap();
    }
  }
  r.consensus_gap = consensus_gap(r.product, r.pi);

  r.deviation.resize(T, n);
  for (long t = 1; t <= T; ++t) {
    const RowMatrix y = r.y_history.middleRows((t - 1) * n, n);
    r.deviation.row(t - 1) = odopt::deviation(y, r.pi.pi).transpose();
  }

  r.deviation_bound = RowMatrix::Constant(T, n, kNaN);
  if (r.audited) {
    const RowMatrix all = network_error_bounds(s.L, r.matrices, r.pi.pi);
    r.deviation_bound = all.topRows(T);
  }
}

std::string value_dir_name(const std::string& axis, const std::string& value) {
  std::string out = axis + "_";
  for (char c : value) out += (std::isalnum(static_cast<unsigned char>(c)) || c == '.' || c == '-') ? c : '_';
  return out;
}

void ensure_dir(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error(ErrorKind::runtime, "cannot create directory '" + dir.string() + "'");
}

std::ofstream open_out(const std::filesystem::path& p) {
  std::ofstream out(p);
  if (!out) throw Error(ErrorKind::runtime, "cannot write '" + p.string() + "'");
  return out;
}

double lambda2_uniform(const WeightedDigraph& g) {
  const int n = g.size();
  if (n < 2) return 0.0;
  Eigen::MatrixXd p = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    const auto act = active_set(g, i);
    for (int j : act) p(i, j) = 1.0 / static_cast<double>(act.size());
  }
  Eigen::EigenSolver<Eigen::MatrixXd> es(p, false);
  std::vector<double> mods;
  for (Eigen::Index k = 0; k < n; ++k) mods.push_back(std::abs(es.eigenvalues()[k]));
  std::sort(mods.rbegin(), mods.rend());
  return mods[1];
}

int max_in_neighbors(const WeightedDigraph& g) {
  int m = 0;
  for (int i = 0; i < g.size(); ++i) m = std::max(m, static_cast<int>(g.in_neighbors(i).size()));
  return m;
}

long default_burn_in(const ExperimentConfig& cfg, int delta, int nu) {
  return cfg.burn_in_rounds > 0 ? cfg.burn_in_rounds : 2L * delta * nu;
}

}  // namespace

const char* version() noexcept { return ODOPT_VERSION; }

bool audit_enabled(const ExperimentConfig& cfg) {
  switch (cfg.audit) {
    case AuditMode::on: return true;
    case AuditMode::off: return false;
    case AuditMode::automatic: break;
  }
  if (cfg.dump_matrices) return true;
  const double n = cfg.n, T = static_cast<double>(cfg.T);
  return n * n * n * T * T / 2.0 <= kAuditBudget;
}

RunResult simulate(const ExperimentConfig& cfg, const RunOptions& options) {
  Setup s = prepare(cfg, cfg.T);
  RunResult r;
  r.config = s.cfg;
  r.graph = s.graph;
  r.jammed = s.jammed;
  r.oracle = s.oracle;
  r.L = s.L;
  r.R = s.R;
  r.M = s.M;
  r.nu = s.nu;
  r.delta = s.delta;
  r.audited = audit_enabled(s.cfg);
  r.gamma_closed = gamma_closed_form_bound(s.graph.size(), max_in_neighbors(s.graph), s.delta, s.nu);

  const int n = s.graph.size();
  const int d = s.cfg.scenario.d;
  const long T = s.cfg.T;
  const bool keep = options.keep_matrices || r.audited;
  const double beta = s.cfg.adaptive ? s.cfg.beta : 1.0;

  std::vector<AllocatorState> allocs;
  allocs.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) allocs.push_back(make_allocator(i, n, beta, s.M));

  AgentStates st = AgentStates::initial(n, d);
  BackwardProduct prod(n);
  GammaTracker tracker(n, s.delta * s.nu);
  const StepSchedule sched{s.cfg.k};
  RoundRecord rec;
  RowMatrix first_p;
  r.x_history.resize(T * n, d);
  r.x_tilde_history.resize(T * n, d);
  r.y_history.resize(T * n, d);

  long t = 1;
  try {
    for (; t <= T; ++t) {
      const WeightedDigraph g = s.schedule->edges_at(t);
      const CommMatrix p = assemble_comm_matrix(allocs, g);
      if (options.on_matrix) options.on_matrix(t, p.matrix());
      r.x_history.middleRows((t - 1) * n, n) = st.x;
      r.x_tilde_history.middleRows((t - 1) * n, n) = st.x_tilde;
      r.y_history.middleRows((t - 1) * n, n) = st.y;

      dwda_round(st, p.matrix(), *s.oracle, sched, s.chi, rec);
      r.max_grad_norm = std::max(r.max_grad_norm, rec.grad.rowwise().norm().maxCoeff());

      bool bad_loss = false;
#pragma omp parallel for schedule(static)
      for (int i = 0; i < n; ++i) {
        try {
          doa_update(allocs[i], active_set(g, i), std::span<const double>(rec.loss.data(), n));
        } catch (const Error&) {
#pragma omp atomic write
          bad_loss = true;
        }
      }
      if (bad_loss) throw RoundAbort("round " + std::to_string(t) + ": allocator rejected a loss", t, -1);

      prod.push(p.matrix());
      tracker.push(p.matrix());
      if (keep) r.matrices.push_back(p.matrix());
      if (t == 1) first_p = p.matrix();
      r.rounds = t;
    }
  } catch (const RoundAbort& e) {
    r.aborted = true;
    r.abort_message = e.what();
    r.abort_round = e.round();
    r.abort_agent = e.agent();
  } catch (const Error& e) {
    r.aborted = true;
    r.abort_message = std::string("round ") + std::to_string(t) + ": " + e.what();
    r.abort_round = t;
  }

  const long done = r.rounds;
  r.x_history.conservativeResize(done * n, d);
  r.x_tilde_history.conservativeResize(done * n, d);
  r.y_history.conservativeResize(done * n, d);
  r.product = prod.matrix();
  r.gamma = tracker.estimate();
  r.gamma_used = s.cfg.gamma ? *s.cfg.gamma : (r.gamma.blocks > 0 ? r.gamma.gamma : kNaN);
  r.lipschitz_valid = r.max_grad_norm <= s.L * (1.0 + 1e-9);
  r.coefficient = kNaN;
  if (r.gamma_used >= 0.0 && r.gamma_used < 1.0)
    r.coefficient = regret_coefficient({s.R, s.L, s.cfg.k, n, r.gamma_used, s.nu, s.delta});

  if (done >= 1) {
    try {
      post_process(r, s, first_p);
    } catch (const Error& e) {
      if (!r.aborted) {
        r.aborted = true;
        r.abort_message = std::string("post-processing: ") + e.what();
        r.abort_round = done;
      }
    }
  }
  return r;
}

void write_trace(std::ostream& out, const RunResult& r) {
  out << "t,agent,regret_ind,regret_avg,bound_thm4,bound_corollary,deviation,deviation_bound\n";
  const int n = r.agents();
  const long rows = std::min<long>(r.rounds, r.regret_ind.rows());
  for (long t = 1; t <= rows; ++t) {
    const double s = std::sqrt(static_cast<double>(t));
    for (int i = 0; i < n; ++i) {
      CsvRow row(out);
      row << t << (i + 1) << r.regret_ind(t - 1, i) << r.regret_avg(t - 1, i)
          << r.coefficient * s << 2.0 * r.coefficient * s << r.deviation(t - 1, i)
          << r.deviation_bound(t - 1, i);
    }
  }
  if (r.aborted) {
    CsvRow row(out);
    row << "aborted" << (r.abort_agent >= 0 ? r.abort_agent + 1 : 0) << kNaN << kNaN << kNaN
        << kNaN << kNaN << kNaN;
  }
}

void write_summary(std::ostream& out, const RunResult& r) {
  out << "agent,T,jammed,regret_ind,regret_avg,bound_thm4,bound_corollary,max_deviation,"
         "min_deviation_slack\n";
  const int n = r.agents();
  const long T = std::min<long>(r.rounds, r.regret_ind.rows());
  if (T < 1) return;
  const double s = std::sqrt(static_cast<double>(T));
  for (int i = 0; i < n; ++i) {
    double max_dev = 0.0, slack = r.audited ? std::numeric_limits<double>::infinity() : kNaN;
    for (long t = 0; t < T; ++t) {
      max_dev = std::max(max_dev, r.deviation(t, i));
      if (r.audited) slack = std::min(slack, r.deviation_bound(t, i) - r.deviation(t, i));
    }
    const bool jam = std::binary_search(r.jammed.begin(), r.jammed.end(), i);
    CsvRow row(out);
    row << (i + 1) << T << (jam ? 1 : 0) << r.regret_ind(T - 1, i) << r.regret_avg(T - 1, i)
        << r.coefficient * s << 2.0 * r.coefficient * s << max_dev << slack;
  }
}

void write_meta(std::ostream& out, const RunResult& r) {
  write_config(out, r.config);
  auto kv = [&](const char* k, const std::string& v) { out << k << '=' << v << '\n'; };
  auto num = [&](const char* k, double v) { kv(k, format_double(v)); };
  auto vec = [&](const Vector& v) {
    std::string s;
    for (Eigen::Index c = 0; c < v.size(); ++c) s += (c ? "," : "") + format_double(v[c]);
    return s;
  };
  out << "\n[result]\n";
  kv("version", version());
  kv("rounds", std::to_string(r.rounds));
  kv("aborted", r.aborted ? "true" : "false");
  if (r.aborted) {
    kv("abort_round", std::to_string(r.abort_round));
    kv("abort_agent", std::to_string(r.abort_agent + 1));
    kv("abort_message", r.abort_message);
  }
  kv("edges", std::to_string(r.graph.edge_count()));
  kv("strongly_connected", is_strongly_connected(r.graph) ? "true" : "false");
  std::string jam;
  for (std::size_t j = 0; j < r.jammed.size(); ++j) jam += (j ? "," : "") + std::to_string(r.jammed[j] + 1);
  kv("jammed_sensors", jam);
  num("L", r.L);
  num("R", r.R);
  num("loss_normalizer", r.M);
  kv("nu", std::to_string(r.nu));
  kv("delta", std::to_string(r.delta));
  num("gamma_estimate", r.gamma.blocks > 0 ? r.gamma.gamma : kNaN);
  kv("gamma_blocks", std::to_string(r.gamma.blocks));
  num("gamma_used", r.gamma_used);
  num("gamma_closed_form", r.gamma_closed.value);
  kv("gamma_closed_form_vacuous", r.gamma_closed.vacuous() ? "true" : "false");
  num("coefficient", r.coefficient);
  kv("theta_star", vec(r.theta_star));
  kv("pi_source", r.pi_source);
  num("pi_gap", r.pi_gap);
  num("consensus_gap", r.consensus_gap);
  num("max_grad_norm", r.max_grad_norm);
  kv("lipschitz_valid", r.lipschitz_valid ? "true" : "false");
  num("jensen_min_slack", r.jensen_min_slack);
  kv("audited", r.audited ? "true" : "false");
}

RunResult run_experiment(const ExperimentConfig& cfg, const std::filesystem::path& dir) {
  ensure_dir(dir);
  RunOptions opts;
  std::ofstream weights;
  if (cfg.dump_matrices) ensure_dir(dir / "matrices");
  if (cfg.dump_weights) {
    weights = open_out(dir / "weights.csv");
    weights << "t,agent,neighbor,q\n";
  }
  if (cfg.dump_matrices || cfg.dump_weights) {
    opts.on_matrix = [&](long t, const RowMatrix& p) {
      if (cfg.dump_matrices) {
        char name[32];
        std::snprintf(name, sizeof name, "P_%06ld.csv", t);
        auto out = open_out(dir / "matrices" / name);
        write_matrix_csv(out, p);
      }
      if (cfg.dump_weights) {
        for (Eigen::Index i = 0; i < p.rows(); ++i)
          for (Eigen::Index j = 0; j < p.cols(); ++j)
            if (p(i, j) > 0.0) {
              CsvRow row(weights);
              row << t << static_cast<long>(i + 1) << static_cast<long>(j + 1) << p(i, j);
            }
      }
    };
  }
  RunResult r = simulate(cfg, opts);
  {
    auto out = open_out(dir / "trace.csv");
    write_trace(out, r);
  }
  {
    auto out = open_out(dir / "summary.csv");
    write_summary(out, r);
  }
  {
    auto out = open_out(dir / "meta.ini");
    write_meta(out, r);
  }
  return r;
}

std::vector<GraphStats> graph_stats(const ExperimentConfig& cfg) {
  std::vector<ExperimentConfig> cells;
  if (cfg.sweep_axis == "graph_family") {
    for (const auto& v : cfg.sweep_values) cells.push_back(apply_axis(cfg, "graph_family", v));
  } else {
    cells.push_back(cfg);
  }
  std::vector<GraphStats> rows;
  for (auto cell : cells) {
    validate_config(cell);
    ExperimentConfig resolved = cell;
    WeightedDigraph g;
    try {
      g = build_graph(resolved);
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::config) throw;
      throw Error(ErrorKind::config, e.what());
    }
    GraphStats st;
    st.family = std::string(to_string(resolved.graph.family));
    st.n = g.size();
    st.edges = g.edge_count();
    st.strongly_connected = is_strongly_connected(g);
    st.lambda2 = lambda2_uniform(g);
    if (st.strongly_connected) {
      ScheduleSpec spec = resolved.schedule;
      TopologySchedule sched(g, spec);
      st.nu = resolve_nu(resolved, sched);
      const int delta = sched.delta();
      st.gamma_closed = gamma_closed_form_bound(st.n, max_in_neighbors(g), delta, st.nu);
      ExperimentConfig burn = cell;
      burn.T = default_burn_in(cell, delta, st.nu);
      burn.audit = AuditMode::off;
      burn.dump_matrices = burn.dump_weights = false;
      const RunResult r = simulate(burn);
      if (r.aborted) throw Error(ErrorKind::runtime, "burn-in run aborted: " + r.abort_message);
      st.gamma = r.gamma;
    } else {
      st.gamma.gamma = 1.0;
    }
    rows.push_back(st);
  }
  return rows;
}

void write_graph_stats(std::ostream& out, const std::vector<GraphStats>& rows) {
  out << "family,n,edges,strongly_connected,nu,gamma,gamma_blocks,gamma_closed_form,"
         "closed_form_vacuous,lambda2\n";
  for (const auto& s : rows) {
    CsvRow row(out);
    row << s.family << s.n << static_cast<long>(s.edges) << (s.strongly_connected ? 1 : 0) << s.nu
        << s.gamma.gamma << s.gamma.blocks << s.gamma_closed.value
        << (s.gamma_closed.vacuous() ? 1 : 0) << s.lambda2;
  }
}

BoundsReport bounds(const ExperimentConfig& cfg) {
  validate_config(cfg);
  ExperimentConfig resolved = cfg;
  ScenarioParams sc = cfg.scenario;
  try {
    sc.validate();
  } catch (const Error& e) {
    throw Error(ErrorKind::config, e.what());
  }
  BoundsReport b;
  b.T = cfg.T;
  b.inputs.R = prox_radius(sc);
  b.inputs.L = lipschitz_constant(sc);
  b.inputs.k = cfg.k;

  std::optional<WeightedDigraph> g;
  auto graph = [&]() -> const WeightedDigraph& {
    if (!g) {
      try {
        g = build_graph(resolved);
      } catch (const Error& e) {
        throw Error(ErrorKind::config, e.what());
      }
    }
    return *g;
  };
  b.inputs.n = cfg.nu && cfg.gamma && cfg.graph_file.empty() ? cfg.n : graph().size();

  int delta = 1;
  if (cfg.schedule.mode == ScheduleMode::partition || cfg.schedule.mode == ScheduleMode::random_drop)
    delta = cfg.schedule.delta;
  b.inputs.delta = delta;
  if (cfg.nu) {
    b.inputs.nu = *cfg.nu;
  } else {
    try {
      TopologySchedule sched(graph(), cfg.schedule);
      b.inputs.nu = resolve_nu(cfg, sched);
    } catch (const Error& e) {
      throw Error(ErrorKind::config, e.what());
    }
  }
  if (cfg.gamma) {
    b.inputs.gamma = *cfg.gamma;
    b.gamma_source = "config";
  } else if (cfg.burn_in) {
    ExperimentConfig burn = cfg;
    burn.T = default_burn_in(cfg, delta, b.inputs.nu);
    burn.audit = AuditMode::off;
    const RunResult r = simulate(burn);
    if (r.aborted) throw Error(ErrorKind::runtime, "burn-in run aborted: " + r.abort_message);
    b.inputs.gamma = r.gamma.gamma;
    b.gamma_source = "burn_in";
  } else {
    throw Error(ErrorKind::config,
                "no gamma supplied and burn-in disabled; run graph-stats to estimate gamma and "
                "pass it as bounds.gamma");
  }
  b.gamma_closed = gamma_closed_form_bound(b.inputs.n, g ? max_in_neighbors(*g) : 0, delta,
                                           b.inputs.nu);
  if (!(b.inputs.gamma < 1.0))
    throw Error(ErrorKind::config, "gamma = " + format_double(b.inputs.gamma) +
                                       " does not certify contraction; the bound is undefined");
  b.coefficient = regret_coefficient(b.inputs);
  b.cumulative = regret_bound(b.inputs, b.T, BoundVariant::cumulative);
  b.running_average = regret_bound(b.inputs, b.T, BoundVariant::running_average);
  b.time_averaged = regret_bound(b.inputs, b.T, BoundVariant::time_averaged);
  return b;
}

void write_bounds(std::ostream& out, const BoundsReport& b) {
  out << "R,L,k,n,gamma,gamma_source,nu,delta,T,coefficient,bound_thm4,bound_corollary,"
         "rate_time_averaged,gamma_closed_form\n";
  CsvRow row(out);
  row << b.inputs.R << b.inputs.L << b.inputs.k << b.inputs.n << b.inputs.gamma << b.gamma_source
      << b.inputs.nu << b.inputs.delta << b.T << b.coefficient << b.cumulative << b.running_average
      << b.time_averaged << b.gamma_closed.value;
}

ExperimentConfig apply_axis(const ExperimentConfig& cfg, const std::string& axis,
                            const std::string& value) {
  ExperimentConfig out = cfg;
  if (axis == "noise_family") {
    set_config_value(out, "scenario.noise", value);
  } else if (axis == "graph_family") {
    set_config_value(out, "graph.family", value);
    out.graph_file.clear();
  } else if (axis == "beta") {
    set_config_value(out, "run.beta", value);
  } else if (axis == "jam_count") {
    set_config_value(out, "scenario.jam_count", value);
    out.jammed.clear();
  } else {
    throw Error(ErrorKind::config, "unknown sweep axis '" + axis +
                                       "' (expected noise_family, graph_family, beta or jam_count)");
  }
  return out;
}

std::vector<SweepCell> sweep(const ExperimentConfig& cfg, const std::filesystem::path& dir) {
  if (cfg.sweep_axis.empty()) throw Error(ErrorKind::config, "sweep needs an axis");
  if (cfg.sweep_values.empty()) throw Error(ErrorKind::config, "sweep needs at least one value");
  std::vector<ExperimentConfig> cells;
  for (const auto& v : cfg.sweep_values) {
    cells.push_back(apply_axis(cfg, cfg.sweep_axis, v));
    validate_config(cells.back());
  }
  ensure_dir(dir);
  auto combined = open_out(dir / "sweep.csv");
  combined << "axis,value,t,regret_ind_mean,regret_ind_max,regret_avg_mean,regret_avg_max,"
              "bound_thm4,bound_corollary\n";
  std::vector<SweepCell> out;
  for (std::size_t c = 0; c < cells.size(); ++c) {
    const auto& value = cfg.sweep_values[c];
    RunResult r = run_experiment(cells[c], dir / value_dir_name(cfg.sweep_axis, value));
    const long T = std::min<long>(r.rounds, r.regret_ind.rows());
    for (long t = 1; t <= T; ++t) {
      const double s = std::sqrt(static_cast<double>(t));
      CsvRow row(combined);
      row << cfg.sweep_axis << value << t << r.regret_ind.row(t - 1).mean()
          << r.regret_ind.row(t - 1).maxCoeff() << r.regret_avg.row(t - 1).mean()
          << r.regret_avg.row(t - 1).maxCoeff() << r.coefficient * s << 2.0 * r.coefficient * s;
    }
    out.push_back({value, std::move(r)});
  }
  return out;
}

}  // namespace odopt
