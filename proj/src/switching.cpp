#include "odopt/switching.hpp"

#include <algorithm>
#include <deque>
#include <string>

#include "odopt/error.hpp"
#include "odopt/rng.hpp"

namespace odopt {

namespace {

// BFS out-tree and in-tree rooted at node 0: strongly connected whenever the
// base graph is, with at most 2(n-1) edges
std::vector<WeightedEdge> spanning_certificate(const WeightedDigraph& g) {
  const int n = g.size();
  std::vector<WeightedEdge> cert;
  if (n == 0) return cert;
  for (bool forward : {true, false}) {
    std::vector<char> seen(static_cast<std::size_t>(n), 0);
    std::deque<int> queue{0};
    seen[0] = 1;
    while (!queue.empty()) {
      const int u = queue.front();
      queue.pop_front();
      for (int v : forward ? g.out_neighbors(u) : g.in_neighbors(u)) {
        if (seen[v]) continue;
        seen[v] = 1;
        queue.push_back(v);
        cert.push_back(forward ? WeightedEdge{u, v, g.weight(u, v)}
                               : WeightedEdge{v, u, g.weight(v, u)});
      }
    }
  }
  std::sort(cert.begin(), cert.end(), [](const auto& a, const auto& b) {
    return std::pair(a.from, a.to) < std::pair(b.from, b.to);
  });
  cert.erase(std::unique(cert.begin(), cert.end()), cert.end());
  return cert;
}

}  // namespace

std::string_view to_string(ScheduleMode m) noexcept {
  switch (m) {
    case ScheduleMode::fixed: return "fixed";
    case ScheduleMode::partition: return "partition";
    case ScheduleMode::random_drop: return "random_drop";
    case ScheduleMode::jam_isolation: return "jam_isolation";
  }
  return "?";
}

ScheduleMode parse_schedule_mode(std::string_view name) {
  for (auto m : {ScheduleMode::fixed, ScheduleMode::partition, ScheduleMode::random_drop,
                 ScheduleMode::jam_isolation})
    if (name == to_string(m)) return m;
  throw Error(ErrorKind::config, "unknown schedule mode '" + std::string(name) + "'");
}

TopologySchedule::TopologySchedule(WeightedDigraph base, ScheduleSpec spec)
    : base_(std::move(base)), spec_(std::move(spec)) {
  if (spec_.delta < 1) throw Error(ErrorKind::parameter, "schedule: delta must be >= 1");
  if (!(spec_.p_drop >= 0.0 && spec_.p_drop <= 1.0))
    throw Error(ErrorKind::parameter, "schedule: p_drop must lie in [0, 1]");
  for (int j : spec_.jammed)
    if (j < 0 || j >= base_.size())
      throw Error(ErrorKind::parameter, "schedule: jammed index out of range");
  if (spec_.mode == ScheduleMode::random_drop) certificate_ = spanning_certificate(base_);
}

int TopologySchedule::delta() const noexcept {
  switch (spec_.mode) {
    case ScheduleMode::partition:
    case ScheduleMode::random_drop: return spec_.delta;
    default: return 1;
  }
}

std::vector<WeightedEdge> TopologySchedule::dropped(long t) const {
  CounterRng rng(derive_seed(spec_.seed, Stream::schedule, static_cast<std::uint64_t>(t)));
  std::vector<WeightedEdge> kept;
  for (const auto& e : base_.edges())
    if (!(rng.uniform() < spec_.p_drop)) kept.push_back(e);
  return kept;
}

WeightedDigraph TopologySchedule::edges_at(long t) const {
  if (t < 1) throw Error(ErrorKind::parameter, "edges_at: t must be >= 1");
  switch (spec_.mode) {
    case ScheduleMode::fixed:
    case ScheduleMode::jam_isolation: return base_;
    case ScheduleMode::partition: {
      const auto& all = base_.edges();
      const long group = (t - 1) % spec_.delta;
      std::vector<WeightedEdge> mine;
      for (std::size_t e = static_cast<std::size_t>(group); e < all.size();
           e += static_cast<std::size_t>(spec_.delta))
        mine.push_back(all[e]);
      return WeightedDigraph(base_.size(), mine);
    }
    case ScheduleMode::random_drop: {
      auto kept = dropped(t);
      if (t % spec_.delta != 0) return WeightedDigraph(base_.size(), kept);
      // window end: look back over the window and repair if needed
      std::vector<WeightedDigraph> window;
      for (long s = t - spec_.delta + 1; s < t; ++s)
        window.emplace_back(base_.size(), dropped(s));
      window.emplace_back(base_.size(), kept);
      if (is_strongly_connected(union_graph(window))) return window.back();
      for (const auto& e : certificate_)
        if (!std::any_of(kept.begin(), kept.end(),
                         [&](const auto& k) { return k.from == e.from && k.to == e.to; }))
          kept.push_back(e);
      return WeightedDigraph(base_.size(), kept);
    }
  }
  return base_;
}

ScheduleReport validate_schedule(const TopologySchedule& sched, long T) {
  ScheduleReport report;
  const int delta = sched.delta();
  for (long m = 0; (m + 1) * delta <= T; ++m) {
    std::vector<WeightedDigraph> window;
    for (long t = m * delta + 1; t <= (m + 1) * delta; ++t) window.push_back(sched.edges_at(t));
    ++report.windows_checked;
    if (!is_strongly_connected(union_graph(window))) {
      report.first_violation = m + 1;
      break;
    }
  }
  return report;
}

}  // namespace odopt
