#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

#include "odopt/graph.hpp"

namespace odopt {

enum class ScheduleMode {
  /// Base graph every round.
  fixed,
  /// Base edges dealt round-robin into delta groups, one group per round.
  partition,
  /// Each edge dropped independently with probability p_drop; a spanning
  /// certificate is added at window end when the window union would fail.
  random_drop,
  /// Jamming corrupts data only, so the base graph is emitted every round.
  jam_isolation,
};

std::string_view to_string(ScheduleMode m) noexcept;
ScheduleMode parse_schedule_mode(std::string_view name);

struct ScheduleSpec {
  ScheduleMode mode = ScheduleMode::fixed;
  int delta = 1;
  double p_drop = 0.0;
  std::vector<int> jammed;
  std::uint64_t seed = 0;
};

/// Generator of per-round edge sets. edges_at is a pure function of
/// (seed, t), so it can be queried in any order and from several threads.
class TopologySchedule {
 public:
  /// Throws ErrorKind::parameter for delta < 1, p_drop outside [0, 1] or a
  /// jammed index out of range. Connectivity is checked by validate_schedule.
  TopologySchedule(WeightedDigraph base, ScheduleSpec spec);

  const WeightedDigraph& base() const noexcept { return base_; }
  const ScheduleSpec& spec() const noexcept { return spec_; }
  ScheduleMode mode() const noexcept { return spec_.mode; }
  /// Union window length; 1 for the modes that always emit the base graph.
  int delta() const noexcept;

  /// E^t for t >= 1.
  WeightedDigraph edges_at(long t) const;

 private:
  std::vector<WeightedEdge> dropped(long t) const;

  WeightedDigraph base_;
  ScheduleSpec spec_;
  std::vector<WeightedEdge> certificate_;
};

struct ScheduleReport {
  long windows_checked = 0;
  /// 1-based index of the first window whose union is not strongly
  /// connected, 0 when all pass.
  long first_violation = 0;
  bool ok() const noexcept { return first_violation == 0; }
};

/// Checks the union of every complete window [m delta + 1, (m + 1) delta]
/// inside [1, T].
ScheduleReport validate_schedule(const TopologySchedule& sched, long T);

}  // namespace odopt
