#pragma once

#include <span>
#include <vector>

#include "odopt/graph.hpp"
#include "odopt/stochastic.hpp"
#include "odopt/types.hpp"

namespace odopt {

/// Below this the active weights of an allocator are rescaled by their max.
inline constexpr double kWeightUnderflow = 1e-150;

/// Exponential re-weighting state held by one agent over all n potential
/// senders (itself included).
struct AllocatorState {
  int owner = 0;
  double beta = 1.0;
  /// Losses are divided by this and clamped to 1 before exponentiation.
  double loss_normalizer = 1.0;
  Vector w;
  /// Rounds during which edge j -> owner was active (self entry counts too).
  std::vector<long> active_rounds;

  int size() const noexcept { return static_cast<int>(w.size()); }
};

/// All-ones weights. Throws ErrorKind::parameter for beta outside [0, 1],
/// non-positive normalizer or owner out of range.
AllocatorState make_allocator(int owner, int n, double beta, double loss_normalizer);

/// {N_i, i} sorted ascending.
std::vector<int> active_set(const WeightedDigraph& g, int i);

/// w_j <- w_j * beta^min(loss_j / M, 1) for j in `active`; other entries are
/// left alone. `losses` is indexed by agent and only read at active entries.
/// Throws ErrorKind::validation on a negative or non-finite active loss.
void doa_update(AllocatorState& state, std::span<const int> active,
                std::span<const double> losses);

/// Weights restricted to `active` and renormalized; zero elsewhere.
/// Throws ErrorKind::degenerate when nothing active carries weight.
Vector distribution(const AllocatorState& state, std::span<const int> active);

/// Row i is agent i's distribution over {N_i^t, i}. Throws AssemblyError
/// naming the first degenerate row.
CommMatrix assemble_comm_matrix(std::span<const AllocatorState> states,
                                const WeightedDigraph& topology);

/// M (sqrt(2 T ln m) + ln m).
double oa_regret_bound(double M, int m, long T);

/// beta = 1 / (1 + sqrt(2 ln m / T)), the choice under which the bound above
/// holds for losses in [0, M].
double tuned_beta(int m, long T);

/// sum_t <q(t), h(t)> - min_j sum_t h_j(t). Rows are rounds, columns experts.
double wm_regret(const RowMatrix& q, const RowMatrix& losses);

}  // namespace odopt
