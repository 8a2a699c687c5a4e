#include "odopt/doa.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "odopt/error.hpp"

namespace odopt {

AllocatorState make_allocator(int owner, int n, double beta, double loss_normalizer) {
  if (!(beta >= 0.0 && beta <= 1.0))
    throw Error(ErrorKind::parameter, "allocator: beta must lie in [0, 1]");
  if (!(loss_normalizer > 0.0) || !std::isfinite(loss_normalizer))
    throw Error(ErrorKind::parameter, "allocator: loss normalizer must be positive");
  if (owner < 0 || owner >= n) throw Error(ErrorKind::parameter, "allocator: owner out of range");
  AllocatorState s;
  s.owner = owner;
  s.beta = beta;
  s.loss_normalizer = loss_normalizer;
  s.w = Vector::Ones(n);
  s.active_rounds.assign(static_cast<std::size_t>(n), 0);
  return s;
}

std::vector<int> active_set(const WeightedDigraph& g, int i) {
  auto nbrs = g.in_neighbors(i);
  std::vector<int> out(nbrs.begin(), nbrs.end());
  out.insert(std::upper_bound(out.begin(), out.end(), i), i);
  return out;
}

void doa_update(AllocatorState& state, std::span<const int> active,
                std::span<const double> losses) {
  if (!(state.beta >= 0.0 && state.beta <= 1.0))
    throw Error(ErrorKind::parameter, "doa_update: beta must lie in [0, 1]");
  for (int j : active) {
    const double f = losses[j];
    if (!(f >= 0.0) || !std::isfinite(f))
      throw Error(ErrorKind::validation,
                  "doa_update: loss of agent " + std::to_string(j + 1) + " is negative or non-finite");
  }
  double top = 0.0;
  for (int j : active) {
    const double e = std::min(losses[j] / state.loss_normalizer, 1.0);
    state.w[j] *= std::pow(state.beta, e);
    ++state.active_rounds[j];
    top = std::max(top, state.w[j]);
  }
  // only ratios matter, so rescale before everything flushes to zero
  if (top > 0.0 && top < kWeightUnderflow) state.w /= top;
}

Vector distribution(const AllocatorState& state, std::span<const int> active) {
  if (active.empty()) throw Error(ErrorKind::degenerate, "distribution: empty active set");
  double sum = 0.0;
  for (int j : active) sum += state.w[j];
  if (!(sum > 0.0) || !std::isfinite(sum))
    throw Error(ErrorKind::degenerate, "distribution: active weights sum to zero");
  Vector q = Vector::Zero(state.size());
  for (int j : active) q[j] = state.w[j] / sum;
  return q;
}

CommMatrix assemble_comm_matrix(std::span<const AllocatorState> states,
                                const WeightedDigraph& topology) {
  const int n = topology.size();
  if (static_cast<int>(states.size()) != n)
    throw AssemblyError("assemble_comm_matrix: need one allocator per agent", 0);
  RowMatrix p = RowMatrix::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    const auto act = active_set(topology, i);
    Vector q;
    try {
      q = distribution(states[i], act);
    } catch (const Error& e) {
      throw AssemblyError("agent " + std::to_string(i + 1) + ": " + e.what(), i);
    }
    if (!(q[i] > 0.0))
      throw AssemblyError("agent " + std::to_string(i + 1) + ": self weight vanished", i);
    p.row(i) = q.transpose();
  }
  return CommMatrix(std::move(p), topology);
}

double oa_regret_bound(double M, int m, long T) {
  if (!(M > 0.0) || m < 1 || T < 1)
    throw Error(ErrorKind::parameter, "oa_regret_bound: need M > 0, m >= 1, T >= 1");
  const double lm = std::log(static_cast<double>(m));
  return M * (std::sqrt(2.0 * static_cast<double>(T) * lm) + lm);
}

double tuned_beta(int m, long T) {
  if (m < 1 || T < 1) throw Error(ErrorKind::parameter, "tuned_beta: need m >= 1, T >= 1");
  return 1.0 / (1.0 + std::sqrt(2.0 * std::log(static_cast<double>(m)) / static_cast<double>(T)));
}

double wm_regret(const RowMatrix& q, const RowMatrix& losses) {
  if (q.rows() != losses.rows() || q.cols() != losses.cols())
    throw Error(ErrorKind::dimension, "wm_regret: q and losses differ in shape");
  if (q.rows() == 0) throw Error(ErrorKind::parameter, "wm_regret: empty trace");
  double mixed = 0.0;
  for (Eigen::Index t = 0; t < q.rows(); ++t) mixed += q.row(t).dot(losses.row(t));
  return mixed - losses.colwise().sum().minCoeff();
}

}  // namespace odopt
