#pragma once

#include <span>
#include <vector>

#include "odopt/graph.hpp"
#include "odopt/types.hpp"

namespace odopt {

/// Entries at or below this are treated as structural zeros when testing
/// supports (scrambling, SIA pattern, zero-pattern checks).
inline constexpr double kPositivityThreshold = 1e-14;

/// Row sums of a communication matrix must hit 1 within this.
inline constexpr double kRowSumTolerance = 1e-12;

/// Looser row-sum tolerance for products of many stochastic factors.
inline constexpr double kProductRowSumTolerance = 1e-10;

/// Row-stochastic communication matrix P(t) whose support lies inside a
/// pattern graph plus self-loops, with a strictly positive diagonal.
class CommMatrix {
 public:
  /// Validates every invariant against `pattern`; throws ErrorKind::validation.
  CommMatrix(RowMatrix entries, const WeightedDigraph& pattern);

  int size() const noexcept { return static_cast<int>(entries_.rows()); }
  const RowMatrix& matrix() const noexcept { return entries_; }
  double operator()(int i, int j) const { return entries_(i, j); }

  /// Weighted Laplacian I - P.
  RowMatrix weighted_laplacian() const;

 private:
  RowMatrix entries_;
};

/// Probability vector pi with pi_j = sum_i pi_i P_ij for the matrices it came
/// from.
struct WeightingVector {
  Vector pi;
};

bool is_row_stochastic(const RowMatrix& m, double tol = kRowSumTolerance);

/// tau(Q) = 1 - min_{i,j} sum_k min(Q_ik, Q_jk), in [0, 1].
/// Throws ErrorKind::validation when q is not row stochastic.
double ergodic_coefficient(const RowMatrix& q);

/// P^(t,0) = P^t ... P^0: the last factor in `seq` ends up leftmost.
RowMatrix backward_product(std::span<const RowMatrix> seq);

/// Incrementally maintained backward product.
class BackwardProduct {
 public:
  explicit BackwardProduct(int n);

  /// prod <- next * prod.
  void push(const RowMatrix& next);

  int count() const noexcept { return count_; }
  const RowMatrix& matrix() const noexcept { return product_; }

 private:
  RowMatrix product_;
  RowMatrix scratch_;
  int count_ = 0;
};

/// Every pair of rows shares a column where both entries are positive.
bool is_scrambling(const RowMatrix& q);

/// Pattern implied by a matrix: edge j -> i whenever P_ij is positive, i != j.
WeightedDigraph support_graph(const RowMatrix& p);

/// Left fixed vector of an SIA matrix by power iteration on the transpose,
/// started from the uniform vector. `max_iterations` <= 0 selects 100 * n.
/// Throws ErrorKind::structure for a non-SIA pattern and ConvergenceError
/// when the iteration cap is hit.
WeightingVector stationary_vector(const RowMatrix& p, double tol = 1e-12,
                                  int max_iterations = 0);

/// Row of the full backward product once all its rows agree within `tol`
/// (sup norm). Throws ConvergenceError carrying the achieved spread otherwise.
WeightingVector empirical_pi(std::span<const RowMatrix> seq, double tol);
/// Same, from an already accumulated product.
WeightingVector empirical_pi(const RowMatrix& backward_prod, double tol);

/// min_i max_j dist(j, i), clamped to at least 1. Requires a strongly
/// connected graph (ErrorKind::structure otherwise).
int nu_fixed(const WeightedDigraph& g);

/// Worst-case connectivity integer n - 1 for switching topologies.
int nu_switching(int n);

/// Result of the block ergodic-coefficient scan.
struct GammaEstimate {
  double gamma = 0.0;
  int blocks = 0;
  /// gamma < 1, i.e. the run certifies geometric contraction.
  bool contracting() const noexcept { return gamma < 1.0; }
};

/// Splits `seq` into consecutive blocks of delta * nu factors and returns the
/// largest tau of a block backward product. Trailing partial blocks are
/// ignored. Throws ErrorKind::parameter when no complete block exists.
GammaEstimate gamma_estimate(std::span<const RowMatrix> seq, int delta, int nu);

/// Streaming version of gamma_estimate for long runs where the matrices are
/// not kept around.
class GammaTracker {
 public:
  GammaTracker(int n, int block_length);

  void push(const RowMatrix& next);

  int block_length() const noexcept { return block_length_; }
  GammaEstimate estimate() const;

 private:
  BackwardProduct block_;
  int block_length_;
  int blocks_ = 0;
  double gamma_ = 0.0;
};

/// max_ij |prod_ij - pi_j|.
double consensus_gap(const RowMatrix& prod, const WeightingVector& pi);

/// Writes a matrix as CSV: a `n=<n>` header then one comma separated row per
/// matrix row.
void write_matrix_csv(std::ostream& out, const RowMatrix& m);

}  // namespace odopt
