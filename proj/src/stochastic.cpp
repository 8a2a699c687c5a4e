#include "odopt/stochastic.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <string>

#include "odopt/csv.hpp"
#include "odopt/error.hpp"
#include "odopt/kernels.hpp"

namespace odopt {

namespace {

double tau_unchecked(const RowMatrix& q, bool parallel) {
  const double overlap = parallel ? kernels::parallel::min_row_overlap(q)
                                  : kernels::serial::min_row_overlap(q);
  return std::clamp(1.0 - overlap, 0.0, 1.0);
}

void require_square(const RowMatrix& m, const char* who) {
  if (m.rows() != m.cols())
    throw Error(ErrorKind::dimension, std::string(who) + ": matrix is not square");
}

}  // namespace

CommMatrix::CommMatrix(RowMatrix entries, const WeightedDigraph& pattern)
    : entries_(std::move(entries)) {
  const int n = pattern.size();
  if (entries_.rows() != n || entries_.cols() != n)
    throw Error(ErrorKind::validation, "communication matrix does not match pattern size");
  for (int i = 0; i < n; ++i) {
    double sum = 0.0;
    for (int j = 0; j < n; ++j) {
      const double v = entries_(i, j);
      if (!(v >= 0.0))
        throw Error(ErrorKind::validation, "negative or non-finite entry in row " +
                                               std::to_string(i + 1));
      if (v > 0.0 && j != i && !pattern.has_edge(j, i))
        throw Error(ErrorKind::validation,
                    "entry (" + std::to_string(i + 1) + "," + std::to_string(j + 1) +
                        ") outside the pattern");
      sum += v;
    }
    if (std::abs(sum - 1.0) > kRowSumTolerance)
      throw Error(ErrorKind::validation, "row " + std::to_string(i + 1) + " sums to " +
                                             format_double(sum));
    if (!(entries_(i, i) > 0.0))
      throw Error(ErrorKind::validation,
                  "diagonal entry " + std::to_string(i + 1) + " is not positive");
  }
}

RowMatrix CommMatrix::weighted_laplacian() const {
  return RowMatrix::Identity(entries_.rows(), entries_.cols()) - entries_;
}

bool is_row_stochastic(const RowMatrix& m, double tol) {
  if (m.rows() != m.cols()) return false;
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    double sum = 0.0;
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      const double v = m(i, j);
      if (!(v >= 0.0)) return false;
      sum += v;
    }
    if (std::abs(sum - 1.0) > tol) return false;
  }
  return true;
}

double ergodic_coefficient(const RowMatrix& q) {
  if (!is_row_stochastic(q, kProductRowSumTolerance))
    throw Error(ErrorKind::validation, "ergodic_coefficient: matrix is not row stochastic");
  return tau_unchecked(q, true);
}

RowMatrix backward_product(std::span<const RowMatrix> seq) {
  if (seq.empty()) throw Error(ErrorKind::parameter, "backward_product: empty sequence");
  const auto n = seq.front().rows();
  BackwardProduct prod(static_cast<int>(n));
  for (const auto& m : seq) {
    if (m.rows() != n || m.cols() != n)
      throw Error(ErrorKind::dimension, "backward_product: factor dimensions differ");
    prod.push(m);
  }
  return prod.matrix();
}

BackwardProduct::BackwardProduct(int n)
    : product_(RowMatrix::Identity(n, n)), scratch_(n, n) {}

void BackwardProduct::push(const RowMatrix& next) {
  kernels::parallel::left_multiply(next, product_, scratch_);
  product_.swap(scratch_);
  ++count_;
}

bool is_scrambling(const RowMatrix& q) {
  require_square(q, "is_scrambling");
  const Eigen::Index n = q.rows();
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      bool shared = false;
      for (Eigen::Index k = 0; k < n && !shared; ++k)
        shared = q(i, k) > kPositivityThreshold && q(j, k) > kPositivityThreshold;
      if (!shared) return false;
    }
  }
  return true;
}

WeightedDigraph support_graph(const RowMatrix& p) {
  require_square(p, "support_graph");
  std::vector<WeightedEdge> edges;
  for (Eigen::Index i = 0; i < p.rows(); ++i)
    for (Eigen::Index j = 0; j < p.cols(); ++j)
      if (i != j && p(i, j) > kPositivityThreshold)
        edges.push_back({static_cast<int>(j), static_cast<int>(i), 1.0});
  return WeightedDigraph(static_cast<int>(p.rows()), edges);
}

WeightingVector stationary_vector(const RowMatrix& p, double tol, int max_iterations) {
  require_square(p, "stationary_vector");
  const auto n = static_cast<int>(p.rows());
  if (!is_row_stochastic(p, kProductRowSumTolerance))
    throw Error(ErrorKind::validation, "stationary_vector: matrix is not row stochastic");
  for (int i = 0; i < n; ++i)
    if (!(p(i, i) > kPositivityThreshold))
      throw Error(ErrorKind::structure, "stationary_vector: zero diagonal, matrix is not SIA");
  if (!is_strongly_connected(support_graph(p)))
    throw Error(ErrorKind::structure,
                "stationary_vector: pattern is not strongly connected, matrix is not SIA");

  const int cap = max_iterations > 0 ? max_iterations : 100 * n;
  Vector pi = Vector::Constant(n, 1.0 / n);
  Vector next(n);
  double residual = 0.0;
  for (int it = 0; it < cap; ++it) {
    next.noalias() = p.transpose() * pi;
    next /= next.sum();
    residual = (p.transpose() * next - next).cwiseAbs().maxCoeff();
    pi.swap(next);
    if (residual <= tol) return {pi};
  }
  throw ConvergenceError("stationary_vector: no convergence within " + std::to_string(cap) +
                             " iterations",
                         residual);
}

WeightingVector empirical_pi(const RowMatrix& backward_prod, double tol) {
  require_square(backward_prod, "empirical_pi");
  const double spread = kernels::parallel::max_column_spread(backward_prod);
  if (!(spread <= tol))
    throw ConvergenceError("empirical_pi: backward product rows differ by " +
                               format_double(spread) + " > " + format_double(tol),
                           spread);
  return {backward_prod.row(0).transpose()};
}

WeightingVector empirical_pi(std::span<const RowMatrix> seq, double tol) {
  return empirical_pi(backward_product(seq), tol);
}

int nu_fixed(const WeightedDigraph& g) {
  if (!is_strongly_connected(g))
    throw Error(ErrorKind::structure, "nu_fixed: graph is not strongly connected");
  const int n = g.size();
  const auto dist = distances(g);
  int best = kUnreachable;
  for (int i = 0; i < n; ++i) {
    int ecc = 0;
    for (int j = 0; j < n; ++j) ecc = std::max(ecc, dist[j][i]);
    best = std::min(best, ecc);
  }
  return std::max(best, 1);
}

int nu_switching(int n) {
  if (n < 2) throw Error(ErrorKind::parameter, "nu_switching: need n >= 2");
  return n - 1;
}

GammaEstimate gamma_estimate(std::span<const RowMatrix> seq, int delta, int nu) {
  if (delta < 1 || nu < 1) throw Error(ErrorKind::parameter, "gamma_estimate: delta, nu >= 1");
  const long block = static_cast<long>(delta) * nu;
  const long blocks = static_cast<long>(seq.size()) / block;
  if (blocks == 0)
    throw Error(ErrorKind::parameter, "gamma_estimate: sequence shorter than one block of " +
                                          std::to_string(block));
  const auto n = seq.front().rows();
  double gamma = 0.0;
#pragma omp parallel for schedule(dynamic) reduction(max : gamma)
  for (long b = 0; b < blocks; ++b) {
    RowMatrix prod = RowMatrix::Identity(n, n);
    RowMatrix scratch(n, n);
    for (long s = b * block; s < (b + 1) * block; ++s) {
      kernels::serial::left_multiply(seq[s], prod, scratch);
      prod.swap(scratch);
    }
    gamma = std::max(gamma, tau_unchecked(prod, false));
  }
  return {gamma, static_cast<int>(blocks)};
}

GammaTracker::GammaTracker(int n, int block_length) : block_(n), block_length_(block_length) {
  if (block_length < 1) throw Error(ErrorKind::parameter, "GammaTracker: block length >= 1");
}

void GammaTracker::push(const RowMatrix& next) {
  block_.push(next);
  if (block_.count() == block_length_) {
    gamma_ = std::max(gamma_, tau_unchecked(block_.matrix(), true));
    ++blocks_;
    block_ = BackwardProduct(static_cast<int>(next.rows()));
  }
}

GammaEstimate GammaTracker::estimate() const { return {gamma_, blocks_}; }

double consensus_gap(const RowMatrix& prod, const WeightingVector& pi) {
  if (prod.cols() != pi.pi.size())
    throw Error(ErrorKind::dimension, "consensus_gap: size mismatch");
  return kernels::parallel::max_abs_deviation(prod, pi.pi);
}

void write_matrix_csv(std::ostream& out, const RowMatrix& m) {
  out << "n=" << m.rows() << '\n';
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    CsvRow row(out);
    for (Eigen::Index j = 0; j < m.cols(); ++j) row << m(i, j);
  }
}

}  // namespace odopt
