#pragma once

// Independent reference computations shared by the unit tests. Nothing here
// calls into the library code under test.

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include "odopt/types.hpp"

namespace oracle {

using odopt::RowMatrix;
using odopt::Vector;

// Row-stochastic matrix with a positive diagonal; each off-diagonal entry is
// kept with probability `density`.
inline RowMatrix random_stochastic(int n, std::mt19937_64& rng, double density = 1.0) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  RowMatrix m = RowMatrix::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    double s = 0.0;
    for (int j = 0; j < n; ++j) {
      if (i == j || u(rng) < density) m(i, j) = 0.05 + u(rng);
      s += m(i, j);
    }
    m.row(i) /= s;
  }
  return m;
}

// 1 - min over all ordered pairs of sum_k min(q_ik, q_jk), straight from the
// definition.
inline double tau_bruteforce(const RowMatrix& q) {
  double best = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < q.rows(); ++i)
    for (Eigen::Index j = 0; j < q.rows(); ++j) {
      if (i == j) continue;
      double s = 0.0;
      for (Eigen::Index k = 0; k < q.cols(); ++k) s += std::min(q(i, k), q(j, k));
      best = std::min(best, s);
    }
  return q.rows() < 2 ? 0.0 : 1.0 - best;
}

// Floyd-Warshall on a dense adjacency (adj[i][j] true for i -> j).
inline std::vector<std::vector<double>> floyd(const std::vector<std::vector<bool>>& adj) {
  const std::size_t n = adj.size();
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<std::vector<double>> d(n, std::vector<double>(n, inf));
  for (std::size_t i = 0; i < n; ++i) {
    d[i][i] = 0;
    for (std::size_t j = 0; j < n; ++j)
      if (adj[i][j] && i != j) d[i][j] = 1;
  }
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) d[i][j] = std::min(d[i][j], d[i][k] + d[k][j]);
  return d;
}

// Left fixed vector by solving (P^T - I) pi = 0 with sum(pi) = 1 in the
// least-squares sense.
inline Vector stationary_linear_solve(const RowMatrix& p) {
  const auto n = p.rows();
  Eigen::MatrixXd a(n + 1, n);
  a.topRows(n) = p.transpose() - Eigen::MatrixXd::Identity(n, n);
  a.row(n).setOnes();
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n + 1);
  rhs[n] = 1.0;
  return a.colPivHouseholderQr().solve(rhs);
}

}  // namespace oracle
