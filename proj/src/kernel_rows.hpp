#pragma once

// Per-row bodies shared by the serial and parallel kernels. Keeping a single
// definition guarantees both variants perform identical arithmetic.

#include <algorithm>
#include <cassert>
#include <cmath>
#include <vector>

#include "odopt/types.hpp"

namespace odopt::kernels::detail {

struct SparseRows {
  std::vector<int> start;
  std::vector<int> col;
  std::vector<double> val;
};

inline SparseRows to_sparse(const RowMatrix& p) {
  SparseRows s;
  s.start.reserve(p.rows() + 1);
  s.start.push_back(0);
  for (Eigen::Index i = 0; i < p.rows(); ++i) {
    const double* row = p.data() + i * p.cols();
    for (Eigen::Index c = 0; c < p.cols(); ++c) {
      if (row[c] != 0.0) {
        s.col.push_back(static_cast<int>(c));
        s.val.push_back(row[c]);
      }
    }
    s.start.push_back(static_cast<int>(s.col.size()));
  }
  return s;
}

inline double overlap_row(const RowMatrix& q, Eigen::Index i) {
  const Eigen::Index n = q.rows();
  const double* a = q.data() + i * n;
  double best = 1.0;
  for (Eigen::Index j = i + 1; j < n; ++j) {
    const double* b = q.data() + j * n;
    double s = 0.0;
    for (Eigen::Index k = 0; k < n; ++k) s += std::min(a[k], b[k]);
    best = std::min(best, s);
  }
  return best;
}

inline void left_multiply_row(const RowMatrix& p, const RowMatrix& b, RowMatrix& out,
                              Eigen::Index i) {
  const Eigen::Index inner = p.cols();
  const Eigen::Index cols = b.cols();
  double* o = out.data() + i * cols;
  std::fill(o, o + cols, 0.0);
  const double* prow = p.data() + i * inner;
  for (Eigen::Index m = 0; m < inner; ++m) {
    const double w = prow[m];
    if (w == 0.0) continue;
    const double* brow = b.data() + m * cols;
    for (Eigen::Index c = 0; c < cols; ++c) o[c] += w * brow[c];
  }
}

inline void right_multiply_row(const RowMatrix& q, const SparseRows& p, RowMatrix& out,
                               Eigen::Index i) {
  const Eigen::Index inner = q.cols();
  const Eigen::Index cols = out.cols();
  double* o = out.data() + i * cols;
  std::fill(o, o + cols, 0.0);
  const double* qrow = q.data() + i * inner;
  for (Eigen::Index m = 0; m < inner; ++m) {
    const double w = qrow[m];
    if (w == 0.0) continue;
    for (int e = p.start[m]; e < p.start[m + 1]; ++e) o[p.col[e]] += w * p.val[e];
  }
}

inline void mix_row(const RowMatrix& p, const RowMatrix& y, const RowMatrix& add, RowMatrix& out,
                    Eigen::Index i) {
  const Eigen::Index n = p.cols();
  const Eigen::Index d = y.cols();
  const double* prow = p.data() + i * n;
  double* o = out.data() + i * d;
  std::fill(o, o + d, 0.0);
  for (Eigen::Index j = 0; j < n; ++j) {
    const double w = prow[j];
    if (w == 0.0) continue;
    const double* yrow = y.data() + j * d;
    for (Eigen::Index c = 0; c < d; ++c) o[c] += w * yrow[c];
  }
  const double* arow = add.data() + i * d;
  for (Eigen::Index c = 0; c < d; ++c) o[c] += arow[c];
}

inline double row_deviation(const RowMatrix& m, const Vector& pi, Eigen::Index i) {
  const Eigen::Index n = m.cols();
  const double* row = m.data() + i * n;
  double s = 0.0;
  for (Eigen::Index j = 0; j < n; ++j) s += std::abs(row[j] - pi[j]);
  return s;
}

inline double row_max_deviation(const RowMatrix& m, const Vector& pi, Eigen::Index i) {
  const Eigen::Index n = m.cols();
  const double* row = m.data() + i * n;
  double s = 0.0;
  for (Eigen::Index j = 0; j < n; ++j) s = std::max(s, std::abs(row[j] - pi[j]));
  return s;
}

inline double column_spread(const RowMatrix& m, Eigen::Index j) {
  double lo = m(0, j);
  double hi = lo;
  for (Eigen::Index i = 1; i < m.rows(); ++i) {
    lo = std::min(lo, m(i, j));
    hi = std::max(hi, m(i, j));
  }
  return hi - lo;
}

inline void check_product_shapes(const RowMatrix& a, const RowMatrix& b, const RowMatrix& out) {
  assert(a.cols() == b.rows());
  assert(&out != &a && &out != &b);
  (void)a;
  (void)b;
  (void)out;
}

}  // namespace odopt::kernels::detail
