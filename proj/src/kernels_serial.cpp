#include "kernel_rows.hpp"
#include "odopt/kernels.hpp"

namespace odopt::kernels::serial {

using namespace detail;

double min_row_overlap(const RowMatrix& q) {
  double best = 1.0;
  for (Eigen::Index i = 0; i + 1 < q.rows(); ++i) best = std::min(best, overlap_row(q, i));
  return best;
}

void left_multiply(const RowMatrix& p, const RowMatrix& b, RowMatrix& out) {
  check_product_shapes(p, b, out);
  out.resize(p.rows(), b.cols());
  for (Eigen::Index i = 0; i < p.rows(); ++i) left_multiply_row(p, b, out, i);
}

void right_multiply(const RowMatrix& q, const RowMatrix& p, RowMatrix& out) {
  check_product_shapes(q, p, out);
  out.resize(q.rows(), p.cols());
  const SparseRows sp = to_sparse(p);
  for (Eigen::Index i = 0; i < q.rows(); ++i) right_multiply_row(q, sp, out, i);
}

void mix_rows(const RowMatrix& p, const RowMatrix& y, const RowMatrix& add, RowMatrix& out) {
  check_product_shapes(p, y, out);
  out.resize(p.rows(), y.cols());
  for (Eigen::Index i = 0; i < p.rows(); ++i) mix_row(p, y, add, out, i);
}

void accumulate_row_deviation(const RowMatrix& m, const Vector& pi, Vector& acc) {
  for (Eigen::Index i = 0; i < m.rows(); ++i) acc[i] += row_deviation(m, pi, i);
}

double max_abs_deviation(const RowMatrix& m, const Vector& pi) {
  double worst = 0.0;
  for (Eigen::Index i = 0; i < m.rows(); ++i) worst = std::max(worst, row_max_deviation(m, pi, i));
  return worst;
}

double max_column_spread(const RowMatrix& m) {
  double worst = 0.0;
  if (m.rows() == 0) return worst;
  for (Eigen::Index j = 0; j < m.cols(); ++j) worst = std::max(worst, column_spread(m, j));
  return worst;
}

}  // namespace odopt::kernels::serial
