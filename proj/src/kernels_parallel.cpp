#include "kernel_rows.hpp"
#include "odopt/kernels.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace odopt::kernels {

namespace {
int g_threads = 0;
}

bool openmp_enabled() noexcept {
#ifdef _OPENMP
  return true;
#else
  return false;
#endif
}

void set_threads(int threads) {
  g_threads = threads < 1 ? 0 : threads;
#ifdef _OPENMP
  omp_set_num_threads(g_threads > 0 ? g_threads : omp_get_num_procs());
#endif
}

int threads() noexcept {
#ifdef _OPENMP
  return g_threads > 0 ? g_threads : omp_get_max_threads();
#else
  return 1;
#endif
}

namespace parallel {

using namespace detail;

double min_row_overlap(const RowMatrix& q) {
  double best = 1.0;
  const Eigen::Index n = q.rows();
#pragma omp parallel for schedule(dynamic, 4) reduction(min : best)
  for (Eigen::Index i = 0; i < n - 1; ++i) best = std::min(best, overlap_row(q, i));
  return best;
}

void left_multiply(const RowMatrix& p, const RowMatrix& b, RowMatrix& out) {
  check_product_shapes(p, b, out);
  out.resize(p.rows(), b.cols());
  const Eigen::Index n = p.rows();
#pragma omp parallel for schedule(static)
  for (Eigen::Index i = 0; i < n; ++i) left_multiply_row(p, b, out, i);
}

void right_multiply(const RowMatrix& q, const RowMatrix& p, RowMatrix& out) {
  check_product_shapes(q, p, out);
  out.resize(q.rows(), p.cols());
  const SparseRows sp = to_sparse(p);
  const Eigen::Index n = q.rows();
#pragma omp parallel for schedule(static)
  for (Eigen::Index i = 0; i < n; ++i) right_multiply_row(q, sp, out, i);
}

void mix_rows(const RowMatrix& p, const RowMatrix& y, const RowMatrix& add, RowMatrix& out) {
  check_product_shapes(p, y, out);
  out.resize(p.rows(), y.cols());
  const Eigen::Index n = p.rows();
#pragma omp parallel for schedule(static)
  for (Eigen::Index i = 0; i < n; ++i) mix_row(p, y, add, out, i);
}

void accumulate_row_deviation(const RowMatrix& m, const Vector& pi, Vector& acc) {
  const Eigen::Index n = m.rows();
#pragma omp parallel for schedule(static)
  for (Eigen::Index i = 0; i < n; ++i) acc[i] += row_deviation(m, pi, i);
}

double max_abs_deviation(const RowMatrix& m, const Vector& pi) {
  double worst = 0.0;
  const Eigen::Index n = m.rows();
#pragma omp parallel for schedule(static) reduction(max : worst)
  for (Eigen::Index i = 0; i < n; ++i) worst = std::max(worst, row_max_deviation(m, pi, i));
  return worst;
}

double max_column_spread(const RowMatrix& m) {
  double worst = 0.0;
  if (m.rows() == 0) return worst;
  const Eigen::Index cols = m.cols();
#pragma omp parallel for schedule(static) reduction(max : worst)
  for (Eigen::Index j = 0; j < cols; ++j) worst = std::max(worst, column_spread(m, j));
  return worst;
}

}  // namespace parallel
}  // namespace odopt::kernels
