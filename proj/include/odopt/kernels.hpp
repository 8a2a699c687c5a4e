#pragma once

// Data-parallel inner loops of the simulator.
//
// Every kernel exists twice: `serial::` is the reference implementation kept
// for testing, `parallel::` distributes rows over OpenMP threads. Both compute
// each output element with the same sequence of floating-point operations, so
// their results are bit-identical for any thread count.

#include "odopt/types.hpp"

namespace odopt::kernels {

/// True when the library was built with OpenMP.
bool openmp_enabled() noexcept;

/// Thread count used by the parallel kernels and the per-agent loops.
/// Values < 1 restore the OpenMP default.
void set_threads(int threads);
int threads() noexcept;

namespace serial {

/// min over row pairs i < j of sum_k min(q_ik, q_jk). Returns 1 for n < 2.
double min_row_overlap(const RowMatrix& q);

/// out = p * b, skipping structural zeros of p.
void left_multiply(const RowMatrix& p, const RowMatrix& b, RowMatrix& out);

/// out = q * p for dense q and sparse p.
void right_multiply(const RowMatrix& q, const RowMatrix& p, RowMatrix& out);

/// out = p * y + add, one agent per row of y.
void mix_rows(const RowMatrix& p, const RowMatrix& y, const RowMatrix& add, RowMatrix& out);

/// acc_i += sum_j |m_ij - pi_j|.
void accumulate_row_deviation(const RowMatrix& m, const Vector& pi, Vector& acc);

/// max_ij |m_ij - pi_j|.
double max_abs_deviation(const RowMatrix& m, const Vector& pi);

/// max_j (max_i m_ij - min_i m_ij): the largest row-pair sup-distance.
double max_column_spread(const RowMatrix& m);

}  // namespace serial

namespace parallel {

double min_row_overlap(const RowMatrix& q);
void left_multiply(const RowMatrix& p, const RowMatrix& b, RowMatrix& out);
void right_multiply(const RowMatrix& q, const RowMatrix& p, RowMatrix& out);
void mix_rows(const RowMatrix& p, const RowMatrix& y, const RowMatrix& add, RowMatrix& out);
void accumulate_row_deviation(const RowMatrix& m, const Vector& pi, Vector& acc);
double max_abs_deviation(const RowMatrix& m, const Vector& pi);
double max_column_spread(const RowMatrix& m);

}  // namespace parallel

}  // namespace odopt::kernels
