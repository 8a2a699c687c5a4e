// Serial vs OpenMP timings for the hot kernels.
// Usage: bench_kernels [n=200] [reps=20] [threads=0 (OpenMP default)]

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <random>
#include <string>

#include "odopt/kernels.hpp"

using namespace odopt;
namespace k = odopt::kernels;

namespace {

RowMatrix lazy_sparse(int n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  RowMatrix p = RowMatrix::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    p(i, i) = 1.0;
    for (int s = 1; s <= 4; ++s) p(i, (i + s * 7) % n) = u(rng);
    p.row(i) /= p.row(i).sum();
  }
  return p;
}

RowMatrix dense_stochastic(int n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  RowMatrix q(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) q(i, j) = u(rng);
    q.row(i) /= q.row(i).sum();
  }
  return q;
}

double time_ms(int reps, const std::function<void()>& fn) {
  fn();
  const auto t0 = std::chrono::steady_clock::now();
  for (int r = 0; r < reps; ++r) fn();
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count() / reps;
}

void row(const char* name, double serial, double parallel, bool same) {
  std::printf("%-26s %10.3f %10.3f %8.2fx  %s\n", name, serial, parallel, serial / parallel,
              same ? "identical" : "DIFFERENT");
}

}  // namespace

int main(int argc, char** argv) {
  const int n = argc > 1 ? std::atoi(argv[1]) : 200;
  const int reps = argc > 2 ? std::atoi(argv[2]) : 20;
  if (argc > 3) k::set_threads(std::atoi(argv[3]));
  std::printf("n=%d reps=%d openmp=%s threads=%d\n", n, reps, k::openmp_enabled() ? "yes" : "no",
              k::threads());
  std::printf("%-26s %10s %10s %9s\n", "kernel", "serial ms", "omp ms", "speedup");

  std::mt19937_64 rng(1);
  const RowMatrix p = lazy_sparse(n, rng);
  const RowMatrix q = dense_stochastic(n, rng);
  const RowMatrix y = dense_stochastic(n, rng);
  const Vector pi = Vector::Constant(n, 1.0 / n);
  RowMatrix a(n, n), b(n, n);

  double ts = time_ms(reps, [&] { k::serial::left_multiply(p, q, a); });
  double tp = time_ms(reps, [&] { k::parallel::left_multiply(p, q, b); });
  row("left_multiply", ts, tp, a == b);

  ts = time_ms(reps, [&] { k::serial::right_multiply(q, p, a); });
  tp = time_ms(reps, [&] { k::parallel::right_multiply(q, p, b); });
  row("right_multiply", ts, tp, a == b);

  ts = time_ms(reps, [&] { k::serial::mix_rows(p, y, q, a); });
  tp = time_ms(reps, [&] { k::parallel::mix_rows(p, y, q, b); });
  row("mix_rows", ts, tp, a == b);

  double s1 = 0, s2 = 0;
  ts = time_ms(reps, [&] { s1 = k::serial::min_row_overlap(q); });
  tp = time_ms(reps, [&] { s2 = k::parallel::min_row_overlap(q); });
  row("min_row_overlap", ts, tp, s1 == s2);

  Vector acc1 = Vector::Zero(n), acc2 = Vector::Zero(n);
  ts = time_ms(reps, [&] { k::serial::accumulate_row_deviation(q, pi, acc1); });
  tp = time_ms(reps, [&] { k::parallel::accumulate_row_deviation(q, pi, acc2); });
  row("accumulate_row_deviation", ts, tp, acc1 == acc2);

  ts = time_ms(reps, [&] { s1 = k::serial::max_column_spread(q); });
  tp = time_ms(reps, [&] { s2 = k::parallel::max_column_spread(q); });
  row("max_column_spread", ts, tp, s1 == s2);
  return 0;
}
