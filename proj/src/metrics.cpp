#include "odopt/metrics.hpp"

#include <cmath>

#include "odopt/error.hpp"
#include "odopt/kernels.hpp"

namespace odopt {

void BoundInputs::validate() const {
  if (!(gamma >= 0.0 && gamma < 1.0))
    throw Error(ErrorKind::parameter, "bound: gamma must lie in [0, 1) for a contraction");
  if (!(R >= 0.0) || !(L >= 0.0) || !(k > 0.0) || n < 1 || nu < 1 || delta < 1)
    throw Error(ErrorKind::parameter, "bound: need R, L >= 0, k > 0 and n, nu, delta >= 1");
}

double regret_coefficient(const BoundInputs& b) {
  b.validate();
  const double n = b.n;
  return b.R * b.R / b.k +
         b.k * b.L * b.L * (6.0 * n / (1.0 - b.gamma) + 6.0 * n * b.delta * b.nu + 1.0);
}

double regret_bound(const BoundInputs& b, long T, BoundVariant v) {
  if (T < 1) throw Error(ErrorKind::parameter, "bound: T must be >= 1");
  const double c = regret_coefficient(b);
  const double s = std::sqrt(static_cast<double>(T));
  switch (v) {
    case BoundVariant::cumulative: return c * s;
    case BoundVariant::running_average: return 2.0 * c * s;
    case BoundVariant::time_averaged: return c / s;
  }
  return c * s;
}

std::vector<double> regret_series(const LossOracle& oracle, std::span<const Vector> xs,
                                  const Vector& x_star) {
  std::vector<double> out(xs.size());
  double acc = 0.0;
  for (std::size_t s = 0; s < xs.size(); ++s) {
    const long t = static_cast<long>(s) + 1;
    acc += oracle.global_cost(t, xs[s]) - oracle.global_cost(t, x_star);
    out[s] = acc;
  }
  return out;
}

std::vector<double> regret_individual(const LossOracle& oracle, const RowMatrix& history, int n,
                                      int i, const Vector& x_star) {
  if (n < 1 || history.rows() % n != 0)
    throw Error(ErrorKind::dimension, "regret_individual: history is not T x n rows");
  const long T = history.rows() / n;
  std::vector<double> out(static_cast<std::size_t>(T));
  double acc = 0.0;
  for (long t = 1; t <= T; ++t) {
    acc += oracle.global_cost(t, history.row((t - 1) * n + i).transpose()) -
           oracle.global_cost(t, x_star);
    out[t - 1] = acc;
  }
  return out;
}

JensenCheck::JensenCheck(int d) : mean_(Vector::Zero(d)), second_(RowMatrix::Zero(d, d)) {}

double JensenCheck::push(const Eigen::Ref<const Vector>& x, const Eigen::Ref<const Vector>& x_tilde,
                         const RowMatrix& A, const Vector& b, double c) {
  ++count_;
  const double w = 1.0 / static_cast<double>(count_);
  mean_ += w * (x - mean_);
  second_ += w * (x * x.transpose() - second_);
  // (1/t) sum_s f(x_s) = tr(A S)/2 - b^T mean + c
  const double averaged = 0.5 * (A.cwiseProduct(second_)).sum() - b.dot(mean_) + c;
  const double at_average = 0.5 * x_tilde.dot(A * x_tilde) - b.dot(x_tilde) + c;
  return averaged - at_average;
}

namespace {

void check_sequence(std::span<const RowMatrix> matrices, const Vector& pi) {
  for (const auto& m : matrices)
    if (m.rows() != pi.size() || m.cols() != pi.size())
      throw Error(ErrorKind::dimension, "network_error_bound: matrix size differs from pi");
}

Vector bound_at(double L, std::span<const RowMatrix> matrices, const Vector& pi, long t,
                bool parallel) {
  const auto n = pi.size();
  Vector acc = Vector::Zero(n);
  if (t >= 2) {
    RowMatrix q = RowMatrix::Identity(n, n);
    RowMatrix scratch(n, n);
    for (long k = t - 2; k >= 0; --k) {
      if (parallel) {
        kernels::parallel::right_multiply(q, matrices[k + 1], scratch);
      } else {
        kernels::serial::right_multiply(q, matrices[k + 1], scratch);
      }
      q.swap(scratch);
      if (parallel) {
        kernels::parallel::accumulate_row_deviation(q, pi, acc);
      } else {
        kernels::serial::accumulate_row_deviation(q, pi, acc);
      }
    }
  }
  return (L * acc).array() + 2.0 * L;
}

}  // namespace

Vector network_error_bound(double L, std::span<const RowMatrix> matrices, const Vector& pi,
                           long t) {
  if (t < 0 || t > static_cast<long>(matrices.size()))
    throw Error(ErrorKind::parameter, "network_error_bound: t beyond the recorded matrices");
  check_sequence(matrices, pi);
  return bound_at(L, matrices, pi, t, true);
}

RowMatrix network_error_bounds(double L, std::span<const RowMatrix> matrices, const Vector& pi) {
  check_sequence(matrices, pi);
  const long T = static_cast<long>(matrices.size());
  RowMatrix out(T + 1, pi.size());
#pragma omp parallel for schedule(dynamic)
  for (long t = 0; t <= T; ++t) out.row(t) = bound_at(L, matrices, pi, t, false).transpose();
  return out;
}

ClosedFormGamma gamma_closed_form_bound(int n, int max_nbrs, int delta, int nu) {
  if (n < 1 || max_nbrs < 0 || delta < 1 || nu < 1)
    throw Error(ErrorKind::parameter, "gamma_closed_form_bound: inputs must be positive");
  const double denom = std::pow(static_cast<double>(max_nbrs) + 1.0,
                                static_cast<double>(delta) * static_cast<double>(nu));
  return {1.0 - static_cast<double>(n) / denom};
}

}  // namespace odopt
