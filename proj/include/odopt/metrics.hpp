#pragma once

#include <span>
#include <vector>

#include "odopt/dwda.hpp"
#include "odopt/types.hpp"

namespace odopt {

/// Constants entering the regret bound.
struct BoundInputs {
  double R = 0.0;
  double L = 0.0;
  double k = 0.0;
  int n = 1;
  double gamma = 0.0;
  int nu = 1;
  int delta = 1;

  /// Throws ErrorKind::parameter on gamma outside [0, 1) or non-positive
  /// entries.
  void validate() const;
};

enum class BoundVariant {
  /// C sqrt(T), cumulative regret of x_i.
  cumulative,
  /// 2 C sqrt(T), cumulative regret of the running average.
  running_average,
  /// C / sqrt(T), the time-averaged convergence rate.
  time_averaged,
};

/// C = R^2/k + k L^2 (6n/(1-gamma) + 6 n delta nu + 1).
double regret_coefficient(const BoundInputs& b);
double regret_bound(const BoundInputs& b, long T, BoundVariant v = BoundVariant::cumulative);

/// Partial sums of f_t(x(t)) - f_t(x_star); xs[t-1] is the decision of round t.
std::vector<double> regret_series(const LossOracle& oracle, std::span<const Vector> xs,
                                  const Vector& x_star);

/// Regret of agent i from a stacked history (row (t-1) * n + i is x_i(t)).
/// Same partial sums as regret_series, used for both x and the running average.
std::vector<double> regret_individual(const LossOracle& oracle, const RowMatrix& history, int n,
                                      int i, const Vector& x_star);

/// Running-sum helper for f_t(x_tilde(t)) <= (1/t) sum_{s<=t} f_t(x(s)) on
/// quadratic costs f_t(x) = x^T A x / 2 - b^T x + c. Keeps the mean and second
/// moment of the decisions so each round costs O(d^2).
class JensenCheck {
 public:
  explicit JensenCheck(int d);

  /// Feeds x(t) and the recorded running average x_tilde(t); returns
  /// (1/t) sum_{s<=t} f_t(x(s)) - f_t(x_tilde(t)) for the round-t statistics.
  double push(const Eigen::Ref<const Vector>& x, const Eigen::Ref<const Vector>& x_tilde,
              const RowMatrix& A, const Vector& b, double c);

  const Vector& mean() const noexcept { return mean_; }

 private:
  long count_ = 0;
  Vector mean_;
  RowMatrix second_;
};

/// Right-hand side of the network-effect bound for y(t) after t rounds:
/// L sum_{k=0}^{t-2} sum_j |P^(t-1,k+1)_ij - pi_j| + 2L, per agent. matrices[s]
/// is the P applied in round s + 1, so P^(a,b) = matrices[a] ... matrices[b].
Vector network_error_bound(double L, std::span<const RowMatrix> matrices, const Vector& pi,
                           long t);

/// network_error_bound for every t in 0..T; row t is the bound after t rounds.
RowMatrix network_error_bounds(double L, std::span<const RowMatrix> matrices, const Vector& pi);

/// 1 - n / (max_nbrs + 1)^(delta nu). Only meaningful when positive.
struct ClosedFormGamma {
  double value = 0.0;
  bool vacuous() const noexcept { return !(value > 0.0 && value < 1.0); }
};
ClosedFormGamma gamma_closed_form_bound(int n, int max_nbrs, int delta, int nu);

}  // namespace odopt
