#pragma once

#include "odopt/graph.hpp"
#include "odopt/types.hpp"

namespace odopt {

/// Closed convex set containing the origin: a centered Euclidean ball or a
/// box.
class FeasibleSet {
 public:
  enum class Kind { ball, box };

  static FeasibleSet ball(int d, double radius);
  static FeasibleSet box(Vector lo, Vector hi);

  Kind kind() const noexcept { return kind_; }
  int dimension() const noexcept { return d_; }
  double radius() const noexcept { return radius_; }
  const Vector& lo() const noexcept { return lo_; }
  const Vector& hi() const noexcept { return hi_; }

  bool contains(const Eigen::Ref<const Vector>& x, double tol = 1e-12) const;
  /// Euclidean projection onto the set.
  Vector clamp(const Eigen::Ref<const Vector>& x) const;

 private:
  Kind kind_ = Kind::ball;
  int d_ = 0;
  double radius_ = 0.0;
  Vector lo_, hi_;
};

/// argmin_{x in chi} <y, x> + |x|^2 / (2 alpha). Throws ErrorKind::parameter
/// for alpha <= 0.
Vector project(const Eigen::Ref<const Vector>& y, double alpha, const FeasibleSet& chi);

/// alpha(t) = k / sqrt(t) for t >= 1.
struct StepSchedule {
  double k = 0.25;
  double alpha(long t) const;
};

/// Local costs f_{t,i} with subgradients, plus the network average f_t.
/// Implementations must be safe to query concurrently.
class LossOracle {
 public:
  virtual ~LossOracle() = default;

  virtual int agents() const = 0;
  virtual int dimension() const = 0;
  /// Returns f_{t,i}(x) and writes a subgradient into `grad`.
  virtual double evaluate(long t, int i, const Eigen::Ref<const Vector>& x,
                          Eigen::Ref<Vector> grad) const = 0;
  /// f_t(x) = (1/n) sum_i f_{t,i}(x).
  virtual double global_cost(long t, const Eigen::Ref<const Vector>& x) const = 0;
  /// Declared bound on subgradient norms inside the feasible set.
  virtual double lipschitz() const = 0;
};

/// Every agent's dual, primal and running-average primal, one agent per row.
/// `t` is the round about to be played; x holds x(t) and x_tilde the average
/// of x(1..t).
struct AgentStates {
  RowMatrix y;
  RowMatrix x;
  RowMatrix x_tilde;
  long t = 1;

  int agents() const noexcept { return static_cast<int>(y.rows()); }

  /// y = 0 and x = x_tilde = project(0) = 0.
  static AgentStates initial(int n, int d);
};

/// Output of one round: local losses and subgradients taken at x(t).
struct RoundRecord {
  Vector loss;
  RowMatrix grad;
};

/// One synchronous round: losses and subgradients at x(t), then
/// y(t+1) = P y(t) + g(t), x(t+1) = project(y(t+1), alpha(t)) and the running
/// average update. Throws RoundAbort when the oracle returns non-finite
/// values.
void dwda_round(AgentStates& states, const RowMatrix& p, const LossOracle& oracle,
                const StepSchedule& sched, const FeasibleSet& chi, RoundRecord& record);

/// True when p is row stochastic with a positive diagonal and row i only
/// draws on {N_i, i} of `pattern`.
bool mixing_row_convention_check(const RowMatrix& p, const WeightedDigraph& pattern);

/// Network-level averages weighted by pi.
struct CentralPoint {
  Vector y_bar;
  Vector g_bar;
  /// project(y_bar, alpha).
  Vector phi;
};

CentralPoint central_reference(const RowMatrix& y, const RowMatrix& g, const Vector& pi,
                               double alpha, const FeasibleSet& chi);

/// |y_bar - y_i|_2 per agent with y_bar = sum_i pi_i y_i.
Vector deviation(const RowMatrix& y, const Vector& pi);

}  // namespace odopt
