#include "odopt/dwda.hpp"

#include <cmath>
#include <string>

#include "odopt/error.hpp"
#include "odopt/kernels.hpp"
#include "odopt/stochastic.hpp"

namespace odopt {

FeasibleSet FeasibleSet::ball(int d, double radius) {
  if (d < 1) throw Error(ErrorKind::parameter, "feasible set: dimension must be >= 1");
  if (!(radius > 0.0) || !std::isfinite(radius))
    throw Error(ErrorKind::parameter, "feasible set: radius must be positive");
  FeasibleSet s;
  s.kind_ = Kind::ball;
  s.d_ = d;
  s.radius_ = radius;
  return s;
}

FeasibleSet FeasibleSet::box(Vector lo, Vector hi) {
  if (lo.size() < 1 || lo.size() != hi.size())
    throw Error(ErrorKind::parameter, "feasible set: box bounds must share a positive dimension");
  for (Eigen::Index k = 0; k < lo.size(); ++k)
    if (!(lo[k] < hi[k]) || lo[k] > 0.0 || hi[k] < 0.0)
      throw Error(ErrorKind::parameter, "feasible set: box must satisfy lo < hi and hold 0");
  FeasibleSet s;
  s.kind_ = Kind::box;
  s.d_ = static_cast<int>(lo.size());
  s.lo_ = std::move(lo);
  s.hi_ = std::move(hi);
  return s;
}

bool FeasibleSet::contains(const Eigen::Ref<const Vector>& x, double tol) const {
  if (x.size() != d_) return false;
  if (kind_ == Kind::ball) return x.norm() <= radius_ + tol;
  return ((x - lo_).array() >= -tol).all() && ((hi_ - x).array() >= -tol).all();
}

Vector FeasibleSet::clamp(const Eigen::Ref<const Vector>& x) const {
  if (x.size() != d_) throw Error(ErrorKind::dimension, "clamp: dimension mismatch");
  if (kind_ == Kind::box) return x.cwiseMax(lo_).cwiseMin(hi_);
  const double nrm = x.norm();
  if (nrm <= radius_) return x;
  return x * (radius_ / nrm);
}

Vector project(const Eigen::Ref<const Vector>& y, double alpha, const FeasibleSet& chi) {
  if (!(alpha > 0.0)) throw Error(ErrorKind::parameter, "project: alpha must be positive");
  if (y.size() != chi.dimension()) throw Error(ErrorKind::dimension, "project: dimension mismatch");
  if (chi.kind() == FeasibleSet::Kind::box) return (-alpha * y).cwiseMax(chi.lo()).cwiseMin(chi.hi());
  const double ny = y.norm();
  if (alpha * ny <= chi.radius()) return -alpha * y;
  return y * (-chi.radius() / ny);
}

double StepSchedule::alpha(long t) const {
  if (t < 1) throw Error(ErrorKind::parameter, "step schedule: t must be >= 1");
  return k / std::sqrt(static_cast<double>(t));
}

AgentStates AgentStates::initial(int n, int d) {
  if (n < 1 || d < 1) throw Error(ErrorKind::parameter, "agent states: need n >= 1 and d >= 1");
  AgentStates s;
  s.y = RowMatrix::Zero(n, d);
  s.x = RowMatrix::Zero(n, d);
  s.x_tilde = RowMatrix::Zero(n, d);
  return s;
}

void dwda_round(AgentStates& states, const RowMatrix& p, const LossOracle& oracle,
                const StepSchedule& sched, const FeasibleSet& chi, RoundRecord& record) {
  const int n = states.agents();
  const auto d = states.y.cols();
  if (p.rows() != n || p.cols() != n || oracle.agents() != n || oracle.dimension() != d ||
      chi.dimension() != d)
    throw Error(ErrorKind::dimension, "dwda_round: inconsistent sizes");
  const long t = states.t;
  const double alpha = sched.alpha(t);
  record.loss.resize(n);
  record.grad.resize(n, d);

  int bad = -1;
#pragma omp parallel for schedule(static)
  for (int i = 0; i < n; ++i) {
    const double f = oracle.evaluate(t, i, states.x.row(i).transpose(), record.grad.row(i).transpose());
    record.loss[i] = f;
    if (!std::isfinite(f) || !record.grad.row(i).allFinite()) {
#pragma omp critical(odopt_dwda_bad)
      if (bad < 0 || i < bad) bad = i;
    }
  }
  if (bad >= 0)
    throw RoundAbort("round " + std::to_string(t) + ": oracle returned a non-finite value for agent " +
                         std::to_string(bad + 1),
                     t, bad);

  RowMatrix next(n, d);
  kernels::parallel::mix_rows(p, states.y, record.grad, next);
  states.y.swap(next);

  const double td = static_cast<double>(t);
#pragma omp parallel for schedule(static)
  for (int i = 0; i < n; ++i) {
    states.x.row(i) = project(states.y.row(i).transpose(), alpha, chi).transpose();
    states.x_tilde.row(i) = (td * states.x_tilde.row(i) + states.x.row(i)) / (td + 1.0);
  }
  states.t = t + 1;
}

bool mixing_row_convention_check(const RowMatrix& p, const WeightedDigraph& pattern) {
  const int n = pattern.size();
  if (p.rows() != n || p.cols() != n) return false;
  if (!is_row_stochastic(p, kRowSumTolerance)) return false;
  for (int i = 0; i < n; ++i) {
    if (!(p(i, i) > 0.0)) return false;
    for (int j = 0; j < n; ++j)
      if (j != i && p(i, j) > 0.0 && !pattern.has_edge(j, i)) return false;
  }
  return true;
}

CentralPoint central_reference(const RowMatrix& y, const RowMatrix& g, const Vector& pi,
                               double alpha, const FeasibleSet& chi) {
  if (y.rows() != pi.size() || g.rows() != pi.size() || y.cols() != g.cols())
    throw Error(ErrorKind::dimension, "central_reference: size mismatch");
  CentralPoint c;
  c.y_bar = y.transpose() * pi;
  c.g_bar = g.transpose() * pi;
  c.phi = project(c.y_bar, alpha, chi);
  return c;
}

Vector deviation(const RowMatrix& y, const Vector& pi) {
  if (y.rows() != pi.size()) throw Error(ErrorKind::dimension, "deviation: size mismatch");
  const Vector y_bar = y.transpose() * pi;
  Vector out(y.rows());
  for (Eigen::Index i = 0; i < y.rows(); ++i) out[i] = (y.row(i).transpose() - y_bar).norm();
  return out;
}

}  // namespace odopt
