#include "odopt/scenario.hpp"

#include <cmath>
#include <random>
#include <string>

#include "odopt/error.hpp"
#include "odopt/rng.hpp"

namespace odopt {

namespace {

constexpr int kTruncationRetries = 1000;

// per-component scale so that |b|_2 <= b_max holds in any dimension
double component_scale(const ScenarioParams& p) { return p.b_max / std::sqrt(double(p.d)); }

double draw_component(const ScenarioParams& p, CounterRng& rng) {
  const double b = component_scale(p);
  switch (p.noise) {
    case NoiseFamily::interval:
      return std::uniform_real_distribution<double>(-b, b)(rng);
    case NoiseFamily::gaussian:
      return std::normal_distribution<double>(-b, b)(rng);
    case NoiseFamily::uniform: {
      const double half = b * std::sqrt(3.0);
      return std::uniform_real_distribution<double>(-b - half, -b + half)(rng);
    }
    case NoiseFamily::laplace: {
      // difference of two exponentials with scale s is Laplace(0, s); var = 2 s^2
      std::exponential_distribution<double> e(std::sqrt(2.0) / b);
      const double u = e(rng);
      return -b + u - e(rng);
    }
  }
  return 0.0;
}

}  // namespace

std::string_view to_string(NoiseFamily f) noexcept {
  switch (f) {
    case NoiseFamily::interval: return "interval";
    case NoiseFamily::gaussian: return "gaussian";
    case NoiseFamily::uniform: return "uniform";
    case NoiseFamily::laplace: return "laplace";
  }
  return "?";
}

NoiseFamily parse_noise_family(std::string_view name) {
  for (auto f : {NoiseFamily::interval, NoiseFamily::gaussian, NoiseFamily::uniform,
                 NoiseFamily::laplace})
    if (name == to_string(f)) return f;
  if (name == "normal") return NoiseFamily::gaussian;
  throw Error(ErrorKind::config, "unknown noise family '" + std::string(name) + "'");
}

void ScenarioParams::validate() {
  if (d < 1) throw Error(ErrorKind::parameter, "scenario: d must be >= 1");
  if (!(theta_max > 0.0) || !(h_max >= 0.0) || !(a_max > 0.0) || !(b_max >= 0.0))
    throw Error(ErrorKind::parameter,
                "scenario: theta_max, a_max must be positive and h_max, b_max nonnegative");
  if (theta_true.size() == 0) {
    theta_true = Vector::Zero(d);
    theta_true[0] = theta_max / 2.0;
  }
  if (theta_true.size() != d)
    throw Error(ErrorKind::parameter, "scenario: theta_true has the wrong dimension");
  if (theta_true.stableNorm() > theta_max)
    throw Error(ErrorKind::parameter, "scenario: theta_true lies outside the ball");
}

std::vector<SensorModel> make_sensors(const ScenarioParams& params, int n, std::uint64_t seed) {
  if (n < 1) throw Error(ErrorKind::parameter, "make_sensors: need n >= 1");
  std::vector<SensorModel> out(static_cast<std::size_t>(n));
  const double hi = params.h_max / params.d;
  for (int i = 0; i < n; ++i) {
    CounterRng rng(derive_seed(seed, Stream::sensors, static_cast<std::uint64_t>(i)));
    std::uniform_real_distribution<double> u(0.0, hi);
    out[i].H.resize(params.d, params.d);
    for (int r = 0; r < params.d; ++r)
      for (int c = 0; c < params.d; ++c) out[i].H(r, c) = u(rng);
  }
  for (int j : params.jammed) {
    if (j < 0 || j >= n) throw Error(ErrorKind::parameter, "make_sensors: jammed index out of range");
    out[j].jammed = true;
  }
  return out;
}

Vector sample_noise(const ScenarioParams& params, std::uint64_t key) {
  CounterRng rng(key);
  const double lim = component_scale(params);
  const bool clip = params.truncate && params.noise != NoiseFamily::interval;
  Vector b(params.d);
  for (int c = 0; c < params.d; ++c) {
    int tries = 0;
    double v = draw_component(params, rng);
    while (clip && !(v > -lim && v < lim)) {
      if (++tries >= kTruncationRetries)
        throw Error(ErrorKind::generation, "noise truncation kept rejecting draws");
      v = draw_component(params, rng);
    }
    b[c] = v;
  }
  return b;
}

Vector observe(const ScenarioParams& params, const SensorModel& sensor, long t, int i,
               std::uint64_t seed) {
  if (sensor.jammed)
    return sensor.H * params.theta_true + Vector::Constant(params.d, component_scale(params));
  const auto key = derive_seed(seed, Stream::observations, static_cast<std::uint64_t>(t),
                               static_cast<std::uint64_t>(i));
  CounterRng rng(key);
  const double a = std::uniform_real_distribution<double>(0.0, params.a_max)(rng);
  return a * params.theta_true + sample_noise(params, splitmix64(key ^ 0xB0B0B0B0ULL));
}

double local_cost(const SensorModel& sensor, const Eigen::Ref<const Vector>& z,
                  const Eigen::Ref<const Vector>& theta_hat) {
  if (z.size() != sensor.H.rows() || theta_hat.size() != sensor.H.cols())
    throw Error(ErrorKind::dimension, "local_cost: dimension mismatch");
  return 0.5 * (z - sensor.H * theta_hat).squaredNorm();
}

Vector local_subgradient(const SensorModel& sensor, const Eigen::Ref<const Vector>& z,
                         const Eigen::Ref<const Vector>& theta_hat) {
  if (z.size() != sensor.H.rows() || theta_hat.size() != sensor.H.cols())
    throw Error(ErrorKind::dimension, "local_subgradient: dimension mismatch");
  return -(sensor.H.transpose() * (z - sensor.H * theta_hat));
}

double lipschitz_constant(const ScenarioParams& p) {
  return (0.5 * p.theta_max * p.h_max + p.a_max * p.theta_max + p.b_max) * p.h_max;
}

double prox_radius(const ScenarioParams& p) { return p.theta_max / std::sqrt(2.0); }

double loss_ceiling(const ScenarioParams& p) {
  const double s = p.a_max * p.theta_max + p.b_max + p.h_max * p.theta_max;
  return 0.5 * s * s;
}

ObservationTable record_observations(const ScenarioParams& params,
                                     std::span<const SensorModel> sensors, long T,
                                     std::uint64_t seed) {
  if (T < 1) throw Error(ErrorKind::parameter, "record_observations: need T >= 1");
  ObservationTable obs;
  obs.n = static_cast<int>(sensors.size());
  obs.T = T;
  obs.z.resize(T * obs.n, params.d);
  bool failed = false;
#pragma omp parallel for schedule(static)
  for (long t = 1; t <= T; ++t) {
    try {
      for (int i = 0; i < obs.n; ++i)
        obs.z.row((t - 1) * obs.n + i) = observe(params, sensors[i], t, i, seed).transpose();
    } catch (const Error&) {
#pragma omp atomic write
      failed = true;
    }
  }
  if (failed) throw Error(ErrorKind::generation, "noise truncation kept rejecting draws");
  return obs;
}

Vector best_fixed(const ObservationTable& obs, std::span<const SensorModel> sensors, long T,
                  double theta_max, std::span<const RowMatrix> s_inv) {
  if (T < 1 || T > obs.T) throw Error(ErrorKind::parameter, "best_fixed: horizon out of range");
  if (static_cast<int>(sensors.size()) != obs.n)
    throw Error(ErrorKind::dimension, "best_fixed: sensor count differs from observations");
  if (!s_inv.empty() && s_inv.size() != sensors.size())
    throw Error(ErrorKind::dimension, "best_fixed: need one covariance per sensor");
  const auto d = obs.z.cols();
  RowMatrix normal = RowMatrix::Zero(d, d);
  std::vector<RowMatrix> gain(sensors.size());
  for (std::size_t i = 0; i < sensors.size(); ++i) {
    const RowMatrix& H = sensors[i].H;
    gain[i] = s_inv.empty() ? RowMatrix(H.transpose()) : RowMatrix(H.transpose() * s_inv[i]);
    normal += gain[i] * H;
  }
  Eigen::FullPivLU<RowMatrix> lu(normal);
  if (lu.rank() < d) throw Error(ErrorKind::rank, "best_fixed: normal matrix is singular");
  // the normal matrix does not depend on t, so the time average moves inside
  Vector rhs = Vector::Zero(d);
  for (long t = 1; t <= T; ++t)
    for (int i = 0; i < obs.n; ++i) rhs += gain[i] * obs.at(t, i).transpose();
  Vector theta = lu.solve(rhs / static_cast<double>(T));
  return FeasibleSet::ball(static_cast<int>(d), theta_max).clamp(theta);
}

EstimationOracle::EstimationOracle(std::vector<SensorModel> sensors, ObservationTable obs,
                                   double lipschitz)
    : sensors_(std::move(sensors)), obs_(std::move(obs)), lipschitz_(lipschitz) {
  if (static_cast<int>(sensors_.size()) != obs_.n || obs_.n < 1)
    throw Error(ErrorKind::dimension, "EstimationOracle: sensor count differs from observations");
  const auto d = obs_.z.cols();
  const double inv_n = 1.0 / obs_.n;
  a_ = RowMatrix::Zero(d, d);
  for (const auto& s : sensors_) a_ += s.H.transpose() * s.H;
  a_ *= inv_n;
  b_ = RowMatrix::Zero(obs_.T, d);
  c_ = Vector::Zero(obs_.T);
  for (long t = 1; t <= obs_.T; ++t) {
    for (int i = 0; i < obs_.n; ++i) {
      const auto z = obs_.at(t, i);
      b_.row(t - 1) += z * sensors_[i].H;
      c_[t - 1] += 0.5 * z.squaredNorm();
    }
    b_.row(t - 1) *= inv_n;
    c_[t - 1] *= inv_n;
  }
}

double EstimationOracle::evaluate(long t, int i, const Eigen::Ref<const Vector>& x,
                                  Eigen::Ref<Vector> grad) const {
  const RowMatrix& H = sensors_[i].H;
  const Vector r = obs_.at(t, i).transpose() - H * x;
  grad = -(H.transpose() * r);
  return 0.5 * r.squaredNorm();
}

double EstimationOracle::global_cost(long t, const Eigen::Ref<const Vector>& x) const {
  return 0.5 * x.dot(a_ * x) - b_.row(t - 1).dot(x) + c_[t - 1];
}

}  // namespace odopt
