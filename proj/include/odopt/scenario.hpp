#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "odopt/dwda.hpp"
#include "odopt/types.hpp"

namespace odopt {

/// Additive disturbance b_t. `interval` is uniform on (-b_max, b_max); the
/// other three have mean -b_max and standard deviation b_max.
enum class NoiseFamily { interval, gaussian, uniform, laplace };

std::string_view to_string(NoiseFamily f) noexcept;
NoiseFamily parse_noise_family(std::string_view name);

struct ScenarioParams {
  int d = 1;
  double theta_max = 0.5;
  double h_max = 0.25;
  double a_max = 1.0;
  double b_max = 0.25;
  /// Defaults to theta_max / 2 along the first axis when empty.
  Vector theta_true;
  NoiseFamily noise = NoiseFamily::interval;
  /// Reject draws outside (-b_max, b_max) for the shifted families.
  bool truncate = true;
  /// 0-based indices of jammed sensors.
  std::vector<int> jammed;

  /// Fills theta_true when empty and checks every invariant. Throws
  /// ErrorKind::parameter.
  void validate();
};

/// Observation matrix H_i (d x d, |H_i|_1 <= h_max) and jamming flag.
struct SensorModel {
  RowMatrix H;
  bool jammed = false;
};

/// H_i entries drawn i.i.d. U(0, h_max / d), so the induced 1-norm stays
/// below h_max. Jam flags follow params.jammed.
std::vector<SensorModel> make_sensors(const ScenarioParams& params, int n, std::uint64_t seed);

/// z_{t,i} = a_t theta + b_t, or H_i theta + b_max for a jammed sensor. The
/// draw depends only on (seed, t, i). Throws ErrorKind::generation when
/// truncation keeps rejecting.
Vector observe(const ScenarioParams& params, const SensorModel& sensor, long t, int i,
               std::uint64_t seed);

/// Draw of b from the configured family, componentwise.
Vector sample_noise(const ScenarioParams& params, std::uint64_t key);

/// 1/2 |z - H x|^2.
double local_cost(const SensorModel& sensor, const Eigen::Ref<const Vector>& z,
                  const Eigen::Ref<const Vector>& theta_hat);

/// -H^T (z - H x), the gradient of local_cost.
Vector local_subgradient(const SensorModel& sensor, const Eigen::Ref<const Vector>& z,
                         const Eigen::Ref<const Vector>& theta_hat);

/// (theta_max h_max / 2 + a_max theta_max + b_max) h_max.
double lipschitz_constant(const ScenarioParams& params);

/// theta_max / sqrt(2).
double prox_radius(const ScenarioParams& params);

/// 1/2 (a_max theta_max + b_max + h_max theta_max)^2: the largest local cost
/// an in-range observation can produce inside the ball.
double loss_ceiling(const ScenarioParams& params);

/// All observations of a run; row t * n + i holds z_{t+1,i}.
struct ObservationTable {
  int n = 0;
  long T = 0;
  RowMatrix z;

  auto at(long t, int i) const { return z.row((t - 1) * n + i); }
};

/// Generates z for t = 1..T in parallel over rounds.
ObservationTable record_observations(const ScenarioParams& params,
                                     std::span<const SensorModel> sensors, long T,
                                     std::uint64_t seed);

/// (1/T) sum_t (sum_i H_i^T S_i H_i)^{-1} sum_i H_i^T S_i z_{t,i} over the first
/// `T` rounds, projected onto the ball of radius theta_max. S_i defaults to
/// the identity. Throws ErrorKind::rank for a singular normal matrix.
Vector best_fixed(const ObservationTable& obs, std::span<const SensorModel> sensors, long T,
                  double theta_max, std::span<const RowMatrix> s_inv = {});

/// Least-squares losses over recorded observations. Global costs go through
/// precomputed sufficient statistics: f_t(x) = x^T A x / 2 - b_t^T x + c_t.
class EstimationOracle final : public LossOracle {
 public:
  EstimationOracle(std::vector<SensorModel> sensors, ObservationTable obs, double lipschitz);

  int agents() const override { return obs_.n; }
  int dimension() const override { return static_cast<int>(a_.rows()); }
  double evaluate(long t, int i, const Eigen::Ref<const Vector>& x,
                  Eigen::Ref<Vector> grad) const override;
  double global_cost(long t, const Eigen::Ref<const Vector>& x) const override;
  double lipschitz() const override { return lipschitz_; }

  long horizon() const noexcept { return obs_.T; }
  const ObservationTable& observations() const noexcept { return obs_; }
  const std::vector<SensorModel>& sensors() const noexcept { return sensors_; }

  /// A = (1/n) sum_i H_i^T H_i.
  const RowMatrix& quadratic() const noexcept { return a_; }
  /// b_t = (1/n) sum_i H_i^T z_{t,i}.
  Vector linear(long t) const { return b_.row(t - 1).transpose(); }
  /// c_t = (1/n) sum_i |z_{t,i}|^2 / 2.
  double constant(long t) const { return c_[t - 1]; }

 private:
  std::vector<SensorModel> sensors_;
  ObservationTable obs_;
  double lipschitz_;
  RowMatrix a_;
  RowMatrix b_;
  Vector c_;
};

}  // namespace odopt
