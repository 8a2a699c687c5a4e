#include <doctest.h>

#include <cmath>
#include <random>

#include "odopt/error.hpp"
#include "odopt/rng.hpp"
#include "odopt/scenario.hpp"

using namespace odopt;

namespace {

SensorModel scalar_sensor(double h) {
  SensorModel s;
  s.H = RowMatrix::Constant(1, 1, h);
  return s;
}

Vector v1(double x) { return Vector::Constant(1, x); }

ScenarioParams defaults() {
  ScenarioParams p;
  p.validate();
  return p;
}

struct Moments {
  double mean = 0.0, var = 0.0;
};

Moments noise_moments(NoiseFamily f, long draws) {
  ScenarioParams p = defaults();
  p.noise = f;
  p.truncate = false;
  double s = 0.0, s2 = 0.0;
  for (long k = 0; k < draws; ++k) {
    const double b = sample_noise(p, splitmix64(static_cast<std::uint64_t>(k) + 77))[0];
    s += b;
    s2 += b * b;
  }
  Moments m;
  m.mean = s / draws;
  m.var = s2 / draws - m.mean * m.mean;
  return m;
}

}  // namespace

TEST_CASE("constants") {
  const auto p = defaults();
  CHECK(lipschitz_constant(p) == doctest::Approx(13.0 / 64).epsilon(1e-15));
  CHECK(prox_radius(p) == doctest::Approx(0.35355339059327373));
  ScenarioParams q = p;
  q.h_max = 0.0;
  CHECK(lipschitz_constant(q) == 0.0);
  q = p;
  q.b_max = 2 * p.b_max;
  CHECK(lipschitz_constant(q) - lipschitz_constant(p) == doctest::Approx(p.h_max * p.b_max));
  q = p;
  q.theta_max = 0.0;
  CHECK(prox_radius(q) == 0.0);
  for (double th : {0.0, 0.2, 0.5}) CHECK(0.5 * th * th <= prox_radius(p) * prox_radius(p) + 1e-15);
}

TEST_CASE("params validation") {
  ScenarioParams p;
  p.validate();
  CHECK(p.theta_true.size() == 1);
  CHECK(p.theta_true[0] == 0.25);
  ScenarioParams bad;
  bad.theta_true = v1(0.6);
  CHECK_THROWS_AS(bad.validate(), Error);
  ScenarioParams neg;
  neg.a_max = 0.0;
  CHECK_THROWS_AS(neg.validate(), Error);
  ScenarioParams dim;
  dim.d = 2;
  dim.theta_true = v1(0.1);
  CHECK_THROWS_AS(dim.validate(), Error);
  CHECK(parse_noise_family("normal") == NoiseFamily::gaussian);
  CHECK(parse_noise_family("laplace") == NoiseFamily::laplace);
  CHECK_THROWS_AS(parse_noise_family("cauchy"), Error);
}

TEST_CASE("local cost and subgradient examples") {
  const auto s1 = scalar_sensor(1.0);
  const auto s2 = scalar_sensor(2.0);
  CHECK(local_cost(s1, v1(1.0), v1(0.0)) == 0.5);
  CHECK(local_cost(s2, v1(3.0), v1(1.0)) == 0.5);
  CHECK(local_cost(s2, v1(2.0), v1(1.0)) == 0.0);
  CHECK(local_subgradient(s2, v1(3.0), v1(1.0))[0] == -2.0);
  CHECK(local_subgradient(s2, v1(2.0), v1(1.0))[0] == 0.0);
  CHECK_THROWS_AS(local_cost(s1, Vector::Zero(2), v1(0.0)), Error);
  CHECK_THROWS_AS(local_subgradient(s1, v1(0.0), Vector::Zero(2)), Error);
}

TEST_CASE("subgradient matches central differences") {
  ScenarioParams p = defaults();
  p.d = 3;
  p.theta_true = Vector();
  p.validate();
  const auto sensors = make_sensors(p, 5, 9);
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const double eps = 1e-5;
  for (const auto& s : sensors) {
    for (int trial = 0; trial < 20; ++trial) {
      Vector z(3), x(3);
      for (auto& v : z) v = u(rng);
      for (auto& v : x) v = u(rng);
      const Vector g = local_subgradient(s, z, x);
      for (int k = 0; k < 3; ++k) {
        Vector a = x, b = x;
        a[k] += eps;
        b[k] -= eps;
        CHECK(std::abs((local_cost(s, z, a) - local_cost(s, z, b)) / (2 * eps) - g[k]) <= 1e-6);
      }
    }
  }
}

TEST_CASE("local cost is midpoint convex") {
  ScenarioParams p = defaults();
  p.d = 2;
  p.theta_true = Vector();
  p.validate();
  const auto s = make_sensors(p, 1, 3)[0];
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int trial = 0; trial < 500; ++trial) {
    Vector z(2), a(2), b(2);
    for (auto* v : {&z, &a, &b})
      for (auto& c : *v) c = u(rng);
    CHECK(local_cost(s, z, (a + b) / 2) <= 0.5 * (local_cost(s, z, a) + local_cost(s, z, b)) + 1e-15);
  }
}

TEST_CASE("sensors respect the h_max bound and are reproducible") {
  ScenarioParams p = defaults();
  p.d = 3;
  p.theta_true = Vector();
  p.jammed = {0, 4};
  p.validate();
  const auto a = make_sensors(p, 10, 21);
  const auto b = make_sensors(p, 10, 21);
  for (int i = 0; i < 10; ++i) {
    CHECK(a[i].H.cwiseAbs().colwise().sum().maxCoeff() <= p.h_max);
    CHECK(a[i].H == b[i].H);
    CHECK(a[i].jammed == (i == 0 || i == 4));
  }
  p.jammed = {10};
  CHECK_THROWS_AS(make_sensors(p, 10, 1), Error);
}

TEST_CASE("observations") {
  ScenarioParams p = defaults();
  p.theta_true = v1(0.3);
  auto s = scalar_sensor(0.2);
  s.jammed = true;
  CHECK(observe(p, s, 1, 0, 5)[0] == doctest::Approx(0.31));
  CHECK(observe(p, s, 9, 3, 6)[0] == doctest::Approx(0.31));

  s.jammed = false;
  const double cap = p.a_max * p.theta_max + p.b_max;
  for (long t = 1; t <= 2000; ++t) CHECK(std::abs(observe(p, s, t, 2, 1)[0]) <= cap);
  CHECK(observe(p, s, 17, 2, 1) == observe(p, s, 17, 2, 1));
  CHECK(observe(p, s, 17, 2, 1) != observe(p, s, 17, 3, 1));

  ScenarioParams noiseless = p;
  noiseless.b_max = 0.0;
  for (long t = 1; t <= 100; ++t) {
    const double z = observe(noiseless, s, t, 0, 2)[0];
    CHECK(z >= 0.0);
    CHECK(z <= p.a_max * 0.3);
  }
}

TEST_CASE("truncated shifted families stay in range") {
  for (auto f : {NoiseFamily::gaussian, NoiseFamily::uniform, NoiseFamily::laplace}) {
    ScenarioParams p = defaults();
    p.noise = f;
    p.truncate = true;
    for (std::uint64_t k = 0; k < 5000; ++k) CHECK(std::abs(sample_noise(p, k)[0]) < p.b_max);
  }
}

TEST_CASE("noise moments over a million draws") {
  const long N = 1000000;
  const double b = 0.25;
  const auto in = noise_moments(NoiseFamily::interval, N);
  CHECK(std::abs(in.mean) <= 3 * std::sqrt(b * b / 3 / N));
  CHECK(std::abs(in.var - b * b / 3) <= 3 * (b * b / 3) * std::sqrt(0.8 / N));

  struct Case {
    NoiseFamily f;
    double kurtosis;
  };
  for (auto c : {Case{NoiseFamily::gaussian, 3.0}, Case{NoiseFamily::uniform, 1.8},
                 Case{NoiseFamily::laplace, 6.0}}) {
    CAPTURE(to_string(c.f));
    const auto m = noise_moments(c.f, N);
    CHECK(std::abs(m.mean + b) <= 3 * b / std::sqrt(double(N)));
    CHECK(std::abs(m.var - b * b) <= 3 * b * b * std::sqrt((c.kurtosis - 1) / N));
  }
}

TEST_CASE("recorded observations are independent of thread count") {
  ScenarioParams p = defaults();
  const auto sensors = make_sensors(p, 7, 2);
  const auto a = record_observations(p, sensors, 50, 11);
  CHECK(a.z.rows() == 350);
  for (long t = 1; t <= 50; ++t)
    for (int i = 0; i < 7; ++i) CHECK(a.at(t, i)[0] == observe(p, sensors[i], t, i, 11)[0]);
}

TEST_CASE("best fixed examples") {
  std::vector<SensorModel> ones{scalar_sensor(1.0), scalar_sensor(1.0)};
  ObservationTable obs;
  obs.n = 2;
  obs.T = 1;
  obs.z.resize(2, 1);
  obs.z << 0.1, 0.3;
  CHECK(best_fixed(obs, ones, 1, 0.5)[0] == doctest::Approx(0.2));

  obs.T = 3;
  obs.z = RowMatrix::Constant(6, 1, 0.4);
  CHECK(best_fixed(obs, ones, 3, 0.5)[0] == doctest::Approx(0.4));
  obs.z.setConstant(0.9);
  CHECK(best_fixed(obs, ones, 3, 0.5)[0] == 0.5);
  CHECK_THROWS_AS(best_fixed(obs, ones, 4, 0.5), Error);

  std::vector<SensorModel> zero{scalar_sensor(0.0), scalar_sensor(0.0)};
  try {
    best_fixed(obs, zero, 3, 0.5);
    FAIL("expected a rank error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::rank);
  }
}

TEST_CASE("best fixed is the grand mean with unit gains") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-0.4, 0.4);
  const int n = 6;
  const long T = 40;
  std::vector<SensorModel> ones(n, scalar_sensor(1.0));
  ObservationTable obs;
  obs.n = n;
  obs.T = T;
  obs.z.resize(n * T, 1);
  double s = 0.0;
  for (Eigen::Index r = 0; r < obs.z.rows(); ++r) {
    obs.z(r, 0) = u(rng);
    s += obs.z(r, 0);
  }
  CHECK(best_fixed(obs, ones, T, 0.5)[0] == doctest::Approx(s / (n * T)).epsilon(1e-14));
}

TEST_CASE("covariance hook weights sensors") {
  std::vector<SensorModel> ones{scalar_sensor(1.0), scalar_sensor(1.0)};
  ObservationTable obs;
  obs.n = 2;
  obs.T = 1;
  obs.z.resize(2, 1);
  obs.z << 0.0, 0.3;
  // second sensor counts three times as much
  std::vector<RowMatrix> s_inv{RowMatrix::Constant(1, 1, 1.0), RowMatrix::Constant(1, 1, 3.0)};
  CHECK(best_fixed(obs, ones, 1, 0.5, s_inv)[0] == doctest::Approx(0.225));
}

namespace {

// projected gradient on (1/T) sum_t f_t with step 1/lambda_max
Vector pg_minimizer(const EstimationOracle& oracle, long T, double theta_max) {
  const RowMatrix& A = oracle.quadratic();
  const auto d = A.rows();
  Vector bsum = Vector::Zero(d);
  for (long t = 1; t <= T; ++t) bsum += oracle.linear(t);
  bsum /= T;
  const double lmax = Eigen::SelfAdjointEigenSolver<RowMatrix>(A).eigenvalues().maxCoeff();
  const auto ball = FeasibleSet::ball(static_cast<int>(d), theta_max);
  Vector x = Vector::Zero(d);
  for (int it = 0; it < 200000; ++it) x = ball.clamp(x - (A * x - bsum) / lmax);
  return x;
}

}  // namespace

TEST_CASE("best fixed minimizes the cumulative cost in the scalar model") {
  ScenarioParams p = defaults();
  const int n = 8;
  const long T = 200;
  for (std::uint64_t seed : {41u, 42u, 43u}) {
    const auto sensors = make_sensors(p, n, seed);
    const auto obs = record_observations(p, sensors, T, seed + 100);
    EstimationOracle oracle(sensors, obs, lipschitz_constant(p));
    CHECK(std::abs(best_fixed(obs, sensors, T, p.theta_max)[0] - pg_minimizer(oracle, T, p.theta_max)[0]) <=
          1e-6);
  }
}

TEST_CASE("best fixed minimizes the cumulative cost when the optimum is interior") {
  ScenarioParams p = defaults();
  p.d = 2;
  p.h_max = 2.0;
  p.theta_true = Vector();
  p.validate();
  const int n = 8;
  const long T = 100;
  const auto sensors = make_sensors(p, n, 5);
  Vector theta0(2);
  theta0 << 0.2, -0.1;
  ObservationTable obs;
  obs.n = n;
  obs.T = T;
  obs.z.resize(n * T, 2);
  std::mt19937_64 rng(6);
  std::normal_distribution<double> nd(0.0, 0.01);
  for (long t = 1; t <= T; ++t)
    for (int i = 0; i < n; ++i) {
      Vector z = sensors[i].H * theta0;
      for (auto& v : z) v += nd(rng);
      obs.z.row((t - 1) * n + i) = z.transpose();
    }
  EstimationOracle oracle(sensors, obs, lipschitz_constant(p));
  const Vector theta = best_fixed(obs, sensors, T, p.theta_max);
  CHECK(theta.norm() < p.theta_max);
  CHECK((theta - pg_minimizer(oracle, T, p.theta_max)).norm() <= 1e-6);
}

TEST_CASE("outside the ball the estimate is the clamped least-squares solution") {
  ScenarioParams p = defaults();
  p.d = 2;
  p.theta_true = Vector();
  p.validate();
  const auto sensors = make_sensors(p, 8, 42);
  const auto obs = record_observations(p, sensors, 200, 43);
  const Vector wide = best_fixed(obs, sensors, 200, 1e9);
  CHECK(wide.norm() > p.theta_max);
  const Vector theta = best_fixed(obs, sensors, 200, p.theta_max);
  CHECK((theta - wide * (p.theta_max / wide.norm())).norm() <= 1e-12);
}

TEST_CASE("oracle global cost agrees with the average of local costs") {
  ScenarioParams p = defaults();
  p.d = 2;
  p.theta_true = Vector();
  p.validate();
  const auto sensors = make_sensors(p, 5, 1);
  const auto obs = record_observations(p, sensors, 20, 2);
  EstimationOracle oracle(sensors, obs, lipschitz_constant(p));
  Vector x(2);
  x << 0.1, -0.2;
  Vector g(2);
  for (long t = 1; t <= 20; ++t) {
    double s = 0.0;
    for (int i = 0; i < 5; ++i) {
      const double f = oracle.evaluate(t, i, x, g);
      CHECK(f == doctest::Approx(local_cost(sensors[i], obs.at(t, i).transpose(), x)));
      CHECK((g - local_subgradient(sensors[i], obs.at(t, i).transpose(), x)).norm() <= 1e-15);
      s += f;
    }
    CHECK(oracle.global_cost(t, x) == doctest::Approx(s / 5).epsilon(1e-12));
  }
}

TEST_CASE("gradient norms stay under L inside the ball") {
  ScenarioParams p = defaults();
  const auto sensors = make_sensors(p, 30, 8);
  const auto obs = record_observations(p, sensors, 100, 9);
  EstimationOracle oracle(sensors, obs, lipschitz_constant(p));
  Vector g(1);
  for (long t = 1; t <= 100; ++t)
    for (int i = 0; i < 30; ++i)
      for (double x : {-0.5, -0.1, 0.0, 0.3, 0.5}) {
        oracle.evaluate(t, i, v1(x), g);
        CHECK(g.norm() <= lipschitz_constant(p));
      }
}
