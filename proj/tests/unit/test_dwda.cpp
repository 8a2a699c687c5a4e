#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

#include "odopt/dwda.hpp"
#include "odopt/error.hpp"
#include "odopt/stochastic.hpp"

using namespace odopt;

namespace {

// f_{t,i}(x) = 0.5 |x - c_i|^2 with targets that depend on (t, i)
class Quadratic final : public LossOracle {
 public:
  Quadratic(int n, int d, unsigned seed) : c_(n, d) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int i = 0; i < n; ++i)
      for (int k = 0; k < d; ++k) c_(i, k) = u(rng);
  }
  int agents() const override { return static_cast<int>(c_.rows()); }
  int dimension() const override { return static_cast<int>(c_.cols()); }
  double evaluate(long t, int i, const Eigen::Ref<const Vector>& x,
                  Eigen::Ref<Vector> grad) const override {
    const Vector c = c_.row(i).transpose() * (1.0 + 0.1 * std::sin(static_cast<double>(t)));
    grad = x - c;
    return 0.5 * grad.squaredNorm();
  }
  double global_cost(long t, const Eigen::Ref<const Vector>& x) const override {
    Vector g(x.size());
    double s = 0.0;
    for (int i = 0; i < agents(); ++i) s += evaluate(t, i, x, g);
    return s / agents();
  }
  double lipschitz() const override { return 10.0; }
  RowMatrix c_;
};

class Broken final : public LossOracle {
 public:
  int agents() const override { return 3; }
  int dimension() const override { return 1; }
  double evaluate(long, int i, const Eigen::Ref<const Vector>&, Eigen::Ref<Vector> grad) const override {
    grad.setZero();
    return i == 1 ? std::numeric_limits<double>::quiet_NaN() : 0.0;
  }
  double global_cost(long, const Eigen::Ref<const Vector>&) const override { return 0.0; }
  double lipschitz() const override { return 1.0; }
};

// projected gradient on the strongly convex objective <y,x> + |x|^2/(2 alpha)
Vector numeric_argmin(const Vector& y, double alpha, const FeasibleSet& chi) {
  Vector x = Vector::Zero(y.size());
  const double step = alpha;
  for (int it = 0; it < 20000; ++it) x = chi.clamp(x - step * (y + x / alpha) * 0.5);
  return x;
}

RowMatrix random_stochastic_full(int n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.05, 1.0);
  RowMatrix p(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) p(i, j) = u(rng);
    p.row(i) /= p.row(i).sum();
  }
  return p;
}

}  // namespace

TEST_CASE("projection examples") {
  const auto b = FeasibleSet::ball(1, 1.0);
  CHECK(project(Vector::Constant(1, 2.0), 0.25, b)[0] == doctest::Approx(-0.5));
  CHECK(project(Vector::Constant(1, 10.0), 0.25, b)[0] == doctest::Approx(-1.0));
  CHECK(project(Vector::Constant(1, 0.0), 0.25, b)[0] == 0.0);
  const auto b2 = FeasibleSet::ball(2, 1.0);
  Vector y(2);
  y << 3.0, 4.0;
  const Vector x = project(y, 1.0, b2);
  CHECK(x[0] == doctest::Approx(-0.6));
  CHECK(x[1] == doctest::Approx(-0.8));
  CHECK_THROWS_AS(project(y, 0.0, b2), Error);
  CHECK_THROWS_AS(project(y, -1.0, b2), Error);

  Vector lo(2), hi(2);
  lo << -1.0, -0.5;
  hi << 1.0, 2.0;
  const auto box = FeasibleSet::box(lo, hi);
  const Vector xb = project(y, 1.0, box);
  CHECK(xb[0] == -1.0);
  CHECK(xb[1] == -0.5);
}

TEST_CASE("projection matches a numerical minimizer") {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> nd(0.0, 3.0);
  std::uniform_real_distribution<double> ua(0.05, 2.0);
  for (int trial = 0; trial < 40; ++trial) {
    const int d = 1 + trial % 4;
    Vector y(d);
    for (auto& v : y) v = nd(rng);
    const double alpha = ua(rng);
    const auto ball = FeasibleSet::ball(d, 0.5 + trial % 3);
    CHECK((project(y, alpha, ball) - numeric_argmin(y, alpha, ball)).norm() <= 1e-8);
    Vector lo = -Vector::Constant(d, 0.7), hi = Vector::Constant(d, 1.3);
    const auto box = FeasibleSet::box(lo, hi);
    CHECK((project(y, alpha, box) - numeric_argmin(y, alpha, box)).norm() <= 1e-8);
  }
}

TEST_CASE("projection is alpha-Lipschitz in y") {
  std::mt19937_64 rng(6);
  std::normal_distribution<double> nd(0.0, 2.0);
  const auto ball = FeasibleSet::ball(3, 1.0);
  for (int trial = 0; trial < 500; ++trial) {
    Vector a(3), b(3);
    for (auto& v : a) v = nd(rng);
    for (auto& v : b) v = nd(rng);
    const double alpha = 0.1 + 0.01 * trial;
    CHECK((project(a, alpha, ball) - project(b, alpha, ball)).norm() <=
          alpha * (a - b).norm() + 1e-12);
  }
}

TEST_CASE("step schedule") {
  const StepSchedule s{0.25};
  CHECK(s.alpha(1) == 0.25);
  CHECK(s.alpha(4) == 0.125);
  CHECK(s.alpha(100) == doctest::Approx(0.025));
  CHECK_THROWS_AS(s.alpha(0), Error);
}

TEST_CASE("single agent hand computation") {
  // f_t(x) = 0.5 |x - c|^2 with c = 1 in 1d, ball radius 1, k = 1
  class Fixed final : public LossOracle {
   public:
    int agents() const override { return 1; }
    int dimension() const override { return 1; }
    double evaluate(long, int, const Eigen::Ref<const Vector>& x, Eigen::Ref<Vector> g) const override {
      g[0] = x[0] - 1.0;
      return 0.5 * g[0] * g[0];
    }
    double global_cost(long, const Eigen::Ref<const Vector>& x) const override {
      return 0.5 * (x[0] - 1.0) * (x[0] - 1.0);
    }
    double lipschitz() const override { return 2.0; }
  } oracle;
  auto st = AgentStates::initial(1, 1);
  const RowMatrix p = RowMatrix::Ones(1, 1);
  const StepSchedule sched{1.0};
  const auto chi = FeasibleSet::ball(1, 1.0);
  RoundRecord rec;

  dwda_round(st, p, oracle, sched, chi, rec);  // g = -1, y = -1, x = 1
  CHECK(rec.loss[0] == 0.5);
  CHECK(st.y(0, 0) == -1.0);
  CHECK(st.x(0, 0) == 1.0);
  CHECK(st.x_tilde(0, 0) == 0.5);
  CHECK(st.t == 2);

  dwda_round(st, p, oracle, sched, chi, rec);  // g = 0, y = -1, x = 1/sqrt(2)
  CHECK(rec.loss[0] == 0.0);
  CHECK(st.y(0, 0) == -1.0);
  CHECK(st.x(0, 0) == doctest::Approx(1.0 / std::sqrt(2.0)));
  CHECK(st.x_tilde(0, 0) == doctest::Approx((1.0 + 1.0 / std::sqrt(2.0)) / 3.0));
}

TEST_CASE("round matches a direct reimplementation") {
  const int n = 6, d = 3;
  std::mt19937_64 rng(8);
  Quadratic q(n, d, 2);
  const StepSchedule sched{0.4};
  const auto chi = FeasibleSet::ball(d, 0.8);
  auto st = AgentStates::initial(n, d);
  RowMatrix y = RowMatrix::Zero(n, d), x = y, xt = y;
  RoundRecord rec;
  for (long t = 1; t <= 40; ++t) {
    const RowMatrix p = random_stochastic_full(n, rng);
    RowMatrix g(n, d);
    for (int i = 0; i < n; ++i) {
      Vector gi(d);
      q.evaluate(t, i, x.row(i).transpose(), gi);
      g.row(i) = gi.transpose();
    }
    RowMatrix ny = RowMatrix::Zero(n, d);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) ny.row(i) += p(i, j) * y.row(j);
      ny.row(i) += g.row(i);
    }
    y = ny;
    const double a = 0.4 / std::sqrt(static_cast<double>(t));
    for (int i = 0; i < n; ++i) {
      x.row(i) = project(y.row(i).transpose(), a, chi).transpose();
      xt.row(i) = (static_cast<double>(t) * xt.row(i) + x.row(i)) / (t + 1.0);
    }
    dwda_round(st, p, q, sched, chi, rec);
    CHECK((st.y - y).cwiseAbs().maxCoeff() <= 1e-12);
    CHECK((st.x - x).cwiseAbs().maxCoeff() <= 1e-12);
    CHECK((st.x_tilde - xt).cwiseAbs().maxCoeff() <= 1e-12);
    CHECK((rec.grad - g).cwiseAbs().maxCoeff() <= 1e-12);
  }
}

TEST_CASE("weighted average follows y_bar(t+1) = y_bar(t) + g_bar(t) under a fixed P") {
  const int n = 5, d = 2;
  std::mt19937_64 rng(11);
  const RowMatrix p = random_stochastic_full(n, rng);
  const Vector pi = stationary_vector(p).pi;
  Quadratic q(n, d, 4);
  const StepSchedule sched{0.3};
  const auto chi = FeasibleSet::ball(d, 1.0);
  auto st = AgentStates::initial(n, d);
  RoundRecord rec;
  for (int t = 1; t <= 50; ++t) {
    const Vector before = st.y.transpose() * pi;
    dwda_round(st, p, q, sched, chi, rec);
    const auto c = central_reference(st.y, rec.grad, pi, sched.alpha(t), chi);
    CHECK((c.y_bar - (before + Vector(rec.grad.transpose() * pi))).norm() <= 1e-10);
  }
}

TEST_CASE("relabelling agents permutes the trajectory") {
  const int n = 5, d = 2;
  std::mt19937_64 rng(12);
  const RowMatrix p = random_stochastic_full(n, rng);
  Quadratic q(n, d, 9);
  std::vector<int> perm{3, 0, 4, 1, 2};
  Quadratic qp = q;
  for (int i = 0; i < n; ++i) qp.c_.row(i) = q.c_.row(perm[i]);
  RowMatrix pp(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) pp(i, j) = p(perm[i], perm[j]);
  const StepSchedule sched{0.3};
  const auto chi = FeasibleSet::ball(d, 1.0);
  auto a = AgentStates::initial(n, d), b = AgentStates::initial(n, d);
  RoundRecord ra, rb;
  for (int t = 0; t < 30; ++t) {
    dwda_round(a, p, q, sched, chi, ra);
    dwda_round(b, pp, qp, sched, chi, rb);
  }
  for (int i = 0; i < n; ++i) CHECK((b.x.row(i) - a.x.row(perm[i])).norm() <= 1e-12);
}

TEST_CASE("identical agents stay in agreement") {
  const int n = 4, d = 2;
  std::mt19937_64 rng(13);
  Quadratic q(n, d, 1);
  for (int i = 1; i < n; ++i) q.c_.row(i) = q.c_.row(0);
  const StepSchedule sched{0.3};
  const auto chi = FeasibleSet::ball(d, 1.0);
  auto st = AgentStates::initial(n, d);
  RoundRecord rec;
  for (int t = 0; t < 25; ++t) {
    dwda_round(st, random_stochastic_full(n, rng), q, sched, chi, rec);
    const Vector pi = Vector::Constant(n, 1.0 / n);
    CHECK(deviation(st.y, pi).maxCoeff() <= 1e-12);
  }
}

TEST_CASE("non-finite oracle output aborts the round") {
  Broken b;
  auto st = AgentStates::initial(3, 1);
  RoundRecord rec;
  try {
    dwda_round(st, RowMatrix::Constant(3, 3, 1.0 / 3), b, StepSchedule{0.25}, FeasibleSet::ball(1, 1.0),
               rec);
    FAIL("expected a round abort");
  } catch (const RoundAbort& e) {
    CHECK(e.round() == 1);
    CHECK(e.agent() == 1);
  }
  CHECK(st.t == 1);
}

TEST_CASE("row convention check") {
  GraphFamilySpec spec;
  spec.family = GraphFamily::path;
  spec.n = 3;
  const auto g = generate(spec);
  RowMatrix p(3, 3);
  p << 0.5, 0.5, 0, 1.0 / 3, 1.0 / 3, 1.0 / 3, 0, 0.5, 0.5;
  CHECK(mixing_row_convention_check(p, g));
  RowMatrix far = p;
  far(0, 1) = 0.25;
  far(0, 2) = 0.25;
  CHECK_FALSE(mixing_row_convention_check(far, g));
  RowMatrix nodiag = p;
  nodiag(0, 0) = 0.0;
  nodiag(0, 1) = 1.0;
  CHECK_FALSE(mixing_row_convention_check(nodiag, g));
  CHECK_FALSE(mixing_row_convention_check(p.transpose(), g));
}

TEST_CASE("deviation") {
  RowMatrix y(3, 1);
  y << 0.0, 3.0, 6.0;
  const Vector dv = deviation(y, Vector::Constant(3, 1.0 / 3));
  CHECK(dv[0] == doctest::Approx(3.0));
  CHECK(dv[1] == doctest::Approx(0.0));
  CHECK(dv[2] == doctest::Approx(3.0));
}
