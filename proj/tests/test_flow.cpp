#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "winfree/error.hpp"
#include "winfree/flow.hpp"

using namespace winfree;

namespace {

const PeriodicFunction kP = ModelSpec::default_pulse();
const PeriodicFunction kR = ModelSpec::default_response();

ModelSpec model_with(std::vector<double> omega, double kappa, double gamma) {
  return default_model(Eigen::Map<Vector>(omega.data(), static_cast<Eigen::Index>(omega.size())), kappa, gamma);
}

const ParameterCertificate& cert() {
  static const ParameterCertificate c = std::get<ParameterCertificate>(certify_parameters(1e-5, 0.1, kP, kR));
  return c;
}

ModelSpec certified_model(std::size_t n, std::uint64_t seed) {
  return default_model(sample_frequencies(n, cert().gamma, seed), cert().kappa, cert().gamma);
}

template <class F>
ErrorKind thrown_kind(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "expected a winfree::Error";
  return ErrorKind::ConfigError;
}

}  // namespace

TEST(Integrate, FreeDriftIsExact) {
  const ModelSpec m = model_with({0.9, 1.0, 1.1}, 0.0, 0.1);
  const State x0{{0.1, -2.0, 3.0}};
  const Trajectory tr = integrate(m, x0, 10.0, 0.01);
  ASSERT_EQ(tr.size(), 1001u);
  for (std::size_t k = 0; k < tr.size(); k += 50) {
    const Vector expect = x0 + m.omega * tr.times[k];
    EXPECT_LT((tr.state(k) - expect).lpNorm<Eigen::Infinity>(), 1e-12);
  }
}

TEST(Integrate, SingleOscillatorStrictlyIncreasing) {
  const ModelSpec m = model_with({1.0}, 0.05, 0.0);
  const Trajectory tr = integrate(m, State{{0.0}}, 30.0, 1e-3, 10);
  const double floor = 1.0 - 0.05 * 3.0 * std::sqrt(3.0) / 4.0;
  for (std::size_t k = 1; k < tr.size(); ++k) {
    const double rate = (tr.phases(k, 0) - tr.phases(k - 1, 0)) / (tr.times[k] - tr.times[k - 1]);
    EXPECT_GE(rate, floor - 1e-9);
  }
}

TEST(Integrate, StepCountAndPartialStep) {
  EXPECT_EQ(step_count(1.0, 0.1), 10u);
  EXPECT_EQ(step_count(1.05, 0.1), 11u);
  const Trajectory tr = integrate(model_with({1.0}, 0.0, 0.0), State{{0.0}}, 1.05, 0.1, 4);
  EXPECT_DOUBLE_EQ(tr.times.back(), 1.05);
  EXPECT_NEAR(tr.final_state()[0], 1.05, 1e-14);
  // samples at steps 0, 4, 8 and the final one
  EXPECT_EQ(tr.size(), 4u);
  EXPECT_EQ(thrown_kind([] { step_count(1.0, 2.0); }), ErrorKind::PreconditionViolated);
  EXPECT_EQ(thrown_kind([] { step_count(1.0, 0.0); }), ErrorKind::PreconditionViolated);
}

TEST(Integrate, FourthOrderConvergence) {
  const ModelSpec m = model_with({0.97, 1.0, 1.03}, 0.3, 0.05);
  const State x0{{0.0, 1.0, 2.5}};
  const double T = 5.0;
  const State ref = integrate(m, x0, T, 1e-3).final_state();
  const double e1 = (integrate(m, x0, T, 0.1).final_state() - ref).lpNorm<Eigen::Infinity>();
  const double e2 = (integrate(m, x0, T, 0.05).final_state() - ref).lpNorm<Eigen::Infinity>();
  const double ratio = e1 / e2;
  EXPECT_GE(ratio, 12.0);
  EXPECT_LE(ratio, 20.0);
}

TEST(Integrate, SemigroupProperty) {
  const ModelSpec m = certified_model(5, 1);
  SplitMix64 rng(2);
  const State x0 = draw_state_in_set(cert(), 5, rng);
  const double dt = 1e-3;
  const State whole = integrate(m, x0, 5.0, dt).final_state();
  const State half = integrate(m, x0, 2.0, dt).final_state();
  const State rest = integrate(m, half, 3.0, dt).final_state();
  EXPECT_LT((whole - rest).lpNorm<Eigen::Infinity>(), 1e-9);
}

TEST(Integrate, TranslationEquivariance) {
  const ModelSpec m = model_with({0.98, 1.0, 1.02, 1.01}, 0.4, 0.05);
  const State x0{{0.3, 1.1, -0.7, 2.0}};
  const State a = integrate(m, x0, 20.0, 1e-2).final_state();
  const State b = integrate(m, (x0.array() + kTwoPi).matrix(), 20.0, 1e-2).final_state();
  EXPECT_LT(((b.array() - kTwoPi).matrix() - a).lpNorm<Eigen::Infinity>(), 1e-9);
}

TEST(Integrate, StreamingSeesEveryStep) {
  std::size_t calls = 0;
  double last_t = -1.0;
  integrate_streaming(model_with({1.0}, 0.1, 0.0), State{{0.0}}, 1.0, 0.01, [&](std::size_t step, double t, const State&) {
    EXPECT_EQ(step, calls);
    EXPECT_GT(t, last_t);
    last_t = t;
    ++calls;
  });
  EXPECT_EQ(calls, 101u);
}

TEST(Variational, FreeDriftIsIdentity) {
  auto [tr, fm] = integrate_variational(model_with({0.95, 1.05}, 0.0, 0.1), State{{0.0, 1.0}}, 2.0, 0.01, 10);
  ASSERT_EQ(fm.matrices.size(), tr.size());
  for (const Matrix& M : fm.matrices) EXPECT_EQ(M, Matrix::Identity(2, 2));
}

TEST(Variational, ScalarMatchesExponentialOfDiagonal) {
  const ModelSpec m = model_with({1.0}, 0.3, 0.0);
  auto [tr, fm] = integrate_variational(m, State{{0.2}}, 10.0, 1e-3, 1);
  // ∫ w₁₁ dt by the trapezoid rule on the logged trajectory.
  double integral = 0.0;
  for (std::size_t k = 1; k < tr.size(); ++k) {
    const double a = jacobian(m, tr.state(k - 1))(0, 0), b = jacobian(m, tr.state(k))(0, 0);
    integral += 0.5 * (tr.times[k] - tr.times[k - 1]) * (a + b);
  }
  EXPECT_NEAR(fm.matrices.back()(0, 0), std::exp(integral), 1e-6 * std::exp(integral));
}

TEST(Variational, FiniteDifferenceOracle) {
  for (std::size_t n : {2u, 5u, 10u}) {
    const ModelSpec m = certified_model(n, 10 + n);
    SplitMix64 rng(20 + n);
    const State x0 = draw_state_in_set(cert(), n, rng);
    const double T = 20.0, dt = 1e-3, eps = 1e-6;
    auto [tr, fm] = integrate_variational(m, x0, T, dt, 1000000);
    const State base = tr.final_state();
    const Matrix& M = fm.matrices.back();
    for (std::size_t j = 0; j < n; ++j) {
      State xp = x0;
      xp[static_cast<Eigen::Index>(j)] += eps;
      const Vector col = (integrate(m, xp, T, dt, 1000000).final_state() - base) / eps;
      const double rel = (col - M.col(static_cast<Eigen::Index>(j))).lpNorm<Eigen::Infinity>() /
                         M.col(static_cast<Eigen::Index>(j)).lpNorm<Eigen::Infinity>();
      EXPECT_LT(rel, 1e-5);
    }
  }
}

TEST(Variational, CocycleProperty) {
  const ModelSpec m = certified_model(4, 3);
  SplitMix64 rng(4);
  const State x0 = draw_state_in_set(cert(), 4, rng);
  const double dt = 1e-3;
  auto [tr1, fm1] = integrate_variational(m, x0, 3.0, dt, 1000000);
  auto [tr2, fm2] = integrate_variational(m, tr1.final_state(), 2.0, dt, 1000000);
  auto [tr, fm] = integrate_variational(m, x0, 5.0, dt, 1000000);
  const Matrix composed = fm2.matrices.back() * fm1.matrices.back();
  EXPECT_LT((composed - fm.matrices.back()).lpNorm<Eigen::Infinity>(), 1e-7);
}

TEST(Reparameterization, UnitDrift) {
  const ModelSpec m = model_with({1.0, 1.0}, 0.0, 0.0);
  const State x0{{0.2, 0.6}};
  const Trajectory tr = integrate(m, x0, 10.0, 0.01, 5);
  const Reparameterization rp = reparameterize(tr);
  for (std::size_t k = 0; k < tr.size(); ++k) EXPECT_NEAR(rp.s_grid()[k], tr.times[k] + 0.4, 1e-12);
  for (double s : {0.4, 1.234, 7.77, 10.39}) EXPECT_NEAR(rp.tau(s), s - 0.4, 1e-12);
  EXPECT_EQ(thrown_kind([&] { rp.tau(0.3); }), ErrorKind::OutOfDomain);
}

TEST(Reparameterization, RoundTripAndControlBound) {
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    const ModelSpec m = certified_model(5, seed);
    SplitMix64 rng(100 + seed);
    const State x0 = draw_state_in_set(cert(), 5, rng);
    const Trajectory tr = integrate(m, x0, 4 * kTwoPi, 1e-3, 20);
    const Reparameterization rp = reparameterize(tr);
    for (std::size_t k = 0; k < tr.size(); ++k) EXPECT_NEAR(rp.tau(rp.s_grid()[k]), tr.times[k], 1e-8);
    EXPECT_LE(rp.tau(rp.s_begin() + kTwoPi), kTwoPi / cert().margin);
  }
}

TEST(Reparameterization, NotMonotone) {
  // Past the lock the phase runs backwards near s = π/3.
  ModelSpec m = model_with({1.0}, 0.9, 0.0);
  const Trajectory tr = integrate(m, State{{std::numbers::pi / 3}}, 5.0, 1e-2);
  EXPECT_EQ(thrown_kind([&] { reparameterize(tr); }), ErrorKind::NotMonotone);
}

TEST(MeanDrift, FreeDriftWithinGamma) {
  const ModelSpec m = default_model(sample_frequencies(6, 0.05, 9), 0.0, 0.05);
  ParameterCertificate c = cert();
  c.gamma = 0.05;
  c.kappa = 0.0;
  const MeanDriftReport r = check_mean_drift_bound(integrate(m, State::Zero(6), 5.0, 0.01, 10), c);
  EXPECT_NEAR(r.max_deviation, std::abs(1.0 - m.omega.mean()), 1e-12);
  EXPECT_DOUBLE_EQ(r.bound, 0.05);
  EXPECT_TRUE(r.pass);
}

TEST(MeanDrift, CertifiedRunPasses) {
  const ModelSpec m = certified_model(10, 5);
  SplitMix64 rng(6);
  const State x0 = draw_state_in_set(cert(), 10, rng);
  const MeanDriftReport r = check_mean_drift_bound(integrate(m, x0, 10 * kTwoPi, 1e-3, 50), cert());
  EXPECT_TRUE(r.pass) << r.max_deviation << " vs " << r.bound;
}

TEST(SetInvariance, SingleOscillatorAlwaysPasses) {
  const ModelSpec m = certified_model(1, 7);
  const InvarianceReport r = check_set_invariance(m, cert(), State{{0.3}}, 10.0, 1e-3, 10);
  EXPECT_TRUE(r.pass);
  EXPECT_DOUBLE_EQ(r.max_spread, 0.0);
}

TEST(SetInvariance, CertifiedRunStaysInside) {
  const ModelSpec m = certified_model(10, 8);
  SplitMix64 rng(9);
  const State x0 = draw_state_in_set(cert(), 10, rng);
  const InvarianceReport r = check_set_invariance(m, cert(), x0, 100 * kTwoPi, 1e-3, 10);
  EXPECT_TRUE(r.pass);
  EXPECT_GT(r.min_slack, 0.0);
  EXPECT_EQ(r.sample_stride, 10u);
}

TEST(SetInvariance, RefusesStateOutsideSet) {
  const ModelSpec m = certified_model(2, 1);
  EXPECT_EQ(thrown_kind([&] { check_set_invariance(m, cert(), State{{0.0, 2.0}}, 1.0, 1e-3); }),
            ErrorKind::PreconditionViolated);
}
