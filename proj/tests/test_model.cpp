#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "winfree/error.hpp"
#include "winfree/model.hpp"
#include "winfree/random.hpp"

using namespace winfree;

namespace {

constexpr double kPi = std::numbers::pi;

ModelSpec model_with(std::vector<double> omega, double kappa, double gamma = 0.0) {
  return default_model(Eigen::Map<Vector>(omega.data(), static_cast<Eigen::Index>(omega.size())), kappa, gamma);
}

State random_state(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> u(-10.0, 10.0);
  State x(static_cast<Eigen::Index>(n));
  for (auto& v : x) v = u(rng);
  return x;
}

}  // namespace

TEST(MeanField, Examples) {
  EXPECT_NEAR(mean_field(model_with({1, 1}, 0.1), State{{0.0, kPi}}), 1.0, 1e-15);
  ModelSpec single = model_with({1}, 0.1);
  for (double s : {0.3, 2.0, -4.0}) EXPECT_NEAR(mean_field(single, State{{s}}), 1.0 + std::cos(s), 1e-15);
  ModelSpec flat = model_with({1, 1, 1}, 0.1);
  flat.pulse = TrigPoly{{1.0}, {}};
  EXPECT_DOUBLE_EQ(mean_field(flat, State{{0.2, 1.5, 9.0}}), 1.0);
}

TEST(VectorField, Examples) {
  const ModelSpec free = model_with({0.9, 1.05, 1.1}, 0.0, 0.1);
  const Vector f = vector_field(free, State{{0.1, 2.0, 5.0}});
  EXPECT_EQ(f, free.omega);
  EXPECT_NEAR(vector_field(model_with({1}, 0.5), State{{0.0}})[0], 1.0, 1e-15);
  EXPECT_NEAR(vector_field(model_with({1}, 0.5), State{{kPi / 2}})[0], 0.5, 1e-15);
}

TEST(VectorField, ShiftEquivariant) {
  std::mt19937_64 rng(21);
  for (std::size_t n : {1u, 3u, 8u}) {
    const ModelSpec m = model_with(std::vector<double>(n, 1.0), 0.3);
    const State x = random_state(rng, n);
    const Vector a = vector_field(m, x);
    const Vector b = vector_field(m, (x.array() + kTwoPi).matrix());
    EXPECT_LT((a - b).lpNorm<Eigen::Infinity>(), 1e-12);
  }
}

TEST(Jacobian, Examples) {
  const Matrix J1 = jacobian(model_with({1}, 0.5), State{{0.0}});
  EXPECT_NEAR(J1(0, 0), -1.0, 1e-15);
  const Matrix J0 = jacobian(model_with({1, 1, 1}, 0.0), State{{0.3, 1.0, 2.0}});
  EXPECT_EQ(J0, Matrix::Zero(3, 3));
  const Matrix J2 = jacobian(model_with({1, 1}, 0.5), State{{0.0, 0.0}});
  EXPECT_NEAR(J2(0, 0), -1.0, 1e-15);
  EXPECT_NEAR(J2(1, 1), -1.0, 1e-15);
  EXPECT_NEAR(J2(0, 1), 0.0, 1e-15);
  EXPECT_NEAR(J2(1, 0), 0.0, 1e-15);
}

TEST(Jacobian, MatchesCentralDifferences) {
  std::mt19937_64 rng(22);
  const double h = 1e-5;
  for (std::size_t n : {1u, 2u, 5u, 20u}) {
    const ModelSpec m = model_with(std::vector<double>(n, 1.0), 0.4);
    for (int trial = 0; trial < 5; ++trial) {
      const State x = random_state(rng, n);
      const Matrix J = jacobian(m, x);
      for (std::size_t j = 0; j < n; ++j) {
        State xp = x, xm = x;
        xp[static_cast<Eigen::Index>(j)] += h;
        xm[static_cast<Eigen::Index>(j)] -= h;
        const Vector col = (vector_field(m, xp) - vector_field(m, xm)) / (2 * h);
        EXPECT_LT((col - J.col(static_cast<Eigen::Index>(j))).lpNorm<Eigen::Infinity>(), 1e-6);
      }
    }
  }
}

TEST(Jacobian, RowsShareResponseFactor) {
  std::mt19937_64 rng(23);
  const std::size_t n = 6;
  const ModelSpec m = model_with(std::vector<double>(n, 1.0), 0.4);
  const State x = random_state(rng, n);
  const Matrix J = jacobian(m, x);
  auto dP = [&](Eigen::Index k) { return -std::sin(x[k]); };
  for (Eigen::Index i = 0; i < 6; ++i) {
    for (Eigen::Index j = 0; j < 6; ++j) {
      for (Eigen::Index k = 0; k < 6; ++k) {
        if (j == i || k == i) continue;
        if (std::abs(dP(j)) < 1e-6 || std::abs(dP(k)) < 1e-6) continue;
        EXPECT_NEAR(J(i, j) * dP(k), J(i, k) * dP(j), 1e-12);
      }
    }
  }
}

TEST(PhaseMean, Examples) {
  EXPECT_DOUBLE_EQ(phase_mean(State{{0.0, kTwoPi}}), kPi);
  EXPECT_DOUBLE_EQ(phase_mean(State{{1.7}}), 1.7);
  EXPECT_DOUBLE_EQ(phase_mean(State{{1.0, 2.0, 3.0}}), 2.0);
}

TEST(PhaseMeanRate, IsFieldAverage) {
  std::mt19937_64 rng(24);
  const ModelSpec m = model_with({0.99, 1.0, 1.01, 1.005}, 0.2, 0.01);
  const State x = random_state(rng, 4);
  EXPECT_NEAR(phase_mean_rate(m, x), vector_field(m, x).mean(), 1e-15);
}

TEST(CouplingAt, MatchesDefaults) {
  const ModelSpec m = model_with({1}, 0.1);
  for (double s : {0.0, 0.7, 3.0, -2.0}) {
    const CouplingValues cv = coupling_at(m, s);
    EXPECT_NEAR(cv.P, 1.0 + std::cos(s), 1e-15);
    EXPECT_NEAR(cv.dP, -std::sin(s), 1e-15);
    EXPECT_NEAR(cv.R, std::sin(s), 1e-15);
    EXPECT_NEAR(cv.dR, std::cos(s), 1e-15);
  }
}

TEST(Frequencies, SeededDrawsStayInBandAndReproduce) {
  const Vector a = sample_frequencies(1000, 0.2, 42);
  const Vector b = sample_frequencies(1000, 0.2, 42);
  EXPECT_EQ(a, b);
  EXPECT_GT(a.minCoeff(), 0.8);
  EXPECT_LT(a.maxCoeff(), 1.2);
  EXPECT_NE(sample_frequencies(10, 0.2, 43), sample_frequencies(10, 0.2, 42));
  // First draw from the documented algorithm.
  SplitMix64 g(42);
  EXPECT_DOUBLE_EQ(a[0], 0.8 + 0.4 * g.uniform_open());
}

TEST(Validate, RejectsBadInputs) {
  auto kind_of = [](const ModelSpec& m) {
    try {
      validate(m);
    } catch (const Error& e) {
      return e.kind();
    }
    return ErrorKind::NonFinite;  // sentinel: no throw
  };
  EXPECT_NO_THROW(validate(model_with({1.0, 1.05}, 0.1, 0.1)));
  EXPECT_EQ(kind_of(model_with({1.0, 1.2}, 0.1, 0.1)), ErrorKind::OutOfDomain);
  EXPECT_EQ(kind_of(model_with({1.0}, 1.2, 0.1)), ErrorKind::OutOfDomain);
  EXPECT_EQ(kind_of(model_with({}, 0.1, 0.1)), ErrorKind::ConfigError);
}
