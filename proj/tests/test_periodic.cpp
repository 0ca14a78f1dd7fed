#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "winfree/error.hpp"
#include "winfree/periodic.hpp"

using namespace winfree;

namespace {

constexpr double kPi = std::numbers::pi;

TrigPoly random_poly(std::mt19937_64& rng, std::size_t degree, double scale = 1.0) {
  std::uniform_real_distribution<double> u(-scale, scale);
  TrigPoly p;
  p.cos_coeffs.assign(degree + 1, 0.0);
  p.sin_coeffs.assign(degree, 0.0);
  for (auto& c : p.cos_coeffs) c = u(rng);
  for (auto& c : p.sin_coeffs) c = u(rng);
  return p;
}

// Independent evaluation of a trig polynomial and its derivatives.
double direct_eval(const TrigPoly& p, double s, int order) {
  double v = order == 0 ? p.cos_coeffs[0] : 0.0;
  for (std::size_t k = 1; k < p.cos_coeffs.size(); ++k) {
    const double kk = static_cast<double>(k);
    const double c = std::cos(kk * s), sn = std::sin(kk * s);
    v += p.cos_coeffs[k] * (order == 0 ? c : order == 1 ? -kk * sn : -kk * kk * c);
  }
  for (std::size_t k = 1; k <= p.sin_coeffs.size(); ++k) {
    const double kk = static_cast<double>(k);
    const double c = std::cos(kk * s), sn = std::sin(kk * s);
    v += p.sin_coeffs[k - 1] * (order == 0 ? sn : order == 1 ? kk * c : -kk * kk * sn);
  }
  return v;
}

double brute_sup(const PeriodicFunction& f, int order, std::size_t count = 1 << 18) {
  double best = 0.0;
  for (std::size_t k = 0; k < count; ++k) {
    best = std::max(best, std::abs(f(kTwoPi * static_cast<double>(k) / static_cast<double>(count), order)));
  }
  return best;
}

const PeriodicFunction kSin = PeriodicFunction::sine();
const PeriodicFunction kCos = PeriodicFunction::cosine();

}  // namespace

TEST(Evaluate, Examples) {
  const PeriodicFunction pulse = 1.0 + kCos;
  EXPECT_DOUBLE_EQ(evaluate(pulse, 0.0, 0), 2.0);
  EXPECT_NEAR(evaluate(kSin, kPi / 2, 1), 0.0, 1e-15);
  EXPECT_NEAR(evaluate(kSin, kTwoPi + kPi / 2, 0), 1.0, 1e-15);
}

TEST(Evaluate, TrigPolyMatchesDirectFormula) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> s(-20.0, 20.0);
  for (int trial = 0; trial < 50; ++trial) {
    const TrigPoly p = random_poly(rng, 1 + trial % 6);
    const PeriodicFunction f = p;
    for (int k = 0; k < 10; ++k) {
      const double x = s(rng);
      for (int order = 0; order <= 2; ++order) EXPECT_NEAR(f(x, order), direct_eval(p, x, order), 1e-11);
    }
  }
}

TEST(Evaluate, PeriodicityForEveryRepresentation) {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> s(-10.0, 10.0);
  const TrigPoly p = random_poly(rng, 3);
  const PeriodicFunction trig = p;
  const PeriodicFunction composed = (trig * kSin + 2.0) / (3.0 + kCos);
  const PeriodicFunction shifted = composed.shifted(0.7);
  const PeriodicFunction solved = solve_periodic_linear(1.0 + 0.5 * kCos, kSin);
  for (const PeriodicFunction* f : {&trig, &composed, &shifted, &solved}) {
    for (int k = 0; k < 100; ++k) {
      const double x = s(rng);
      for (int order = 0; order <= 2; ++order) {
        EXPECT_NEAR((*f)(x + kTwoPi, order), (*f)(x, order), 1e-12 * std::max(1.0, std::abs((*f)(x, order))));
      }
    }
  }
}

TEST(Evaluate, DerivativesMatchCentralDifferences) {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> s(0.0, kTwoPi);
  const double h = 1e-4;
  const PeriodicFunction composed = (1.0 + kCos) * kSin / (2.0 - 0.5 * (1.0 + kCos) * kSin);
  const PeriodicFunction solved = solve_periodic_linear(1.0 + 0.3 * kSin, 0.5 + kCos);
  for (const PeriodicFunction* f : {&composed, &solved}) {
    for (int k = 0; k < 50; ++k) {
      const double x = s(rng);
      const double fd1 = ((*f)(x + h) - (*f)(x - h)) / (2 * h);
      const double fd2 = ((*f)(x + h) - 2 * (*f)(x) + (*f)(x - h)) / (h * h);
      EXPECT_LT(std::abs(fd1 - (*f)(x, 1)), 1e-6);
      EXPECT_LT(std::abs(fd2 - (*f)(x, 2)), 1e-6);
      const double fd21 = ((*f)(x + h, 1) - (*f)(x - h, 1)) / (2 * h);
      EXPECT_LT(std::abs(fd21 - (*f)(x, 2)), 1e-6);
    }
  }
}

TEST(TrigFolding, ProductOfTrigPolysIsTrigPoly) {
  const PeriodicFunction prod = (1.0 + kCos) * kSin;
  ASSERT_NE(prod.trig(), nullptr);
  // (1 + cos s) sin s = sin s + sin(2s)/2
  const TrigPoly expect{{0.0, 0.0, 0.0}, {1.0, 0.5}};
  for (double s : {0.1, 1.3, 4.0}) EXPECT_NEAR(prod(s), direct_eval(expect, s, 0), 1e-15);
  EXPECT_EQ(prod.trig()->degree(), 2u);
  EXPECT_NEAR(prod.derivative()(0.4), std::cos(0.4) + std::cos(0.8), 1e-15);
}

TEST(SupNorm, Examples) {
  EXPECT_NEAR(sup_norm(kSin, 0), 1.0, 1e-8);
  EXPECT_NEAR(sup_norm(1.0 + kCos, 0), 2.0, 1e-8);
  // Second derivative −cos; oracle = dense grid scan at 2^18 points.
  const double oracle = brute_sup(1.0 + kCos, 2);
  EXPECT_NEAR(oracle, 1.0, 1e-9);
  EXPECT_NEAR(sup_norm(1.0 + kCos, 2), oracle, 1e-8);
}

TEST(SupNorm, AgreesWithBruteForceOnRandomPolys) {
  std::mt19937_64 rng(14);
  for (int trial = 0; trial < 10; ++trial) {
    const PeriodicFunction f = random_poly(rng, 2 + trial % 5);
    for (int order = 0; order <= 2; ++order) {
      const double oracle = brute_sup(f, order, 1 << 20);
      const double got = sup_norm(f, order);
      EXPECT_GE(got, oracle - 1e-10);
      EXPECT_NEAR(got, oracle, 1e-8 * std::max(1.0, oracle));
    }
  }
}

TEST(SupNorm, ShiftInvariance) {
  std::mt19937_64 rng(15);
  std::uniform_real_distribution<double> c(-5.0, 5.0);
  for (int trial = 0; trial < 10; ++trial) {
    const PeriodicFunction f = PeriodicFunction(random_poly(rng, 4)) * (2.0 + kSin);
    const double shift = c(rng);
    for (int order = 0; order <= 2; ++order) {
      EXPECT_NEAR(sup_norm(f.shifted(shift), order), sup_norm(f, order), 1e-8);
    }
  }
}

TEST(Integrate, Examples) {
  EXPECT_NEAR(integrate_over_period(kSin * kSin), std::numbers::pi, 1e-10);
  EXPECT_NEAR(integrate_over_period(kCos), 0.0, 1e-10);
  EXPECT_NEAR(integrate_over_period(PeriodicFunction::constant(1.0)), kTwoPi, 1e-12);
}

TEST(Integrate, DerivativeIntegratesToZero) {
  std::mt19937_64 rng(16);
  for (int trial = 0; trial < 20; ++trial) {
    const PeriodicFunction f = random_poly(rng, 1 + trial % 7);
    EXPECT_NEAR(integrate_over_period(f.derivative()), 0.0, 1e-10);
  }
}

TEST(Integrate, ThrowsWhenPanelCapIsTooSmall) {
  GridSettings g;
  g.quad_max_panels = 64;
  g.quad_tol = 1e-16;
  const PeriodicFunction spiky = 1.0 / (1.0001 - kCos);
  try {
    integrate_over_period(spiky, g);
    FAIL() << "expected NonConvergence";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NonConvergence);
  }
}

TEST(PeriodicLinear, ConstantCoefficients) {
  const PeriodicFunction u = solve_periodic_linear(PeriodicFunction::constant(1.0), PeriodicFunction::constant(0.3));
  for (double s : {0.0, 1.0, 2.5, 6.0}) {
    EXPECT_NEAR(u(s), 0.3, 1e-12);
    EXPECT_NEAR(u(s, 1), 0.0, 1e-10);
  }
}

TEST(PeriodicLinear, CosineForcing) {
  const PeriodicFunction u = solve_periodic_linear(PeriodicFunction::constant(1.0), kCos);
  for (int k = 0; k < 97; ++k) {
    const double s = kTwoPi * k / 97.0;
    EXPECT_NEAR(u(s), 0.5 * (std::cos(s) + std::sin(s)), 1e-10);
  }
}

TEST(PeriodicLinear, DegenerateMonodromy) {
  try {
    solve_periodic_linear(PeriodicFunction::constant(0.0), PeriodicFunction::constant(1.0));
    FAIL() << "expected DegenerateMonodromy";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::DegenerateMonodromy);
  }
}

TEST(PeriodicLinear, RandomCoefficientsSatisfyResidualAndPeriodicity) {
  std::mt19937_64 rng(17);
  int tested = 0;
  while (tested < 12) {
    TrigPoly a = random_poly(rng, 3, 0.8);
    const TrigPoly b = random_poly(rng, 3, 1.0);
    if (kTwoPi * a.cos_coeffs[0] < 0.1) continue;  // ∫a = 2π·c0
    ++tested;
    const PeriodicSolution sol = solve_periodic_linear_detailed(a, b);
    EXPECT_LT(sol.periodicity_gap, 1e-10);
    EXPECT_NEAR(sol.integral_a, kTwoPi * a.cos_coeffs[0], 1e-10);
    EXPECT_GE(sol.function.sample_count(), 4096u);
    const std::size_t N = sol.function.sample_count();
    double worst = 0.0;
    for (std::size_t k = 0; k < N; ++k) {
      for (double off : {0.0, 0.5}) {
        const double s = kTwoPi * (static_cast<double>(k) + off) / static_cast<double>(N);
        worst = std::max(worst, std::abs(sol.function(s, 1) - b.jet(s).value + a.jet(s).value * sol.function(s)));
      }
    }
    EXPECT_LT(worst, 1e-8);
    EXPECT_LT(std::abs(sol.function(0.0) - sol.function(kTwoPi)), 1e-10);
  }
}

TEST(Extrema, MaximizeFindsKnownArgument) {
  // (1 + cos) sin peaks at s = π/3 with value 3√3/4.
  const Extremum e = maximize((1.0 + kCos) * kSin);
  EXPECT_NEAR(e.arg, std::numbers::pi / 3, 1e-6);
  EXPECT_NEAR(e.value, 3.0 * std::sqrt(3.0) / 4.0, 1e-12);
  const Extremum lo = minimize((1.0 + kCos) * kSin);
  EXPECT_NEAR(lo.value, -3.0 * std::sqrt(3.0) / 4.0, 1e-12);
}

TEST(Parallel, SerialAndParallelScansAreBitIdentical) {
  const PeriodicFunction f = (1.0 + kCos) * kSin / (2.0 + kCos);
  const int saved = worker_count();
  set_worker_count(4);
  for (int order = 0; order <= 2; ++order) {
    const Extremum a = maximize(f, order, {}, Exec::Serial);
    const Extremum b = maximize(f, order, {}, Exec::Parallel);
    EXPECT_EQ(a.arg, b.arg);
    EXPECT_EQ(a.value, b.value);
    EXPECT_EQ(sup_norm(f, order, {}, Exec::Serial), sup_norm(f, order, {}, Exec::Parallel));
  }
  set_worker_count(saved);
}
