#include "winfree/certify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "winfree/error.hpp"

namespace winfree {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string num(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

}  // namespace

double compute_kappa_star(const PeriodicFunction& P, const PeriodicFunction& R, const GridSettings& grid) {
  const double peak = maximize(P * R, 0, grid).value;
  if (peak <= 0.0) return std::numeric_limits<double>::infinity();
  return 1.0 / peak;
}

double compute_c_tilde(const PeriodicFunction& P, const PeriodicFunction& R, const GridSettings& grid) {
  double p_sum = 0.0;
  double r_sum = 0.0;
  for (int k = 0; k <= 2; ++k) {
    p_sum += sup_norm(P, k, grid);
    r_sum += sup_norm(R, k, grid);
  }
  return 2.0 * p_sum * r_sum;
}

double hypothesis_integral(const PeriodicFunction& P, const PeriodicFunction& R, double kappa,
                           const GridSettings& grid) {
  const PeriodicFunction product = P * R;
  const double floor = 1.0 - kappa * maximize(product, 0, grid).value;
  if (floor < 1e-12) {
    throw Error(ErrorKind::SingularIntegrand,
                "1 - kappa*P*R reaches " + num(floor) + " at kappa = " + num(kappa));
  }
  return integrate_over_period(P * R.derivative() / (1.0 - kappa * product), grid);
}

std::vector<double> default_kappa_grid(double kappa_star, std::size_t count) {
  std::vector<double> g(count);
  const double lo = kappa_star / 1000.0;
  const double hi = 0.999 * kappa_star;
  if (count == 1) {
    g[0] = lo;
    return g;
  }
  for (std::size_t i = 0; i < count; ++i) {
    const double t = static_cast<double>(i) / static_cast<double>(count - 1);
    g[i] = lo * std::pow(hi / lo, t);
  }
  g.back() = hi;
  return g;
}

HypothesisReport check_hypothesis_H(const PeriodicFunction& P, const PeriodicFunction& R,
                                    const std::vector<double>& kappa_grid, const GridSettings& grid) {
  HypothesisReport report;
  report.kappa_grid = kappa_grid;
  report.integral_values = map_indexed<double>(
      kappa_grid.size(), [&](std::size_t i) { return hypothesis_integral(P, R, kappa_grid[i], grid); });
  report.satisfied = std::all_of(report.integral_values.begin(), report.integral_values.end(),
                                 [](double v) { return v > 1e-10; });
  return report;
}

double compute_margin(double gamma, double kappa, double D, double c_tilde, double kappa_star) {
  return 1.0 - gamma - c_tilde * kappa * D - kappa / kappa_star;
}

double compute_alpha(double gamma, double kappa, double D, double c_tilde, double kappa_star) {
  const double lock = 1.0 - kappa / kappa_star;
  const double margin = compute_margin(gamma, kappa, D, c_tilde, kappa_star);
  if (!(lock > 0.0)) throw Error(ErrorKind::InvalidMargin, "1 - kappa/kappa* = " + num(lock));
  if (!(margin > 0.0)) throw Error(ErrorKind::InvalidMargin, "margin 1 - gamma - C*kappa*D - kappa/kappa* = " + num(margin));
  const double ckd = c_tilde * kappa * D;
  const double first = (2.0 * gamma + ckd * D) / lock;
  const double second = (2.0 * gamma + ckd * D + ckd) * (gamma + ckd) / (margin * lock);
  return first + second;
}

PeriodicFunction delta_coefficient(const PeriodicFunction& P, const PeriodicFunction& R, double kappa) {
  return (kappa * (P * R.derivative())) / (1.0 - kappa * (P * R));
}

PeriodicFunction solve_delta(const PeriodicFunction& a, double alpha, const GridSettings& grid) {
  PeriodicFunction delta = solve_periodic_linear(a, PeriodicFunction::constant(alpha), grid);
  const double low = minimize(delta, 0, grid).value;
  if (!(low > 0.0)) {
    throw Error(ErrorKind::NonPositive, "periodic solution reaches " + num(low));
  }
  return delta;
}

PeriodicFunction solve_delta(double gamma, double kappa, double D, const PeriodicFunction& P,
                             const PeriodicFunction& R, const GridSettings& grid) {
  const double kstar = compute_kappa_star(P, R, grid);
  const double alpha = compute_alpha(gamma, kappa, D, compute_c_tilde(P, R, grid), kstar);
  return solve_delta(delta_coefficient(P, R, kappa), alpha, grid);
}

CertifyResult certify_parameters(double gamma, double kappa, const PeriodicFunction& P,
                                 const PeriodicFunction& R, const CertifyOptions& options) {
  const GridSettings& grid = options.grid;
  const double kstar = compute_kappa_star(P, R, grid);
  if (!(gamma > 0.0 && gamma < 1.0)) throw Error(ErrorKind::OutOfDomain, "gamma must lie in (0, 1), got " + num(gamma));
  if (!(kappa > 0.0 && kappa < kstar)) {
    throw Error(ErrorKind::OutOfDomain, "kappa must lie in (0, kappa* = " + num(kstar) + "), got " + num(kappa));
  }
  const double c_tilde = compute_c_tilde(P, R, grid);

  CertifyFailure failure{gamma, kappa, {}, {}};
  const PeriodicFunction a = delta_coefficient(P, R, kappa);
  const double integral_a = integrate_over_period(a, grid);
  if (!(integral_a > 1e-12)) {
    failure.reason = "hypothesis H fails at kappa (integral of a = " + num(integral_a) + ")";
    return failure;
  }

  // Δ is linear in α: Δ = α · Δ₁ with Δ₁ the solution for α = 1.
  const PeriodicFunction unit = solve_delta(a, 1.0, grid);
  const double unit_max = maximize(unit, 0, grid).value;

  auto attempt = [&](double D) {
    DAttempt at{D, compute_margin(gamma, kappa, D, c_tilde, kstar), kNaN, kNaN, DVerdict::MarginNonPositive};
    if (at.margin < options.slack) return at;
    at.alpha = compute_alpha(gamma, kappa, D, c_tilde, kstar);
    at.delta_max = at.alpha * unit_max;
    at.verdict = at.delta_max < D - options.slack ? DVerdict::Admissible : DVerdict::DeltaExceedsD;
    return at;
  };
  auto admissible = [&](double D) { return attempt(D).verdict == DVerdict::Admissible; };

  // Geometric grid first.
  double hi = kNaN;
  double lo = 0.0;
  for (int k = 1; k <= options.grid_levels; ++k) {
    const DAttempt at = attempt(std::ldexp(1.0, -k));
    failure.attempts.push_back(at);
    if (at.verdict == DVerdict::Admissible) {
      hi = at.D;
      lo = k < options.grid_levels ? 0.5 * at.D : 0.0;
    }
  }
  if (std::isnan(hi)) {
    // No grid point is admissible; Δmax(D) − D is convex in D, so minimize it
    // over the range where the margin stays positive.
    const double D0 = (1.0 - gamma - kappa / kstar) / (c_tilde * kappa);
    const double cap = std::min(1.0, D0) * (1.0 - 1e-9);
    if (cap > 0.0) {
      auto excess = [&](double D) {
        DAttempt at = attempt(D);
        failure.attempts.push_back(at);
        return at.verdict == DVerdict::MarginNonPositive ? std::numeric_limits<double>::infinity()
                                                          : at.delta_max - D;
      };
      constexpr double kInvPhi = 0.6180339887498949;
      double x0 = 0.0;
      double x3 = cap;
      double x1 = x3 - kInvPhi * (x3 - x0);
      double x2 = x0 + kInvPhi * (x3 - x0);
      double f1 = excess(x1);
      double f2 = excess(x2);
      for (int it = 0; it < 120 && (x3 - x0) > 1e-12 * cap; ++it) {
        if (f1 < f2) {
          x3 = x2; x2 = x1; f2 = f1;
          x1 = x3 - kInvPhi * (x3 - x0);
          f1 = excess(x1);
        } else {
          x0 = x1; x1 = x2; f1 = f2;
          x2 = x0 + kInvPhi * (x3 - x0);
          f2 = excess(x2);
        }
      }
      const double best = f1 < f2 ? x1 : x2;
      if (admissible(best)) {
        hi = best;
        lo = 0.0;
      }
    }
  }
  if (std::isnan(hi)) {
    const bool any_margin = std::any_of(failure.attempts.begin(), failure.attempts.end(),
                                        [](const DAttempt& at) { return at.verdict != DVerdict::MarginNonPositive; });
    failure.reason = any_margin ? "max Delta >= D for every attempted D"
                                : "margin 1 - gamma - C*kappa*D - kappa/kappa* is not positive for any attempted D";
    return failure;
  }

  while (hi - lo > options.resolution * hi) {
    const double mid = 0.5 * (lo + hi);
    (admissible(mid) ? hi : lo) = mid;
  }

  ParameterCertificate cert;
  cert.gamma = gamma;
  cert.kappa = kappa;
  cert.D = hi;
  cert.kappa_star = kstar;
  cert.c_tilde = c_tilde;
  cert.alpha = compute_alpha(gamma, kappa, hi, c_tilde, kstar);
  cert.margin = compute_margin(gamma, kappa, hi, c_tilde, kstar);
  cert.delta_fn = solve_delta(a, cert.alpha, grid);
  cert.delta_max = maximize(cert.delta_fn, 0, grid).value;
  cert.delta_min = minimize(cert.delta_fn, 0, grid).value;
  cert.P = P;
  cert.R = R;
  if (!(cert.delta_max < cert.D - options.slack)) {
    failure.reason = "re-solved Delta violates max Delta < D (" + num(cert.delta_max) + " vs " + num(cert.D) + ")";
    return failure;
  }
  return cert;
}

Membership in_invariant_set(const State& x, const ParameterCertificate& cert) {
  Membership m;
  m.spread = x.maxCoeff() - x.minCoeff();
  m.envelope = cert.delta_fn(x.mean());
  m.slack = m.envelope - m.spread;
  m.inside = m.spread < m.envelope;
  return m;
}

CertificateCheck verify_certificate(const ParameterCertificate& cert, const GridSettings& grid, double slack) {
  CertificateCheck check;
  const PeriodicFunction a = delta_coefficient(cert.P, cert.R, cert.kappa);
  const PeriodicFunction& delta = cert.delta_fn;

  const double kstar = compute_kappa_star(cert.P, cert.R, grid);
  const double c_tilde = compute_c_tilde(cert.P, cert.R, grid);
  check.margin = compute_margin(cert.gamma, cert.kappa, cert.D, c_tilde, kstar);
  const double alpha = compute_alpha(cert.gamma, cert.kappa, cert.D, c_tilde, kstar);

  const PeriodicSolution fresh = solve_periodic_linear_detailed(a, PeriodicFunction::constant(alpha), grid);
  check.periodicity_gap = fresh.periodicity_gap;

  // Residual and comparison on a grid offset from every table node.
  const std::size_t count = grid.sup_grid;
  const double h = kTwoPi / static_cast<double>(count);
  const std::vector<double> residual = sample_grid(
      [&](double s) {
        const Jet d = delta.jet(s);
        return std::abs(d.d1 - alpha + a(s) * d.value);
      },
      0.5 * h, kTwoPi + 0.5 * h, count);
  const std::vector<double> diff = sample_grid(
      [&](double s) { return std::abs(delta(s) - fresh.function(s)); }, 0.5 * h, kTwoPi + 0.5 * h, count);
  check.ode_residual = grid_max(residual).value;
  check.resolve_difference = grid_max(diff).value;
  check.delta_max = maximize(delta, 0, grid).value;
  check.delta_min = minimize(delta, 0, grid).value;
  check.pass = check.ode_residual < 1e-8 && check.periodicity_gap < 1e-10 && check.delta_min > 0.0 &&
               check.delta_max < cert.D - slack && check.margin >= slack && cert.D > 0.0 && cert.D < 1.0 &&
               cert.kappa > 0.0 && cert.kappa < kstar;
  return check;
}

State draw_state_in_set(const ParameterCertificate& cert, std::size_t n, SplitMix64& rng) {
  const double mu = rng.uniform(0.0, kTwoPi);
  const double fill = rng.uniform(0.05, 0.95);
  State x = State::Constant(static_cast<Eigen::Index>(n), mu);
  if (n < 2) return x;
  Vector u(static_cast<Eigen::Index>(n));
  for (auto& v : u) v = rng.uniform_open();
  const double width = u.maxCoeff() - u.minCoeff();
  if (width <= 0.0) return x;
  const double spread = fill * cert.delta_fn(mu);
  x.array() += spread * (u.array() - u.mean()) / width;
  return x;
}

PeriodicFunction delta_from_samples(const std::vector<double>& values, double alpha, double kappa,
                                    const PeriodicFunction& P, const PeriodicFunction& R) {
  const PeriodicFunction a = delta_coefficient(P, R, kappa);
  const std::size_t n = values.size();
  const double h = kTwoPi / static_cast<double>(n);
  std::vector<double> d1(n), d2(n);
  for (std::size_t k = 0; k < n; ++k) {
    const Jet ja = a.jet(static_cast<double>(k) * h);
    d1[k] = alpha - ja.value * values[k];
    d2[k] = -ja.d1 * values[k] - ja.value * d1[k];
  }
  return PeriodicFunction::sampled(values, std::move(d1), std::move(d2));
}

}  // namespace winfree
