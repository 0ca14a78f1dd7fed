#include "winfree/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "winfree/error.hpp"

namespace winfree {

namespace {

PeriodicFunction denominator(const ParameterCertificate& cert) { return 1.0 - cert.kappa * (cert.P * cert.R); }

double lock_factor(const ParameterCertificate& cert) { return 1.0 - cert.kappa / cert.kappa_star; }

void require_inside(const State& x, const ParameterCertificate& cert, const char* what) {
  const Membership mb = in_invariant_set(x, cert);
  if (!mb.inside) {
    throw Error(ErrorKind::PreconditionViolated,
                std::string(what) + " is not in the invariant set (slack " + std::to_string(mb.slack) + ")");
  }
}

}  // namespace

PeriodicFunction p_function(const ParameterCertificate& cert, std::size_t n) {
  const double c = -cert.kappa / static_cast<double>(n);
  return (c * (cert.P.derivative() * cert.R)) / denominator(cert);
}

PeriodicFunction beta_function(const ParameterCertificate& cert, std::size_t n) {
  const double c = lock_factor(cert) * cert.alpha / (2.0 * static_cast<double>(n) * cert.D);
  return PeriodicFunction::constant(c) / denominator(cert);
}

PeriodicFunction theta_function(const ParameterCertificate& cert) {
  return (lock_factor(cert) * cert.delta_fn) / denominator(cert);
}

double verify_theta_ode(const ParameterCertificate& cert, std::size_t n, std::size_t grid) {
  const PeriodicFunction theta = theta_function(cert);
  const PeriodicFunction p = p_function(cert, n);
  const PeriodicFunction beta = beta_function(cert, n);
  const double nn = static_cast<double>(n);
  const double h = kTwoPi / static_cast<double>(grid);
  const std::vector<double> r = sample_grid(
      [&](double s) {
        const Jet th = theta.jet(s);
        return std::abs(th.d1 + nn * p(s) * th.value - 2.0 * nn * cert.D * beta(s));
      },
      0.5 * h, kTwoPi + 0.5 * h, grid);
  return grid_max(r).value;
}

std::vector<ReducedSample> reduced_matrix(const ModelSpec& m, const Trajectory& traj,
                                          const ParameterCertificate& cert) {
  const Reparameterization rp = reparameterize(traj);
  const auto n = static_cast<Eigen::Index>(m.n());
  const double inv_n = 1.0 / static_cast<double>(n);
  std::vector<ReducedSample> out(traj.size());
  for (std::size_t k = 0; k < traj.size(); ++k) {
    const State x = traj.state(k);
    const double s = rp.s_grid()[k];
    const double rate = rp.rates()[k];
    const CouplingValues cv = coupling_at(m, s);
    const double den = 1.0 - cert.kappa * cv.P * cv.R;
    const Matrix J = jacobian(m, x);
    const Matrix Js = jacobian(m, State::Constant(n, s));
    const Matrix H = (J - Js) / den - (J / rate) * (rate / den - 1.0);
    const double sync_entry = -inv_n * m.kappa * cv.dP * cv.R / den;
    ReducedSample rs;
    rs.t = traj.times[k];
    rs.s = s;
    rs.rate = rate;
    rs.reduced = Matrix::Constant(n, n, sync_entry) + H;
    rs.correction = H;
    out[k] = std::move(rs);
  }
  return out;
}

MatrixBoundReport check_matrix_bounds(const std::vector<ReducedSample>& samples, const PeriodicFunction& p,
                                      const PeriodicFunction& beta) {
  MatrixBoundReport report;
  report.samples = samples.size();
  report.margin = std::numeric_limits<double>::infinity();
  for (const ReducedSample& rs : samples) {
    const double pv = p(rs.s);
    const double bv = beta(rs.s);
    const double below = pv - rs.reduced.minCoeff();
    const double range = rs.reduced.maxCoeff() - rs.reduced.minCoeff();
    const double margin = bv - std::max(below, range);
    if (margin < report.margin) {
      report.margin = margin;
      report.margin_s = rs.s;
    }
    report.max_correction_ratio = std::max(report.max_correction_ratio, rs.correction.cwiseAbs().maxCoeff() / bv);
  }
  report.pass = report.margin > 0.0;
  return report;
}

ReducedSystemReport reduced_system_report(const ModelSpec& m, const Trajectory& traj,
                                          const ParameterCertificate& cert) {
  ReducedSystemReport report;
  const PeriodicFunction p = p_function(cert, m.n());
  const PeriodicFunction beta = beta_function(cert, m.n());
  const PeriodicFunction theta = theta_function(cert);
  const std::vector<ReducedSample> samples = reduced_matrix(m, traj, cert);
  report.bounds = check_matrix_bounds(samples, p, beta);
  report.theta_residual = verify_theta_ode(cert, m.n());
  const std::size_t step = std::max<std::size_t>(1, (samples.size() + 4095) / 4096);
  for (std::size_t k = 0; k < samples.size(); k += step) {
    const double s = samples[k].s;
    report.s_grid.push_back(s);
    report.p_values.push_back(p(s));
    report.beta_values.push_back(beta(s));
    report.theta_values.push_back(theta(s));
  }
  report.pass = report.bounds.pass && report.theta_residual < 1e-6;
  return report;
}

// ---------------------------------------------------------------- cone

ConeReport find_cone_entry(const FundamentalMatrixTrajectory& fm, double window, double eps) {
  ConeReport report;
  report.samples = fm.matrices.size();
  double closest = -std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < fm.matrices.size() && fm.times[j] <= window; ++j) {
    ++report.candidates_tested;
    const Matrix inv = fm.matrices[j].partialPivLu().inverse();
    double worst = std::numeric_limits<double>::infinity();
    bool ok = true;
    for (std::size_t k = j; k < fm.matrices.size(); ++k) {
      const Matrix rel = fm.matrices[k] * inv;
      const double scale = rel.cwiseAbs().maxCoeff();
      const double r = rel.minCoeff() / scale;
      worst = std::min(worst, r);
      if (!(r >= -eps)) {
        ok = false;
        break;
      }
    }
    if (ok) {
      report.entered = true;
      report.persisted = true;
      report.entry_time = fm.times[j];
      report.min_entry_after = worst;
      return report;
    }
    closest = std::max(closest, worst);
  }
  report.entry_time = std::numeric_limits<double>::infinity();
  report.min_entry_after = closest;
  return report;
}

ConeReport check_cone_invariance(const ModelSpec& m, const ParameterCertificate& cert, const State& x0, double T,
                                 double dt, const ConeOptions& options) {
  require_inside(x0, cert, "initial state");
  auto [traj, fm] = integrate_variational(m, x0, T, dt, options.stride);
  const Reparameterization rp = reparameterize(traj);
  const double target = rp.s_begin() + kTwoPi;
  if (target > rp.s_end()) {
    throw Error(ErrorKind::PreconditionViolated, "horizon too short: the mean phase never advances by 2*pi");
  }
  const double margin_bound = kTwoPi / cert.margin;
  ConeReport report = find_cone_entry(fm, std::min(0.5 * T, 2.0 * margin_bound), options.eps);
  report.bound = rp.tau(target);
  report.margin_bound = margin_bound;
  report.within_bound = report.entered && report.entry_time <= report.bound;
  report.pass = report.entered && report.persisted && report.within_bound;
  return report;
}

// ---------------------------------------------------------------- stability

double lipschitz_lambda(double alpha_lower, double r, double delta_ctrl) {
  return r * std::exp(r * delta_ctrl) / alpha_lower;
}

StabilityEstimate stability_constant(const ParameterCertificate& cert) {
  StabilityEstimate est;
  est.alpha_lower = cert.margin;
  est.r = 1.0 + cert.gamma + cert.kappa * cert.c_tilde;
  est.delta_ctrl = kTwoPi / cert.margin;
  est.lambda = lipschitz_lambda(est.alpha_lower, est.r, est.delta_ctrl);
  return est;
}

double empirical_lipschitz(const ModelSpec& m, const ParameterCertificate& cert, const State& x0, const State& y0,
                           double T, double dt, std::size_t stride) {
  require_inside(x0, cert, "first initial state");
  require_inside(y0, cert, "second initial state");
  const double d0 = (x0 - y0).lpNorm<Eigen::Infinity>();
  if (!(d0 > 0.0)) throw Error(ErrorKind::PreconditionViolated, "initial states coincide");
  stride = std::max<std::size_t>(stride, 1);
  const Trajectory other = integrate(m, y0, T, dt, stride);
  const std::size_t total = step_count(T, dt);
  std::size_t row = 0;
  double sup = 0.0;
  integrate_streaming(m, x0, T, dt, [&](std::size_t step, double, const State& x) {
    if (step % stride != 0 && step != total) return;
    const double d = (x - other.state(row++)).lpNorm<Eigen::Infinity>();
    sup = std::max(sup, d / d0);
  });
  return sup;
}

RotationEstimate rotation_vector(const Trajectory& traj) {
  RotationEstimate est;
  const std::size_t count = traj.size();
  const double half = 0.5 * (traj.times.front() + traj.times.back());
  std::size_t first = 0;
  while (first < count && traj.times[first] < half) ++first;
  if (count - first < 2) first = count >= 2 ? count - 2 : 0;
  const auto rows = static_cast<Eigen::Index>(count - first);
  Vector t(rows);
  for (Eigen::Index k = 0; k < rows; ++k) t[k] = traj.times[first + static_cast<std::size_t>(k)];
  const auto window = traj.phases.middleRows(static_cast<Eigen::Index>(first), rows);
  const Vector tc = t.array() - t.mean();
  const double denom = tc.squaredNorm();
  est.rho = Vector(traj.phases.cols());
  for (Eigen::Index i = 0; i < traj.phases.cols(); ++i) {
    const Vector xi = window.col(i);
    est.rho[i] = tc.dot(xi.array().matrix() - Vector::Constant(rows, xi.mean())) / denom;
  }
  est.fit_start = t[0];
  est.fit_end = t[rows - 1];
  return est;
}

// ---------------------------------------------------------------- comparison harness

ComparisonReport verify_comparison(const ComparisonSystem& sys, double T, double dt, const ConeOptions& options,
                                   const GridSettings& grid) {
  ComparisonReport report;
  const double nn = static_cast<double>(sys.n);
  const std::size_t count = grid.sup_grid;
  const std::vector<double> margins = sample_grid(
      [&](double t) {
        const Matrix A = sys.A(t);
        const double worst = std::max(sys.p(t) - A.minCoeff(), A.maxCoeff() - A.minCoeff());
        return worst - sys.beta(t);
      },
      0.0, kTwoPi, count);
  report.hypothesis_margin = -grid_max(margins).value;

  const PeriodicFunction theta = solve_periodic_linear(nn * sys.p, (2.0 * nn * sys.d) * sys.beta, grid);
  report.theta_min = minimize(theta, 0, grid).value;
  report.theta_max = maximize(theta, 0, grid).value;
  report.hypotheses_hold = report.hypothesis_margin > 0.0 && report.theta_min > 0.0 && report.theta_max < sys.d;

  // Fundamental matrix of the standalone linear system.
  const auto n = static_cast<Eigen::Index>(sys.n);
  const std::size_t steps = step_count(T, dt);
  const std::size_t stride = std::max<std::size_t>(options.stride, 1);
  FundamentalMatrixTrajectory fm;
  Matrix M = Matrix::Identity(n, n);
  fm.times.push_back(0.0);
  fm.matrices.push_back(M);
  double t = 0.0;
  for (std::size_t step = 1; step <= steps; ++step) {
    const double h = std::min(dt, T - t);
    const Matrix K1 = sys.A(t) * M;
    const Matrix K2 = sys.A(t + 0.5 * h) * (M + 0.5 * h * K1);
    const Matrix K3 = sys.A(t + 0.5 * h) * (M + 0.5 * h * K2);
    const Matrix K4 = sys.A(t + h) * (M + h * K3);
    M += (h / 6.0) * (K1 + 2.0 * (K2 + K3) + K4);
    t = step == steps ? T : static_cast<double>(step) * dt;
    if (step % stride == 0 || step == steps) {
      fm.times.push_back(t);
      fm.matrices.push_back(M);
    }
  }
  report.cone = find_cone_entry(fm, kTwoPi, options.eps);
  report.cone.bound = kTwoPi;
  report.cone.margin_bound = kTwoPi;
  report.cone.within_bound = report.cone.entered && report.cone.entry_time <= kTwoPi;
  report.cone.pass = report.cone.entered && report.cone.persisted && report.cone.within_bound;
  return report;
}

}  // namespace winfree
