#include "winfree/flow.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "winfree/error.hpp"

namespace winfree {

namespace {

struct StepPlan {
  std::size_t full = 0;
  double last = 0.0;  // size of the trailing partial step, 0 if none

  std::size_t total() const { return full + (last > 0.0 ? 1 : 0); }
};

StepPlan plan_steps(double T, double dt) {
  if (!(T > 0.0) || !(dt > 0.0) || dt > T * (1.0 + 1e-12)) {
    throw Error(ErrorKind::PreconditionViolated,
                "integration needs T > 0, dt > 0, dt <= T (T = " + std::to_string(T) + ", dt = " + std::to_string(dt) + ")");
  }
  const double q = T / dt;
  const double r = std::round(q);
  if (std::abs(q - r) <= 1e-9 * std::max(1.0, q)) return {static_cast<std::size_t>(r), 0.0};
  const auto full = static_cast<std::size_t>(std::floor(q));
  return {full, T - static_cast<double>(full) * dt};
}

double time_at(const StepPlan& plan, std::size_t step, double T, double dt) {
  if (step == plan.total() && plan.last > 0.0) return T;
  return static_cast<double>(step) * dt;
}

void require_finite(const State& x, double t) {
  if (!x.allFinite()) throw Error(ErrorKind::NonFinite, "phase left the finite range at t = " + std::to_string(t));
}

}  // namespace

std::size_t step_count(double T, double dt) { return plan_steps(T, dt).total(); }

void integrate_streaming(const ModelSpec& m, const State& x0, double T, double dt, const StateObserver& observer) {
  const StepPlan plan = plan_steps(T, dt);
  State x = x0;
  Vector k1, k2, k3, k4, tmp;
  observer(0, 0.0, x);
  for (std::size_t step = 1; step <= plan.total(); ++step) {
    const double h = (step > plan.full) ? plan.last : dt;
    vector_field(m, x, k1);
    tmp = x + (0.5 * h) * k1;
    vector_field(m, tmp, k2);
    tmp = x + (0.5 * h) * k2;
    vector_field(m, tmp, k3);
    tmp = x + h * k3;
    vector_field(m, tmp, k4);
    x += (h / 6.0) * (k1 + 2.0 * (k2 + k3) + k4);
    const double t = time_at(plan, step, T, dt);
    require_finite(x, t);
    observer(step, t, x);
  }
}

Trajectory integrate(const ModelSpec& m, const State& x0, double T, double dt, std::size_t stride) {
  stride = std::max<std::size_t>(stride, 1);
  const std::size_t total = step_count(T, dt);
  Trajectory traj;
  traj.model = m;
  traj.dt = dt;
  traj.stride = stride;
  const std::size_t rows = total / stride + 2;
  traj.phases.resize(static_cast<Eigen::Index>(rows), x0.size());
  traj.times.reserve(rows);
  integrate_streaming(m, x0, T, dt, [&](std::size_t step, double t, const State& x) {
    if (step % stride == 0 || step == total) {
      traj.phases.row(static_cast<Eigen::Index>(traj.times.size())) = x.transpose();
      traj.times.push_back(t);
    }
  });
  traj.phases.conservativeResize(static_cast<Eigen::Index>(traj.times.size()), Eigen::NoChange);
  return traj;
}

void integrate_variational_streaming(const ModelSpec& m, const State& x0, double T, double dt,
                                     const VariationalObserver& observer) {
  const StepPlan plan = plan_steps(T, dt);
  const Eigen::Index n = x0.size();
  State x = x0;
  Matrix M = Matrix::Identity(n, n);
  Vector k1, k2, k3, k4, xs;
  Matrix K1, K2, K3, K4, Ms;
  observer(0, 0.0, x, M);
  for (std::size_t step = 1; step <= plan.total(); ++step) {
    const double h = (step > plan.full) ? plan.last : dt;
    vector_field(m, x, k1);
    K1.noalias() = jacobian(m, x) * M;
    xs = x + (0.5 * h) * k1;
    Ms = M + (0.5 * h) * K1;
    vector_field(m, xs, k2);
    K2.noalias() = jacobian(m, xs) * Ms;
    xs = x + (0.5 * h) * k2;
    Ms = M + (0.5 * h) * K2;
    vector_field(m, xs, k3);
    K3.noalias() = jacobian(m, xs) * Ms;
    xs = x + h * k3;
    Ms = M + h * K3;
    vector_field(m, xs, k4);
    K4.noalias() = jacobian(m, xs) * Ms;
    x += (h / 6.0) * (k1 + 2.0 * (k2 + k3) + k4);
    M += (h / 6.0) * (K1 + 2.0 * (K2 + K3) + K4);
    const double t = time_at(plan, step, T, dt);
    require_finite(x, t);
    if (!M.allFinite()) throw Error(ErrorKind::NonFinite, "fundamental matrix left the finite range at t = " + std::to_string(t));
    observer(step, t, x, M);
  }
}

std::pair<Trajectory, FundamentalMatrixTrajectory> integrate_variational(const ModelSpec& m, const State& x0,
                                                                        double T, double dt, std::size_t stride) {
  stride = std::max<std::size_t>(stride, 1);
  const std::size_t total = step_count(T, dt);
  Trajectory traj;
  traj.model = m;
  traj.dt = dt;
  traj.stride = stride;
  FundamentalMatrixTrajectory fm;
  const std::size_t rows = total / stride + 2;
  traj.phases.resize(static_cast<Eigen::Index>(rows), x0.size());
  integrate_variational_streaming(m, x0, T, dt, [&](std::size_t step, double t, const State& x, const Matrix& M) {
    if (step % stride == 0 || step == total) {
      traj.phases.row(static_cast<Eigen::Index>(traj.times.size())) = x.transpose();
      traj.times.push_back(t);
      fm.times.push_back(t);
      fm.matrices.push_back(M);
    }
  });
  traj.phases.conservativeResize(static_cast<Eigen::Index>(traj.times.size()), Eigen::NoChange);
  return {std::move(traj), std::move(fm)};
}

// ---------------------------------------------------------------- reparameterization

Reparameterization::Reparameterization(std::vector<double> times, std::vector<double> s_grid,
                                       std::vector<double> rates)
    : t_(std::move(times)), s_(std::move(s_grid)), rate_(std::move(rates)) {
  const std::size_t n = s_.size();
  slope_.resize(n);
  for (std::size_t k = 0; k < n; ++k) slope_[k] = 1.0 / rate_[k];
  // Fritsch–Carlson limiter keeps the interpolant monotone.
  for (std::size_t k = 0; k + 1 < n; ++k) {
    const double secant = (t_[k + 1] - t_[k]) / (s_[k + 1] - s_[k]);
    const double a = slope_[k] / secant;
    const double b = slope_[k + 1] / secant;
    const double r2 = a * a + b * b;
    if (r2 > 9.0) {
      const double scale = 3.0 / std::sqrt(r2);
      slope_[k] = scale * a * secant;
      slope_[k + 1] = scale * b * secant;
    }
  }
}

double Reparameterization::tau(double s) const {
  if (s < s_.front() || s > s_.back()) {
    throw Error(ErrorKind::OutOfDomain, "s = " + std::to_string(s) + " outside the sampled mean-phase range");
  }
  auto it = std::upper_bound(s_.begin(), s_.end(), s);
  std::size_t k = static_cast<std::size_t>(std::distance(s_.begin(), it));
  k = k == 0 ? 0 : k - 1;
  if (k + 1 >= s_.size()) return t_.back();
  const double h = s_[k + 1] - s_[k];
  const double u = (s - s_[k]) / h;
  const double u2 = u * u;
  const double u3 = u2 * u;
  const double h00 = 2.0 * u3 - 3.0 * u2 + 1.0;
  const double h10 = u3 - 2.0 * u2 + u;
  const double h01 = -2.0 * u3 + 3.0 * u2;
  const double h11 = u3 - u2;
  return h00 * t_[k] + h10 * h * slope_[k] + h01 * t_[k + 1] + h11 * h * slope_[k + 1];
}

Reparameterization reparameterize(const Trajectory& traj) {
  const std::size_t n = traj.size();
  std::vector<double> s(n), rate(n);
  for (std::size_t k = 0; k < n; ++k) {
    const State x = traj.state(k);
    s[k] = phase_mean(x);
    rate[k] = phase_mean_rate(traj.model, x);
    if (!(rate[k] > 0.0)) {
      throw Error(ErrorKind::NotMonotone, "mean phase rate " + std::to_string(rate[k]) + " at t = " +
                                              std::to_string(traj.times[k]));
    }
    if (k > 0 && !(s[k] > s[k - 1])) {
      throw Error(ErrorKind::NotMonotone, "mean phase decreases at t = " + std::to_string(traj.times[k]));
    }
  }
  return Reparameterization(traj.times, std::move(s), std::move(rate));
}

// ---------------------------------------------------------------- checks

MeanDriftReport check_mean_drift_bound(const Trajectory& traj, const ParameterCertificate& cert) {
  MeanDriftReport report;
  report.bound = cert.gamma + cert.c_tilde * cert.kappa * cert.D;
  report.samples = traj.size();
  const ModelSpec& m = traj.model;
  for (std::size_t k = 0; k < traj.size(); ++k) {
    const State x = traj.state(k);
    const double mu = phase_mean(x);
    const CouplingValues cv = coupling_at(m, mu);
    const double dev = std::abs(1.0 - m.kappa * cv.P * cv.R - phase_mean_rate(m, x));
    report.max_deviation = std::max(report.max_deviation, dev);
  }
  report.pass = report.max_deviation < report.bound;
  return report;
}

InvarianceReport check_set_invariance(const ModelSpec& m, const ParameterCertificate& cert, const State& x0,
                                      double T, double dt, std::size_t stride) {
  stride = std::max<std::size_t>(stride, 1);
  const Membership start = in_invariant_set(x0, cert);
  if (!start.inside) {
    throw Error(ErrorKind::PreconditionViolated,
                "initial state is not in the invariant set (slack " + std::to_string(start.slack) + ")");
  }
  InvarianceReport report;
  report.sample_stride = stride;
  report.min_slack = std::numeric_limits<double>::infinity();
  const std::size_t total = step_count(T, dt);
  integrate_streaming(m, x0, T, dt, [&](std::size_t step, double t, const State& x) {
    if (step % stride != 0 && step != total) return;
    const Membership mb = in_invariant_set(x, cert);
    ++report.samples;
    report.max_spread = std::max(report.max_spread, mb.spread);
    if (mb.slack < report.min_slack) {
      report.min_slack = mb.slack;
      report.min_slack_time = t;
    }
  });
  report.pass = report.min_slack > 0.0;
  return report;
}

}  // namespace winfree
