#include "winfree/model.hpp"

#include <cmath>
#include <string>

#include "winfree/error.hpp"
#include "winfree/random.hpp"

namespace winfree {

void validate(const ModelSpec& m) {
  if (m.n() == 0) throw Error(ErrorKind::ConfigError, "model needs at least one oscillator");
  if (!(m.kappa >= 0.0 && m.kappa < 1.0)) {
    throw Error(ErrorKind::OutOfDomain, "kappa must lie in [0, 1), got " + std::to_string(m.kappa));
  }
  if (!(m.gamma >= 0.0 && m.gamma < 1.0)) {
    throw Error(ErrorKind::OutOfDomain, "gamma must lie in [0, 1), got " + std::to_string(m.gamma));
  }
  for (Eigen::Index i = 0; i < m.omega.size(); ++i) {
    const double w = m.omega[i];
    if (!std::isfinite(w) || w < 1.0 - m.gamma || w > 1.0 + m.gamma) {
      throw Error(ErrorKind::OutOfDomain, "omega[" + std::to_string(i) + "] = " + std::to_string(w) +
                                              " outside [1-gamma, 1+gamma]");
    }
  }
}

Vector sample_frequencies(std::size_t n, double gamma, std::uint64_t seed) {
  SplitMix64 rng(seed);
  Vector omega(static_cast<Eigen::Index>(n));
  for (auto& w : omega) w = (1.0 - gamma) + 2.0 * gamma * rng.uniform_open();
  return omega;
}

ModelSpec default_model(Vector omega, double kappa, double gamma) {
  ModelSpec m;
  m.omega = std::move(omega);
  m.kappa = kappa;
  m.gamma = gamma;
  return m;
}

CouplingValues coupling_at(const ModelSpec& m, double phase) {
  const double r = wrap_phase(phase);
  const double c = std::cos(r);
  const double s = std::sin(r);
  const Jet p = m.pulse.jet_from(c, s);
  const Jet q = m.response.jet_from(c, s);
  return {p.value, p.d1, q.value, q.d1};
}

double mean_field(const ModelSpec& m, const State& x) {
  double acc = 0.0;
  for (double xi : x) acc += coupling_at(m, xi).P;
  return acc / static_cast<double>(x.size());
}

void vector_field(const ModelSpec& m, const State& x, Vector& out) {
  const Eigen::Index n = x.size();
  out.resize(n);
  double sigma = 0.0;
  // out temporarily holds R(x_i)
  for (Eigen::Index i = 0; i < n; ++i) {
    const CouplingValues cv = coupling_at(m, x[i]);
    sigma += cv.P;
    out[i] = cv.R;
  }
  sigma /= static_cast<double>(n);
  for (Eigen::Index i = 0; i < n; ++i) out[i] = m.omega[i] - m.kappa * sigma * out[i];
}

Vector vector_field(const ModelSpec& m, const State& x) {
  Vector out;
  vector_field(m, x, out);
  return out;
}

Matrix jacobian(const ModelSpec& m, const State& x) {
  const Eigen::Index n = x.size();
  Vector dP(n), R(n), dR(n);
  double sigma = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const CouplingValues cv = coupling_at(m, x[i]);
    sigma += cv.P;
    dP[i] = cv.dP;
    R[i] = cv.R;
    dR[i] = cv.dR;
  }
  sigma /= static_cast<double>(n);
  const double c = -m.kappa / static_cast<double>(n);
  Matrix J = c * R * dP.transpose();  // a_ij = −(1/n) κ P′(x_j) R(x_i)
  J.diagonal() -= m.kappa * sigma * dR;
  return J;
}

double phase_mean(const State& x) { return x.mean(); }

double phase_mean_rate(const ModelSpec& m, const State& x) {
  Vector f;
  vector_field(m, x, f);
  return f.mean();
}

}  // namespace winfree
