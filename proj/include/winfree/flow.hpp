#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "winfree/certify.hpp"
#include "winfree/model.hpp"

namespace winfree {

/// Sampled solution of the Winfree flow. Row k of `phases` is the state at
/// times[k]; samples are every `stride`-th integration step plus the final one.
struct Trajectory {
  ModelSpec model;
  std::vector<double> times;
  Matrix phases;  // rows: samples, cols: oscillators
  double dt = 0.0;
  std::size_t stride = 1;

  std::size_t size() const { return times.size(); }
  State state(std::size_t k) const { return phases.row(static_cast<Eigen::Index>(k)).transpose(); }
  State final_state() const { return state(size() - 1); }
};

/// Solution of Ṁ = dF(Φ^t x0) M with M(0) = I on the same sample grid.
struct FundamentalMatrixTrajectory {
  std::vector<double> times;
  std::vector<Matrix> matrices;
};

/// Step index and time of a sample, delivered to streaming observers.
using StateObserver = std::function<void(std::size_t step, double t, const State& x)>;
using VariationalObserver = std::function<void(std::size_t step, double t, const State& x, const Matrix& M)>;

/// Number of steps: ⌊T/dt⌋ full steps, plus one partial step when T is not a
/// multiple of dt (relative tolerance 1e−9).
std::size_t step_count(double T, double dt);

/// Classical fixed-step RK4. The observer sees step 0 (t = 0) and every step
/// after it; throws NonFinite if a phase stops being finite.
void integrate_streaming(const ModelSpec& m, const State& x0, double T, double dt, const StateObserver& observer);
Trajectory integrate(const ModelSpec& m, const State& x0, double T, double dt, std::size_t stride = 1);

/// State and fundamental matrix advanced as one augmented RK4 system.
void integrate_variational_streaming(const ModelSpec& m, const State& x0, double T, double dt,
                                     const VariationalObserver& observer);
std::pair<Trajectory, FundamentalMatrixTrajectory> integrate_variational(const ModelSpec& m, const State& x0,
                                                                        double T, double dt,
                                                                        std::size_t stride = 1);

/// The homeomorphism t ↦ s = μ_x(t) and its inverse τ_x, sampled on a
/// trajectory. τ_x uses monotone cubic Hermite interpolation with the exact
/// slopes dt/ds = 1/μ̇.
class Reparameterization {
 public:
  Reparameterization(std::vector<double> times, std::vector<double> s_grid, std::vector<double> rates);

  const std::vector<double>& s_grid() const { return s_; }
  const std::vector<double>& times() const { return t_; }
  const std::vector<double>& rates() const { return rate_; }
  double s_begin() const { return s_.front(); }
  double s_end() const { return s_.back(); }
  /// Inverse map; throws OutOfDomain outside the sampled s range.
  double tau(double s) const;

 private:
  std::vector<double> t_;
  std::vector<double> s_;
  std::vector<double> rate_;   // μ̇ at samples
  std::vector<double> slope_;  // limited dt/ds
};

/// Throws NotMonotone if μ does not strictly increase or μ̇ ≤ 0 at a sample.
Reparameterization reparameterize(const Trajectory& traj);

struct MeanDriftReport {
  double max_deviation = 0.0;  // max |1 − κP(μ)R(μ) − μ̇|
  double bound = 0.0;          // γ + C̃κD
  std::size_t samples = 0;
  bool pass = false;
};

MeanDriftReport check_mean_drift_bound(const Trajectory& traj, const ParameterCertificate& cert);

struct InvarianceReport {
  double min_slack = 0.0;
  double min_slack_time = 0.0;
  double max_spread = 0.0;
  std::size_t samples = 0;
  std::size_t sample_stride = 1;  // integration steps between checked samples
  bool pass = false;
};

/// Integrates from x0 and evaluates membership in C every `stride` steps.
/// Throws PreconditionViolated when x0 is not in C.
InvarianceReport check_set_invariance(const ModelSpec& m, const ParameterCertificate& cert, const State& x0,
                                      double T, double dt, std::size_t stride = 1);

}  // namespace winfree
