#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "winfree/certify.hpp"
#include "winfree/flow.hpp"

namespace winfree {

// Reduced linear system along a trajectory, after the change of time
// t ↦ s = μ_x(t) and the exponential rescaling of the linearized flow:
//   d/ds ỹ = Ã(x, s) ỹ,   Ã = A(s𝟙)/(1 − κPR) + H(x, s).

/// p(s) = −(1/n) κ P′(s) R(s) / (1 − κ P(s) R(s)).
PeriodicFunction p_function(const ParameterCertificate& cert, std::size_t n);
/// β(s) = (1 − κ/κ*) / (1 − κ P R) · α / (2 n D).
PeriodicFunction beta_function(const ParameterCertificate& cert, std::size_t n);
/// θ(s) = (1 − κ/κ*) / (1 − κ P R) · Δ(s).
PeriodicFunction theta_function(const ParameterCertificate& cert);

/// max |θ′ + n p θ − 2 n D β| on `grid` points offset from the Δ table nodes.
double verify_theta_ode(const ParameterCertificate& cert, std::size_t n, std::size_t grid = 4096);

struct ReducedSample {
  double t = 0.0;
  double s = 0.0;
  double rate = 0.0;  // μ̇ from the exact field average
  Matrix reduced;     // Ã(x, s)
  Matrix correction;  // H(x, s)
};

/// Ã and H at every stored sample. Throws NotMonotone via reparameterize.
std::vector<ReducedSample> reduced_matrix(const ModelSpec& m, const Trajectory& traj,
                                          const ParameterCertificate& cert);

struct MatrixBoundReport {
  double margin = 0.0;  // min_s β(s) − max{p − ã_ij, |ã_ij − ã_kl|}
  double margin_s = 0.0;
  double max_correction_ratio = 0.0;  // max |h_ij| / β
  std::size_t samples = 0;
  bool pass = false;
};

MatrixBoundReport check_matrix_bounds(const std::vector<ReducedSample>& samples, const PeriodicFunction& p,
                                      const PeriodicFunction& beta);

struct ReducedSystemReport {
  std::vector<double> s_grid;
  std::vector<double> p_values;
  std::vector<double> beta_values;
  std::vector<double> theta_values;
  MatrixBoundReport bounds;
  double theta_residual = 0.0;
  bool pass = false;
};

ReducedSystemReport reduced_system_report(const ModelSpec& m, const Trajectory& traj,
                                          const ParameterCertificate& cert);

// ---------------------------------------------------------------- cone V₊

struct ConeOptions {
  double eps = 1e-10;        // relative: entries ≥ −eps · max |entry|
  std::size_t stride = 100;  // integration steps between stored matrices
};

struct ConeReport {
  bool entered = false;
  double entry_time = 0.0;      // first stored t_x with M(t)M(t_x)⁻¹ ≥ −ε for all later stored t
  double bound = 0.0;           // τ_x(s₀ + 2π)
  double margin_bound = 0.0;    // 2π / m
  bool within_bound = false;
  bool persisted = false;
  double min_entry_after = 0.0; // min over t ≥ t_x of min entry / max |entry|
  std::size_t samples = 0;
  std::size_t candidates_tested = 0;
  bool pass = false;
};

/// Searches stored candidate times t ≤ window in increasing order.
ConeReport find_cone_entry(const FundamentalMatrixTrajectory& fm, double window, double eps);

/// Throws PreconditionViolated when x0 is not in C.
ConeReport check_cone_invariance(const ModelSpec& m, const ParameterCertificate& cert, const State& x0, double T,
                                 double dt, const ConeOptions& options = {});

// ---------------------------------------------------------------- stability

struct StabilityEstimate {
  double alpha_lower = 0.0;  // lower bound on every phase velocity (= margin)
  double r = 0.0;            // common bound on ‖F‖∞ and ‖dF‖∞
  double delta_ctrl = 0.0;   // control time in t units
  double lambda = 0.0;
};

/// (1/α) r e^{r δ}.
double lipschitz_lambda(double alpha_lower, double r, double delta_ctrl);
StabilityEstimate stability_constant(const ParameterCertificate& cert);

/// max over stored times of ‖Φ^t x0 − Φ^t y0‖∞ / ‖x0 − y0‖∞.
double empirical_lipschitz(const ModelSpec& m, const ParameterCertificate& cert, const State& x0, const State& y0,
                           double T, double dt, std::size_t stride = 10);

struct RotationEstimate {
  Vector rho;
  double fit_start = 0.0;
  double fit_end = 0.0;
  double spread() const { return rho.size() ? rho.maxCoeff() - rho.minCoeff() : 0.0; }
};

/// Least-squares slope of every phase over the trailing half of the samples.
RotationEstimate rotation_vector(const Trajectory& traj);

// ---------------------------------------------------------------- comparison harness

/// Standalone linear system ẏ = A(t) y with the comparison data (p, β, d)
/// used to certify invariance of V₊ independently of the Winfree model.
struct ComparisonSystem {
  std::function<Matrix(double)> A;
  PeriodicFunction p;
  PeriodicFunction beta;
  std::size_t n = 1;
  double d = 1.0;
};

struct ComparisonReport {
  double hypothesis_margin = 0.0;  // min_t β − max{p − a_ij, |a_ij − a_kl|}
  double theta_min = 0.0;
  double theta_max = 0.0;
  bool hypotheses_hold = false;    // margin > 0, θ > 0, max θ < d
  ConeReport cone;
};

/// θ solves θ′ = −n p θ + 2 n d β; the cone search window is one period.
ComparisonReport verify_comparison(const ComparisonSystem& sys, double T, double dt, const ConeOptions& options = {},
                                   const GridSettings& grid = {});

}  // namespace winfree
