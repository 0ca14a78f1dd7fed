#pragma once

#include <string>
#include <variant>
#include <vector>

#include "winfree/model.hpp"
#include "winfree/periodic.hpp"
#include "winfree/random.hpp"

namespace winfree {

/// Everything that defines the invariant set
///   C = { x : max_ij |x_j − x_i| < Δ(mean x) }
/// for one (γ, κ) pair and coupling functions P, R.
struct ParameterCertificate {
  double gamma = 0.0;
  double kappa = 0.0;
  double D = 0.0;
  double kappa_star = 0.0;
  double c_tilde = 0.0;
  double alpha = 0.0;
  double margin = 0.0;     // 1 − γ − C̃κD − κ/κ*
  double delta_max = 0.0;  // max Δ over one period
  double delta_min = 0.0;
  PeriodicFunction delta_fn;
  PeriodicFunction P;
  PeriodicFunction R;
};

struct HypothesisReport {
  std::vector<double> kappa_grid;
  std::vector<double> integral_values;
  bool satisfied = false;
};

enum class DVerdict { Admissible, MarginNonPositive, DeltaExceedsD };

struct DAttempt {
  double D = 0.0;
  double margin = 0.0;
  double alpha = 0.0;      // NaN when the margin is not positive
  double delta_max = 0.0;  // NaN when the margin is not positive
  DVerdict verdict = DVerdict::MarginNonPositive;
};

struct CertifyFailure {
  double gamma = 0.0;
  double kappa = 0.0;
  std::string reason;
  std::vector<DAttempt> attempts;
};

using CertifyResult = std::variant<ParameterCertificate, CertifyFailure>;

struct CertifyOptions {
  GridSettings grid;
  double slack = 1e-10;        // strict inequalities are checked as ≥ slack
  double resolution = 1e-6;    // relative bisection resolution on D
  int grid_levels = 20;        // D ∈ {2^-1, …, 2^-levels}
};

/// 1 / max(P·R), or +∞ when P·R never becomes positive.
double compute_kappa_star(const PeriodicFunction& P, const PeriodicFunction& R, const GridSettings& grid = {});

/// 2 · Σ_{i,j ≤ 2} ‖P^(i)‖∞ ‖R^(j)‖∞.
double compute_c_tilde(const PeriodicFunction& P, const PeriodicFunction& R, const GridSettings& grid = {});

/// ∫₀^{2π} P R′ / (1 − κ P R). Throws SingularIntegrand when 1 − κPR < 1e−12 somewhere.
double hypothesis_integral(const PeriodicFunction& P, const PeriodicFunction& R, double kappa,
                           const GridSettings& grid = {});

/// Default grid: `count` geometric points from κ*/1000 to 0.999 κ*.
std::vector<double> default_kappa_grid(double kappa_star, std::size_t count = 64);

HypothesisReport check_hypothesis_H(const PeriodicFunction& P, const PeriodicFunction& R,
                                    const std::vector<double>& kappa_grid, const GridSettings& grid = {});

double compute_margin(double gamma, double kappa, double D, double c_tilde, double kappa_star);

/// α(γ, κ, D). Throws InvalidMargin if 1 − κ/κ* ≤ 0 or the margin is ≤ 0.
double compute_alpha(double gamma, double kappa, double D, double c_tilde, double kappa_star);

/// a(s) = κ P R′ / (1 − κ P R), the decay coefficient of the Δ equation.
PeriodicFunction delta_coefficient(const PeriodicFunction& P, const PeriodicFunction& R, double kappa);

/// Periodic solution of Δ′ = α − a Δ. Throws NonPositive if min Δ ≤ 0.
PeriodicFunction solve_delta(const PeriodicFunction& a, double alpha, const GridSettings& grid = {});
PeriodicFunction solve_delta(double gamma, double kappa, double D, const PeriodicFunction& P,
                             const PeriodicFunction& R, const GridSettings& grid = {});

/// Smallest admissible D and the resulting certificate, or the per-D
/// diagnostics when none exists. Throws OutOfDomain for γ ∉ (0,1) or κ ∉ (0, κ*).
CertifyResult certify_parameters(double gamma, double kappa, const PeriodicFunction& P,
                                 const PeriodicFunction& R, const CertifyOptions& options = {});

struct Membership {
  bool inside = false;
  double slack = 0.0;     // Δ(μ) − spread
  double spread = 0.0;
  double envelope = 0.0;  // Δ(μ)
};

Membership in_invariant_set(const State& x, const ParameterCertificate& cert);

/// Re-checks the certificate invariants from scratch at the given (typically
/// doubled) resolution.
struct CertificateCheck {
  double ode_residual = 0.0;
  double periodicity_gap = 0.0;
  double delta_min = 0.0;
  double delta_max = 0.0;
  double margin = 0.0;
  double resolve_difference = 0.0;  // max |Δ − Δ re-solved| on the dense grid
  bool pass = false;
};

CertificateCheck verify_certificate(const ParameterCertificate& cert, const GridSettings& grid,
                                    double slack = 1e-10);

/// Random state in C: mean phase uniform on [0, 2π), spread a uniform
/// fraction in [0.05, 0.95] of Δ at that mean.
State draw_state_in_set(const ParameterCertificate& cert, std::size_t n, SplitMix64& rng);

/// Rebuilds Δ from node values using the ODE for the node derivatives.
PeriodicFunction delta_from_samples(const std::vector<double>& values, double alpha, double kappa,
                                    const PeriodicFunction& P, const PeriodicFunction& R);

}  // namespace winfree
