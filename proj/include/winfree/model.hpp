#pragma once

#include <cstdint>

#include <Eigen/Dense>

#include "winfree/periodic.hpp"

namespace winfree {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Phases on the real line, never reduced mod 2π.
using State = Vector;

/// ẋ_i = ω_i − κ σ(x) R(x_i), σ(x) = (1/n) Σ_j P(x_j).
struct ModelSpec {
  TrigPoly pulse = default_pulse();        // P
  TrigPoly response = default_response();  // R
  Vector omega;                            // natural frequencies, size n
  double kappa = 0.0;
  double gamma = 0.0;

  std::size_t n() const { return static_cast<std::size_t>(omega.size()); }
  PeriodicFunction P() const { return pulse; }
  PeriodicFunction R() const { return response; }

  static TrigPoly default_pulse() { return TrigPoly{{1.0, 1.0}, {}}; }  // 1 + cos
  static TrigPoly default_response() { return TrigPoly{{0.0}, {1.0}}; }  // sin
};

/// Structural checks: n ≥ 1, finite ω, κ ∈ [0, 1), γ ∈ [0, 1), ω_i ∈ [1−γ, 1+γ].
/// κ = 0 and γ = 0 are allowed here; certification rejects them.
void validate(const ModelSpec& m);

/// n values i.i.d. uniform on (1−γ, 1+γ): ω_i = (1−γ) + 2γ·u_i with u_i the
/// successive SplitMix64::uniform_open() draws of SplitMix64(seed).
Vector sample_frequencies(std::size_t n, double gamma, std::uint64_t seed);

ModelSpec default_model(Vector omega, double kappa, double gamma);

double mean_field(const ModelSpec& m, const State& x);
void vector_field(const ModelSpec& m, const State& x, Vector& out);
Vector vector_field(const ModelSpec& m, const State& x);
Matrix jacobian(const ModelSpec& m, const State& x);
double phase_mean(const State& x);
/// μ̇ = (1/n) Σ_i (ω_i − κσ(x)R(x_i)).
double phase_mean_rate(const ModelSpec& m, const State& x);

/// P, P′, R, R′ at one phase, sharing a single sin/cos evaluation.
struct CouplingValues {
  double P, dP, R, dR;
};
CouplingValues coupling_at(const ModelSpec& m, double phase);

}  // namespace winfree
