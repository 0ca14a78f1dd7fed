#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "winfree/certify.hpp"
#include "winfree/model.hpp"

namespace winfree::cli {

/// One run's settings. Loaded from a JSON file (snake_case keys), then
/// overridden by kebab-case flags of the same name.
struct RunConfig {
  nlohmann::json model = nlohmann::json::object();  // ModelSpec JSON; gamma/kappa/n/omega may also sit at top level
  double gamma = 1e-3;
  double kappa = 0.05;
  std::size_t n = 10;
  std::optional<std::vector<double>> omega;
  std::optional<std::uint64_t> omega_seed;  // "omega": {"seed": k}; defaults to `seed`
  std::optional<std::vector<double>> x0;
  double T = 10.0 * kTwoPi;
  double dt = 1e-3;
  std::uint64_t seed = 0;
  std::string output_dir = ".";
  std::size_t stride = 100;
  std::size_t draws = 20;
  std::size_t instances = 0;   // sweep: random instances per certified cell
  std::optional<double> D;     // delta: fixed D instead of the certified one
  std::vector<double> gamma_grid;
  std::vector<double> kappa_grid;
  int workers = 0;             // 0 keeps WINFREE_WORKERS / the OpenMP default
  double cone_eps = 1e-10;
};

/// Applies the keys present in `j` on top of `config`. Throws ConfigError.
void apply_json(RunConfig& config, const nlohmann::json& j);

/// Structural checks; throws ConfigError (dt > 0, T ≥ dt, positive tolerances).
void validate(const RunConfig& config);

/// P and R from the config's model block, γ and κ from the config.
PeriodicFunction pulse_of(const RunConfig& config);
PeriodicFunction response_of(const RunConfig& config);

/// Model with explicit ω if given, else sample_frequencies(n, γ, seed).
ModelSpec model_of(const RunConfig& config);

/// Random draw number `index`: ω from sample_frequencies with a derived seed,
/// x0 ∈ C from draw_state_in_set with another derived seed.
struct Instance {
  ModelSpec model;
  State x0;
};
Instance draw_instance(const ParameterCertificate& cert, const PeriodicFunction& P, const PeriodicFunction& R,
                       std::size_t n, std::uint64_t seed, std::size_t index);

/// Second point of a Lipschitz pair, inside C: every other pair is an
/// independent draw, the rest are perturbations of x0 at scales 1e-2 … 1e-6 of Δ.
State draw_partner(const ParameterCertificate& cert, const State& x0, std::uint64_t seed, std::size_t index);

/// Exit status: 0 pass, 2 failed check, 1 operational error.
int run_subcommand(const std::string& name, const RunConfig& config, std::ostream& out, std::ostream& err);

/// Full command line (without the program name).
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace winfree::cli
