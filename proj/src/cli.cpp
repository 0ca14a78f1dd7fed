#include "winfree/cli.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <limits>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "winfree/analysis.hpp"
#include "winfree/error.hpp"
#include "winfree/flow.hpp"
#include "winfree/parallel.hpp"
#include "winfree/serialize.hpp"

namespace winfree::cli {

namespace {

using nlohmann::json;

constexpr int kExitPass = 0;
constexpr int kExitError = 1;
constexpr int kExitFail = 2;

template <class T>
void read_key(const json& j, const char* key, T& target) {
  if (!j.contains(key)) return;
  try {
    target = j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw Error(ErrorKind::ConfigError, std::string("bad value for '") + key + "': " + e.what());
  }
}

template <class T>
void read_key(const json& j, const char* key, std::optional<T>& target) {
  if (!j.contains(key)) return;
  T value{};
  read_key(j, key, value);
  target = std::move(value);
}

void read_omega(const json& j, RunConfig& c) {
  if (!j.contains("omega")) return;
  const json& om = j.at("omega");
  if (om.is_object()) {
    std::uint64_t s = 0;
    read_key(om, "seed", s);
    c.omega_seed = s;
    c.omega.reset();
  } else {
    read_key(j, "omega", c.omega);
    c.omega_seed.reset();
  }
}

std::filesystem::path prepare_dir(const RunConfig& c) {
  const std::filesystem::path dir(c.output_dir);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error(ErrorKind::ConfigError, "cannot create output directory '" + c.output_dir + "': " + ec.message());
  return dir;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error(ErrorKind::ConfigError, "cannot write '" + path.string() + "'");
  os << text;
}

void write_json(const std::filesystem::path& path, const json& j) { write_text(path, j.dump(2) + "\n"); }

std::string fmt(double v) { return format_double(v); }

double kappa_star_of(const RunConfig& c) { return compute_kappa_star(pulse_of(c), response_of(c)); }

void require_below_lock(const RunConfig& c) {
  const double ks = kappa_star_of(c);
  if (!(c.kappa >= 0.0) || !(c.kappa < ks)) {
    throw Error(ErrorKind::OutOfDomain, "kappa = " + fmt(c.kappa) + " is outside [0, kappa*) with kappa* = " + fmt(ks));
  }
}

State initial_state(const RunConfig& c, std::size_t n) {
  if (!c.x0) return State::Zero(static_cast<Eigen::Index>(n));
  if (c.x0->size() != n) throw Error(ErrorKind::ConfigError, "x0 has " + std::to_string(c.x0->size()) + " entries, expected " + std::to_string(n));
  return Eigen::Map<const Vector>(c.x0->data(), static_cast<Eigen::Index>(n));
}

// Certifies (γ, κ); on failure writes certify_failure.json and reports it.
std::optional<ParameterCertificate> certify_or_report(const RunConfig& c, const std::filesystem::path& dir,
                                                      const char* check, std::ostream& out) {
  CertifyResult res = certify_parameters(c.gamma, c.kappa, pulse_of(c), response_of(c));
  if (auto* cert = std::get_if<ParameterCertificate>(&res)) return std::move(*cert);
  const auto& failure = std::get<CertifyFailure>(res);
  write_json(dir / "certify_failure.json", to_json(failure));
  out << "FAIL " << check << ": no certificate at gamma=" << fmt(c.gamma) << " kappa=" << fmt(c.kappa) << " ("
      << failure.reason << ")\n";
  return std::nullopt;
}

int cmd_certify(const RunConfig& c, std::ostream& out) {
  const auto dir = prepare_dir(c);
  auto cert = certify_or_report(c, dir, "certify", out);
  if (!cert) return kExitFail;
  write_json(dir / "certificate.cert.json", to_json(*cert));
  out << "PASS certify: D=" << fmt(cert->D) << " margin=" << fmt(cert->margin) << " max_delta=" << fmt(cert->delta_max)
      << "\n";
  return kExitPass;
}

int cmd_check_h(const RunConfig& c, std::ostream& out) {
  const auto dir = prepare_dir(c);
  const PeriodicFunction P = pulse_of(c), R = response_of(c);
  const double ks = compute_kappa_star(P, R);
  const std::vector<double> grid = c.kappa_grid.empty() ? default_kappa_grid(ks) : c.kappa_grid;
  for (double k : grid) {
    if (!(k > 0.0 && k < ks)) throw Error(ErrorKind::OutOfDomain, "kappa grid value " + fmt(k) + " outside (0, kappa*)");
  }
  const HypothesisReport report = check_hypothesis_H(P, R, grid);
  json j = to_json(report);
  j["kappa_star"] = ks;
  write_json(dir / "hypothesis.json", j);
  const double lowest = report.integral_values.empty()
                            ? std::numeric_limits<double>::quiet_NaN()
                            : *std::min_element(report.integral_values.begin(), report.integral_values.end());
  out << (report.satisfied ? "PASS" : "FAIL") << " check-h: min integral=" << fmt(lowest) << " over "
      << grid.size() << " kappa values\n";
  return report.satisfied ? kExitPass : kExitFail;
}

int cmd_delta(const RunConfig& c, std::ostream& out) {
  const auto dir = prepare_dir(c);
  const PeriodicFunction P = pulse_of(c), R = response_of(c);
  double D = 0.0;
  PeriodicFunction delta;
  if (c.D) {
    D = *c.D;
    delta = solve_delta(c.gamma, c.kappa, D, P, R);
  } else {
    auto cert = certify_or_report(c, dir, "delta", out);
    if (!cert) return kExitFail;
    D = cert->D;
    delta = cert->delta_fn;
  }
  const double ks = compute_kappa_star(P, R);
  const double margin = compute_margin(c.gamma, c.kappa, D, compute_c_tilde(P, R), ks);
  constexpr std::size_t kRows = 4096;
  std::ostringstream csv;
  csv << "s,delta\n";
  double top = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < kRows; ++k) {
    const double s = kTwoPi * static_cast<double>(k) / static_cast<double>(kRows);
    const double v = delta(s);
    top = std::max(top, v);
    csv << fmt(s) << ',' << fmt(v) << '\n';
  }
  write_text(dir / "delta.csv", csv.str());
  const Extremum mx = maximize(delta);
  const bool ok = margin > 0.0 && mx.value < D;
  out << (ok ? "PASS" : "FAIL") << " delta: D=" << fmt(D) << " max_delta=" << fmt(mx.value)
      << " margin=" << fmt(margin) << "\n";
  return ok ? kExitPass : kExitFail;
}

int cmd_simulate(const RunConfig& c, std::ostream& out) {
  require_below_lock(c);
  const auto dir = prepare_dir(c);
  const ModelSpec m = model_of(c);
  const Trajectory traj = integrate(m, initial_state(c, m.n()), c.T, c.dt, c.stride);
  std::ostringstream csv;
  write_trajectory_csv(csv, traj);
  write_text(dir / "trajectory.csv", csv.str());
  out << "PASS simulate: n=" << m.n() << " steps=" << step_count(c.T, c.dt) << " samples=" << traj.size() << "\n";
  return kExitPass;
}

int cmd_rotation(const RunConfig& c, std::ostream& out) {
  require_below_lock(c);
  const auto dir = prepare_dir(c);
  const ModelSpec m = model_of(c);
  const Trajectory traj = integrate(m, initial_state(c, m.n()), c.T, c.dt, c.stride);
  const RotationEstimate est = rotation_vector(traj);
  std::ostringstream csv;
  csv << "oscillator,rho\n";
  for (Eigen::Index i = 0; i < est.rho.size(); ++i) csv << (i + 1) << ',' << fmt(est.rho[i]) << '\n';
  write_text(dir / "rotation.csv", csv.str());
  out << "PASS rotation: spread=" << fmt(est.spread()) << " fit=[" << fmt(est.fit_start) << ", " << fmt(est.fit_end)
      << "]\n";
  return kExitPass;
}

template <class Report, class Run>
std::vector<Report> over_draws(const RunConfig& c, const ParameterCertificate& cert, Run&& run) {
  const PeriodicFunction P = pulse_of(c), R = response_of(c);
  return map_indexed<Report>(c.draws, [&](std::size_t k) {
    const Instance inst = draw_instance(cert, P, R, c.n, c.seed, k);
    return run(inst, k);
  });
}

int cmd_invariance(const RunConfig& c, std::ostream& out) {
  const auto dir = prepare_dir(c);
  auto cert = certify_or_report(c, dir, "invariance", out);
  if (!cert) return kExitFail;
  const auto reports = over_draws<InvarianceReport>(c, *cert, [&](const Instance& inst, std::size_t) {
    return check_set_invariance(inst.model, *cert, inst.x0, c.T, c.dt, c.stride);
  });
  json runs = json::array();
  bool all = true;
  double worst = std::numeric_limits<double>::infinity();
  for (const auto& r : reports) {
    runs.push_back(to_json(r));
    all = all && r.pass;
    worst = std::min(worst, r.min_slack);
  }
  write_json(dir / "invariance.json", json{{"n", c.n}, {"T", c.T}, {"dt", c.dt}, {"D", cert->D}, {"runs", runs}, {"pass", all}});
  out << (all ? "PASS" : "FAIL") << " invariance: min slack=" << fmt(worst) << " over " << reports.size() << " draws\n";
  return all ? kExitPass : kExitFail;
}

int cmd_cone(const RunConfig& c, std::ostream& out) {
  const auto dir = prepare_dir(c);
  auto cert = certify_or_report(c, dir, "cone", out);
  if (!cert) return kExitFail;
  const ConeOptions opts{c.cone_eps, c.stride};
  const auto reports = over_draws<ConeReport>(c, *cert, [&](const Instance& inst, std::size_t) {
    return check_cone_invariance(inst.model, *cert, inst.x0, c.T, c.dt, opts);
  });
  json runs = json::array();
  bool all = true;
  double latest = 0.0;
  for (const auto& r : reports) {
    runs.push_back(to_json(r));
    all = all && r.pass;
    latest = std::max(latest, r.entered ? r.entry_time : std::numeric_limits<double>::infinity());
  }
  write_json(dir / "cone.json", json{{"n", c.n}, {"T", c.T}, {"dt", c.dt}, {"eps", c.cone_eps}, {"runs", runs}, {"pass", all}});
  out << (all ? "PASS" : "FAIL") << " cone: latest entry=" << fmt(latest) << " over " << reports.size() << " draws\n";
  return all ? kExitPass : kExitFail;
}

int cmd_bounds(const RunConfig& c, std::ostream& out) {
  const auto dir = prepare_dir(c);
  auto cert = certify_or_report(c, dir, "bounds", out);
  if (!cert) return kExitFail;
  const auto reports = over_draws<ReducedSystemReport>(c, *cert, [&](const Instance& inst, std::size_t) {
    const Trajectory traj = integrate(inst.model, inst.x0, c.T, c.dt, c.stride);
    return reduced_system_report(inst.model, traj, *cert);
  });
  json runs = json::array();
  bool all = true;
  double worst = std::numeric_limits<double>::infinity();
  for (const auto& r : reports) {
    runs.push_back(to_json(r));
    all = all && r.pass;
    worst = std::min(worst, r.bounds.margin);
  }
  write_json(dir / "bounds.json", json{{"n", c.n}, {"T", c.T}, {"dt", c.dt}, {"runs", runs}, {"pass", all}});
  out << (all ? "PASS" : "FAIL") << " bounds: min margin=" << fmt(worst) << " over " << reports.size() << " draws\n";
  return all ? kExitPass : kExitFail;
}

int cmd_lipschitz(const RunConfig& c, std::ostream& out) {
  const auto dir = prepare_dir(c);
  auto cert = certify_or_report(c, dir, "lipschitz", out);
  if (!cert) return kExitFail;
  const StabilityEstimate est = stability_constant(*cert);
  const auto ratios = over_draws<double>(c, *cert, [&](const Instance& inst, std::size_t k) {
    const State y0 = draw_partner(*cert, inst.x0, c.seed, k);
    return empirical_lipschitz(inst.model, *cert, inst.x0, y0, c.T, c.dt, c.stride);
  });
  const double sup = ratios.empty() ? 0.0 : *std::max_element(ratios.begin(), ratios.end());
  const bool ok = sup <= est.lambda;
  write_json(dir / "lipschitz.json", json{{"n", c.n},
                                          {"T", c.T},
                                          {"dt", c.dt},
                                          {"stability", to_json(est)},
                                          {"ratios", ratios},
                                          {"empirical_sup", sup},
                                          {"pass", ok}});
  out << (ok ? "PASS" : "FAIL") << " lipschitz: sup ratio=" << fmt(sup) << " lambda=" << fmt(est.lambda) << "\n";
  return ok ? kExitPass : kExitFail;
}

struct SweepRow {
  double gamma = 0.0, kappa = 0.0;
  bool certified = false;
  bool suite_run = false;
  bool invariance = false, cone = false;
  double lipschitz_sup = 0.0;
};

SweepRow sweep_cell(const RunConfig& c, double gamma, double kappa) {
  SweepRow row{gamma, kappa};
  const PeriodicFunction P = pulse_of(c), R = response_of(c);
  std::optional<ParameterCertificate> cert;
  try {
    CertifyResult res = certify_parameters(gamma, kappa, P, R);
    if (auto* ok = std::get_if<ParameterCertificate>(&res)) cert = std::move(*ok);
  } catch (const Error&) {
    return row;
  }
  if (!cert) return row;
  row.certified = true;
  if (c.instances == 0) return row;
  row.suite_run = true;
  row.invariance = row.cone = true;
  const ConeOptions opts{c.cone_eps, c.stride};
  for (std::size_t k = 0; k < c.instances; ++k) {
    const Instance inst = draw_instance(*cert, P, R, c.n, c.seed, k);
    try {
      row.invariance = row.invariance && check_set_invariance(inst.model, *cert, inst.x0, c.T, c.dt, c.stride).pass;
    } catch (const Error&) {
      row.invariance = false;
    }
    try {
      row.cone = row.cone && check_cone_invariance(inst.model, *cert, inst.x0, c.T, c.dt, opts).pass;
    } catch (const Error&) {
      row.cone = false;
    }
    try {
      const State y0 = draw_partner(*cert, inst.x0, c.seed, k);
      row.lipschitz_sup =
          std::max(row.lipschitz_sup, empirical_lipschitz(inst.model, *cert, inst.x0, y0, c.T, c.dt, c.stride));
    } catch (const Error&) {
      row.lipschitz_sup = std::numeric_limits<double>::infinity();
    }
  }
  return row;
}

int cmd_sweep(const RunConfig& c, std::ostream& out) {
  const auto dir = prepare_dir(c);
  const std::size_t nk = c.kappa_grid.size();
  const std::size_t cells = c.gamma_grid.size() * nk;
  // Cells are ordered gamma-major; each owns its row, merged in grid order.
  const auto rows = map_indexed<SweepRow>(cells, [&](std::size_t idx) {
    return sweep_cell(c, c.gamma_grid[idx / nk], c.kappa_grid[idx % nk]);
  });
  std::ostringstream csv;
  csv << "gamma,kappa,certified,invariance_pass,cone_pass,lipschitz_sup\n";
  std::size_t certified = 0;
  for (const auto& r : rows) {
    certified += r.certified ? 1 : 0;
    csv << fmt(r.gamma) << ',' << fmt(r.kappa) << ',' << (r.certified ? 1 : 0) << ',';
    if (r.suite_run) {
      csv << (r.invariance ? 1 : 0) << ',' << (r.cone ? 1 : 0) << ',' << fmt(r.lipschitz_sup);
    } else {
      csv << ",,";
    }
    csv << '\n';
  }
  write_text(dir / "sweep.csv", csv.str());
  out << "PASS sweep: " << certified << " of " << cells << " cells certified\n";
  return kExitPass;
}

}  // namespace

void apply_json(RunConfig& c, const json& j) {
  if (!j.is_object()) throw Error(ErrorKind::ConfigError, "config must be a JSON object");
  if (j.contains("model")) {
    const json& m = j.at("model");
    if (!m.is_object()) throw Error(ErrorKind::ConfigError, "'model' must be an object");
    for (const char* key : {"P", "R"}) {
      if (m.contains(key)) c.model[key] = m.at(key);
    }
    read_key(m, "gamma", c.gamma);
    read_key(m, "kappa", c.kappa);
    read_key(m, "n", c.n);
    read_omega(m, c);
  }
  read_key(j, "gamma", c.gamma);
  read_key(j, "kappa", c.kappa);
  read_key(j, "n", c.n);
  read_omega(j, c);
  read_key(j, "x0", c.x0);
  read_key(j, "T", c.T);
  read_key(j, "dt", c.dt);
  read_key(j, "seed", c.seed);
  read_key(j, "output_dir", c.output_dir);
  read_key(j, "stride", c.stride);
  read_key(j, "draws", c.draws);
  read_key(j, "instances", c.instances);
  read_key(j, "D", c.D);
  read_key(j, "gamma_grid", c.gamma_grid);
  read_key(j, "kappa_grid", c.kappa_grid);
  read_key(j, "workers", c.workers);
  read_key(j, "cone_eps", c.cone_eps);
}

void validate(const RunConfig& c) {
  if (!(c.dt > 0.0)) throw Error(ErrorKind::ConfigError, "dt must be positive");
  if (!(c.T >= c.dt)) throw Error(ErrorKind::ConfigError, "T must be at least dt");
  if (!(c.cone_eps > 0.0)) throw Error(ErrorKind::ConfigError, "cone_eps must be positive");
  if (c.stride == 0) throw Error(ErrorKind::ConfigError, "stride must be at least 1");
  if (c.n == 0) throw Error(ErrorKind::ConfigError, "n must be at least 1");
  if (c.D && !(*c.D > 0.0 && *c.D < 1.0)) throw Error(ErrorKind::ConfigError, "D must lie in (0, 1)");
  if (c.workers < 0) throw Error(ErrorKind::ConfigError, "workers must be non-negative");
}

PeriodicFunction pulse_of(const RunConfig& c) {
  return c.model.contains("P") ? trig_from_json(c.model.at("P")) : ModelSpec::default_pulse();
}

PeriodicFunction response_of(const RunConfig& c) {
  return c.model.contains("R") ? trig_from_json(c.model.at("R")) : ModelSpec::default_response();
}

ModelSpec model_of(const RunConfig& c) {
  ModelSpec m;
  if (c.model.contains("P")) m.pulse = trig_from_json(c.model.at("P"));
  if (c.model.contains("R")) m.response = trig_from_json(c.model.at("R"));
  m.kappa = c.kappa;
  m.gamma = c.gamma;
  if (c.omega) {
    m.omega = Eigen::Map<const Vector>(c.omega->data(), static_cast<Eigen::Index>(c.omega->size()));
  } else {
    m.omega = sample_frequencies(c.n, c.gamma, c.omega_seed.value_or(c.seed));
  }
  winfree::validate(m);
  return m;
}

Instance draw_instance(const ParameterCertificate& cert, const PeriodicFunction& P, const PeriodicFunction& R,
                       std::size_t n, std::uint64_t seed, std::size_t index) {
  Instance inst;
  if (const TrigPoly* p = P.trig()) inst.model.pulse = *p;
  if (const TrigPoly* r = R.trig()) inst.model.response = *r;
  inst.model.kappa = cert.kappa;
  inst.model.gamma = cert.gamma;
  inst.model.omega = sample_frequencies(n, cert.gamma, derive_seed(seed, 3 * index));
  SplitMix64 rng(derive_seed(seed, 3 * index + 1));
  inst.x0 = draw_state_in_set(cert, n, rng);
  return inst;
}

State draw_partner(const ParameterCertificate& cert, const State& x0, std::uint64_t seed, std::size_t index) {
  SplitMix64 rng(derive_seed(seed, 3 * index + 2));
  if (index % 2 == 0) return draw_state_in_set(cert, static_cast<std::size_t>(x0.size()), rng);
  double scale = std::pow(10.0, -2.0 - static_cast<double>((index / 2) % 5)) * cert.delta_fn(phase_mean(x0));
  for (int attempt = 0; attempt < 60; ++attempt, scale *= 0.5) {
    State y = x0;
    for (auto& v : y) v += scale * rng.uniform(-1.0, 1.0);
    if (in_invariant_set(y, cert).inside && (y - x0).lpNorm<Eigen::Infinity>() > 0.0) return y;
  }
  throw Error(ErrorKind::PreconditionViolated, "no perturbation of x0 stays inside the invariant set");
}

int run_subcommand(const std::string& name, const RunConfig& config, std::ostream& out, std::ostream& err) {
  try {
    validate(config);
    if (config.workers > 0) set_worker_count(config.workers);
    if (name == "certify") return cmd_certify(config, out);
    if (name == "check-h") return cmd_check_h(config, out);
    if (name == "delta") return cmd_delta(config, out);
    if (name == "simulate") return cmd_simulate(config, out);
    if (name == "invariance") return cmd_invariance(config, out);
    if (name == "cone") return cmd_cone(config, out);
    if (name == "bounds") return cmd_bounds(config, out);
    if (name == "lipschitz") return cmd_lipschitz(config, out);
    if (name == "rotation") return cmd_rotation(config, out);
    if (name == "sweep") return cmd_sweep(config, out);
    throw Error(ErrorKind::ConfigError, "unknown subcommand '" + name + "'");
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
  }
  return kExitError;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Winfree model synchronization certificates", "winfree"};
  app.fallthrough();
  app.require_subcommand(1, 1);

  std::string config_path;
  double gamma = 0, kappa = 0, T = 0, dt = 0, D = 0, cone_eps = 0;
  std::size_t n = 0, stride = 0, draws = 0, instances = 0;
  std::uint64_t seed = 0;
  int workers = 0;
  std::string output_dir;
  std::vector<double> gamma_grid, kappa_grid, omega, x0;

  app.add_option("--config", config_path, "JSON config file")->check(CLI::ExistingFile);
  auto* o_gamma = app.add_option("--gamma", gamma, "frequency spread");
  auto* o_kappa = app.add_option("--kappa", kappa, "coupling strength");
  auto* o_n = app.add_option("--n", n, "number of oscillators");
  auto* o_seed = app.add_option("--seed", seed, "base random seed");
  auto* o_T = app.add_option("--T", T, "integration horizon");
  auto* o_dt = app.add_option("--dt", dt, "integration step");
  auto* o_dir = app.add_option("--output-dir", output_dir, "directory for emitted files");
  auto* o_workers = app.add_option("--workers", workers, "worker threads");
  auto* o_stride = app.add_option("--stride", stride, "integration steps between stored samples");
  auto* o_draws = app.add_option("--draws", draws, "random draws per check");
  auto* o_inst = app.add_option("--instances", instances, "random instances per sweep cell");
  auto* o_gg = app.add_option("--gamma-grid", gamma_grid, "comma-separated gamma values")->delimiter(',');
  auto* o_kg = app.add_option("--kappa-grid", kappa_grid, "comma-separated kappa values")->delimiter(',');
  auto* o_omega = app.add_option("--omega", omega, "comma-separated natural frequencies")->delimiter(',');
  auto* o_x0 = app.add_option("--x0", x0, "comma-separated initial phases")->delimiter(',');
  auto* o_D = app.add_option("--D", D, "fixed D for the delta subcommand");
  auto* o_eps = app.add_option("--cone-eps", cone_eps, "relative cone tolerance");

  for (const char* name : {"certify", "check-h", "delta", "simulate", "invariance", "cone", "bounds", "lipschitz",
                           "rotation", "sweep"}) {
    app.add_subcommand(name, std::string("run ") + name);
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitPass : kExitError;
  }

  RunConfig c;
  try {
    if (!config_path.empty()) {
      std::ifstream is(config_path);
      json j;
      try {
        j = json::parse(is);
      } catch (const json::exception& e) {
        throw Error(ErrorKind::ConfigError, "cannot parse '" + config_path + "': " + e.what());
      }
      apply_json(c, j);
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitError;
  }
  if (o_gamma->count()) c.gamma = gamma;
  if (o_kappa->count()) c.kappa = kappa;
  if (o_n->count()) c.n = n;
  if (o_seed->count()) c.seed = seed;
  if (o_T->count()) c.T = T;
  if (o_dt->count()) c.dt = dt;
  if (o_dir->count()) c.output_dir = output_dir;
  if (o_workers->count()) c.workers = workers;
  if (o_stride->count()) c.stride = stride;
  if (o_draws->count()) c.draws = draws;
  if (o_inst->count()) c.instances = instances;
  if (o_gg->count()) c.gamma_grid = gamma_grid;
  if (o_kg->count()) c.kappa_grid = kappa_grid;
  if (o_omega->count()) {
    c.omega = omega;
    c.omega_seed.reset();
  }
  if (o_x0->count()) c.x0 = x0;
  if (o_D->count()) c.D = D;
  if (o_eps->count()) c.cone_eps = cone_eps;

  const auto subs = app.get_subcommands();
  return run_subcommand(subs.front()->get_name(), c, out, err);
}

}  // namespace winfree::cli
