#include "winfree/serialize.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

#include "winfree/error.hpp"

namespace winfree {

namespace {

Json number_or_null(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

double number_from(const Json& j, const char* key) {
  if (!j.contains(key)) throw Error(ErrorKind::ConfigError, std::string("missing key '") + key + "'");
  const Json& v = j.at(key);
  if (v.is_null()) return std::numeric_limits<double>::infinity();
  if (!v.is_number()) throw Error(ErrorKind::ConfigError, std::string("key '") + key + "' must be a number");
  return v.get<double>();
}

std::string verdict_name(DVerdict v) {
  switch (v) {
    case DVerdict::Admissible: return "admissible";
    case DVerdict::MarginNonPositive: return "margin_nonpositive";
    case DVerdict::DeltaExceedsD: return "delta_max_not_below_D";
  }
  return "unknown";
}

template <class Range>
Json decimated(const Range& v, std::size_t limit = 4096) {
  Json out = Json::array();
  const std::size_t step = std::max<std::size_t>(1, (v.size() + limit - 1) / limit);
  for (std::size_t k = 0; k < v.size(); k += step) out.push_back(v[k]);
  return out;
}

}  // namespace

Json to_json(const TrigPoly& p) { return Json{{"cos", p.cos_coeffs}, {"sin", p.sin_coeffs}}; }

TrigPoly trig_from_json(const Json& j) {
  if (!j.is_object()) throw Error(ErrorKind::ConfigError, "trigonometric polynomial must be an object");
  TrigPoly p;
  p.cos_coeffs = j.value("cos", std::vector<double>{0.0});
  p.sin_coeffs = j.value("sin", std::vector<double>{});
  if (p.cos_coeffs.empty()) p.cos_coeffs = {0.0};
  return p;
}

Json to_json(const ModelSpec& m) {
  return Json{{"P", to_json(m.pulse)},
              {"R", to_json(m.response)},
              {"n", m.n()},
              {"omega", std::vector<double>(m.omega.begin(), m.omega.end())},
              {"kappa", m.kappa},
              {"gamma", m.gamma}};
}

ModelSpec model_from_json(const Json& j) {
  try {
    ModelSpec m;
    if (j.contains("P")) m.pulse = trig_from_json(j.at("P"));
    if (j.contains("R")) m.response = trig_from_json(j.at("R"));
    m.kappa = number_from(j, "kappa");
    m.gamma = number_from(j, "gamma");
    const Json& om = j.contains("omega") ? j.at("omega") : Json(nullptr);
    if (om.is_array()) {
      const auto values = om.get<std::vector<double>>();
      m.omega = Eigen::Map<const Vector>(values.data(), static_cast<Eigen::Index>(values.size()));
      if (j.contains("n") && j.at("n").get<std::size_t>() != values.size()) {
        throw Error(ErrorKind::ConfigError, "'n' does not match the length of 'omega'");
      }
    } else {
      if (!j.contains("n")) throw Error(ErrorKind::ConfigError, "model needs 'n' when 'omega' is not a list");
      const auto n = j.at("n").get<std::size_t>();
      const std::uint64_t seed = om.is_object() ? om.value("seed", std::uint64_t{0}) : 0;
      m.omega = sample_frequencies(n, m.gamma, seed);
    }
    validate(m);
    return m;
  } catch (const Json::exception& e) {
    throw Error(ErrorKind::ConfigError, std::string("malformed model: ") + e.what());
  }
}

Json to_json(const ParameterCertificate& cert, std::size_t table_size) {
  std::vector<double> table(table_size);
  for (std::size_t k = 0; k < table_size; ++k) {
    table[k] = cert.delta_fn(kTwoPi * static_cast<double>(k) / static_cast<double>(table_size));
  }
  const TrigPoly* P = cert.P.trig();
  const TrigPoly* R = cert.R.trig();
  return Json{{"gamma", cert.gamma},
              {"kappa", cert.kappa},
              {"D", cert.D},
              {"kappa_star", number_or_null(cert.kappa_star)},
              {"c_tilde", cert.c_tilde},
              {"alpha", cert.alpha},
              {"margin", cert.margin},
              {"delta_max", cert.delta_max},
              {"delta_min", cert.delta_min},
              {"P", P ? to_json(*P) : Json(nullptr)},
              {"R", R ? to_json(*R) : Json(nullptr)},
              {"delta_table", table}};
}

ParameterCertificate certificate_from_json(const Json& j) {
  try {
    ParameterCertificate cert;
    cert.gamma = number_from(j, "gamma");
    cert.kappa = number_from(j, "kappa");
    cert.D = number_from(j, "D");
    cert.kappa_star = number_from(j, "kappa_star");
    cert.c_tilde = number_from(j, "c_tilde");
    cert.alpha = number_from(j, "alpha");
    cert.margin = number_from(j, "margin");
    cert.delta_max = number_from(j, "delta_max");
    cert.delta_min = number_from(j, "delta_min");
    cert.P = trig_from_json(j.at("P"));
    cert.R = trig_from_json(j.at("R"));
    const auto table = j.at("delta_table").get<std::vector<double>>();
    if (table.empty()) throw Error(ErrorKind::ConfigError, "empty delta_table");
    cert.delta_fn = delta_from_samples(table, cert.alpha, cert.kappa, cert.P, cert.R);
    return cert;
  } catch (const Json::exception& e) {
    throw Error(ErrorKind::ConfigError, std::string("malformed certificate: ") + e.what());
  }
}

Json to_json(const CertifyFailure& failure) {
  Json attempts = Json::array();
  for (const DAttempt& at : failure.attempts) {
    attempts.push_back(Json{{"D", at.D},
                            {"margin", at.margin},
                            {"alpha", number_or_null(at.alpha)},
                            {"delta_max", number_or_null(at.delta_max)},
                            {"verdict", verdict_name(at.verdict)}});
  }
  return Json{{"gamma", failure.gamma}, {"kappa", failure.kappa}, {"reason", failure.reason}, {"attempts", attempts}};
}

Json to_json(const HypothesisReport& report) {
  return Json{{"kappa_grid", report.kappa_grid},
              {"integral_values", report.integral_values},
              {"satisfied", report.satisfied}};
}

Json to_json(const InvarianceReport& r) {
  return Json{{"min_slack", r.min_slack},     {"min_slack_time", r.min_slack_time}, {"max_spread", r.max_spread},
              {"samples", r.samples},         {"sample_stride", r.sample_stride},   {"pass", r.pass}};
}

Json to_json(const MeanDriftReport& r) {
  return Json{{"max_deviation", r.max_deviation}, {"bound", r.bound}, {"samples", r.samples}, {"pass", r.pass}};
}

Json to_json(const ConeReport& r) {
  return Json{{"entered", r.entered},
              {"entry_time", number_or_null(r.entry_time)},
              {"bound", r.bound},
              {"margin_bound", r.margin_bound},
              {"within_bound", r.within_bound},
              {"persisted", r.persisted},
              {"min_entry_after", number_or_null(r.min_entry_after)},
              {"samples", r.samples},
              {"candidates_tested", r.candidates_tested},
              {"norm", "max"},
              {"pass", r.pass}};
}

Json to_json(const ReducedSystemReport& r) {
  return Json{{"s_grid", decimated(r.s_grid)},
              {"p_values", decimated(r.p_values)},
              {"beta_values", decimated(r.beta_values)},
              {"theta_values", decimated(r.theta_values)},
              {"matrix_bound_margin", r.bounds.margin},
              {"matrix_bound_margin_s", r.bounds.margin_s},
              {"max_correction_ratio", r.bounds.max_correction_ratio},
              {"samples", r.bounds.samples},
              {"theta_residual", r.theta_residual},
              {"pass", r.pass}};
}

Json to_json(const StabilityEstimate& e) {
  return Json{{"alpha_lower", e.alpha_lower}, {"r", e.r}, {"delta_ctrl", e.delta_ctrl}, {"lambda", number_or_null(e.lambda)}, {"norm", "max"}};
}

Json to_json(const FundamentalMatrixTrajectory& fm) {
  Json mats = Json::array();
  for (const Matrix& M : fm.matrices) {
    Json rows = Json::array();
    for (Eigen::Index i = 0; i < M.rows(); ++i) {
      std::vector<double> row(static_cast<std::size_t>(M.cols()));
      for (Eigen::Index c = 0; c < M.cols(); ++c) row[static_cast<std::size_t>(c)] = M(i, c);
      rows.push_back(row);
    }
    mats.push_back(rows);
  }
  return Json{{"times", fm.times}, {"matrices", mats}};
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_trajectory_csv(std::ostream& os, const Trajectory& traj) {
  os << "t";
  for (Eigen::Index i = 0; i < traj.phases.cols(); ++i) os << ",x_" << (i + 1);
  os << '\n';
  for (std::size_t k = 0; k < traj.size(); ++k) {
    os << format_double(traj.times[k]);
    for (Eigen::Index i = 0; i < traj.phases.cols(); ++i) os << ',' << format_double(traj.phases(static_cast<Eigen::Index>(k), i));
    os << '\n';
  }
}

}  // namespace winfree
