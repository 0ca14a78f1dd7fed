#pragma once

#include <iosfwd>
#include <string>

#include <json.hpp>

#include "winfree/analysis.hpp"
#include "winfree/certify.hpp"
#include "winfree/flow.hpp"
#include "winfree/model.hpp"

namespace winfree {

using Json = nlohmann::json;

/// {"cos": [c0, c1, ...], "sin": [s1, s2, ...]}
Json to_json(const TrigPoly& p);
TrigPoly trig_from_json(const Json& j);

/// {"P": trig, "R": trig, "n": int, "omega": [..] | {"seed": int}, "kappa": x, "gamma": x}.
/// P and R default to 1 + cos and sin when absent.
Json to_json(const ModelSpec& m);
ModelSpec model_from_json(const Json& j);

/// Scalars, P, R and Δ as a table of `table_size` node values on s_k = 2πk/N.
Json to_json(const ParameterCertificate& cert, std::size_t table_size = 4096);
/// Δ is rebuilt from the table with node derivatives taken from its ODE.
ParameterCertificate certificate_from_json(const Json& j);

Json to_json(const CertifyFailure& failure);
Json to_json(const HypothesisReport& report);
Json to_json(const InvarianceReport& report);
Json to_json(const MeanDriftReport& report);
Json to_json(const ConeReport& report);
Json to_json(const ReducedSystemReport& report);
Json to_json(const StabilityEstimate& est);
Json to_json(const FundamentalMatrixTrajectory& fm);

std::string format_double(double v);  // 17 significant digits

/// Header `t,x_1,...,x_n`, one row per stored sample.
void write_trajectory_csv(std::ostream& os, const Trajectory& traj);

}  // namespace winfree
