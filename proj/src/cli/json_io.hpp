#pragma once

#include <json.hpp>

#include "cwm/evaluation.hpp"
#include "cwm/gibbs.hpp"
#include "cwm/scenarios.hpp"

namespace cwm::cli {

using json = nlohmann::ordered_json;

json to_json(const Vector& v);
json to_json(const Matrix& m);
Vector vector_from_json(const json& j, const std::string& what);
Matrix matrix_from_json(const json& j, const std::string& what);

json to_json(const Hyperparams& h);
json to_json(const McmcConfig& c);
json to_json(const UnivariateGmm& m);
UnivariateGmm gmm_from_json(const json& j);

json to_json(const MixtureSpec& spec);
MixtureSpec spec_from_json(const json& j);

/// Cluster indices and variables are written 1-based / by column name.
json to_json(const MissingnessRule& rule, const std::vector<std::string>& columns);
MissingnessRule rule_from_json(const json& j, const std::vector<std::string>& columns);

/// Scenario file: {"name", "spec" (optional), "faithful": bool, "rule", "columns"}.
Scenario scenario_from_json(const json& j);

json to_json(const QuantileInterval& q);
QuantileInterval interval_from_json(const json& j);

/// One chain record: the retained state with 1-based labels.
json state_record(int iteration, const GibbsState& s);

json read_json_file(const std::string& path);
void write_json_file(const std::string& path, const json& j);

}  // namespace cwm::cli
