#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cwm/baselines.hpp"
#include "cwm/gibbs.hpp"
#include "json_io.hpp"

namespace cwm::cli {

enum class Method { Cwm, Norm, Mean, Pmm };
Method parse_method(const std::string& name);
std::string method_name(Method m);

struct RunConfig {
  Method method = Method::Cwm;
  HyperOverrides hyper;
  McmcConfig mcmc;
  std::optional<int> donors;
  std::string data;
  std::string out = ".";
  std::string response;
  /// Empty means every column except the response.
  std::vector<std::string> inputs;
  bool emit_chain = false;
  bool emit_grid = false;
  int grid_size = 200;

  void validate() const;
};

/// Applies a config JSON object. Keys mirror the Hyperparams and McmcConfig
/// field names; they may sit at the top level or under "hyper" / "mcmc".
/// Unknown keys are rejected.
void apply_config(const json& j, RunConfig& cfg);

}  // namespace cwm::cli
