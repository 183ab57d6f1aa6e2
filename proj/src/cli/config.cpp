#include "config.hpp"

#include "cwm/errors.hpp"

namespace cwm::cli {

Method parse_method(const std::string& name) {
  if (name == "cwm") return Method::Cwm;
  if (name == "norm") return Method::Norm;
  if (name == "mean") return Method::Mean;
  if (name == "pmm") return Method::Pmm;
  throw ValidationError("unknown method '" + name + "' (expected cwm, norm, mean or pmm)");
}

std::string method_name(Method m) {
  switch (m) {
    case Method::Cwm:
      return "cwm";
    case Method::Norm:
      return "norm";
    case Method::Mean:
      return "mean";
    case Method::Pmm:
      return "pmm";
  }
  return "cwm";
}

void RunConfig::validate() const {
  if (donors && method != Method::Pmm) throw ValidationError("--donors only applies to --method pmm");
  if (donors && *donors < 1) throw ValidationError("--donors must be at least 1");
  if (emit_chain && (method == Method::Norm || method == Method::Pmm)) {
    throw ValidationError("--emit-chain needs a sampler method (cwm or mean)");
  }
  if (emit_grid && method != Method::Cwm) throw ValidationError("--emit-grid needs --method cwm");
  if (grid_size < 2) throw ValidationError("grid size must be at least 2");
  mcmc.validate();
}

namespace {

bool apply_key(const std::string& key, const json& v, RunConfig& cfg) {
  HyperOverrides& h = cfg.hyper;
  McmcConfig& m = cfg.mcmc;
  if (key == "G") h.G = v.get<int>();
  else if (key == "mu0") h.mu0 = vector_from_json(v, key);
  else if (key == "h") h.h = v.get<double>();
  else if (key == "f") h.f = v.get<double>();
  else if (key == "a_eta") h.a_eta = v.get<double>();
  else if (key == "b_eta") h.b_eta = v.get<double>();
  else if (key == "a_delta") h.a_delta = v.get<double>();
  else if (key == "b_delta") h.b_delta = vector_from_json(v, key);
  else if (key == "fixed_delta") h.fixed_delta = vector_from_json(v, key);
  else if (key == "burn_in") m.burn_in = v.get<int>();
  else if (key == "target_ess") m.target_ess = v.get<double>();
  else if (key == "max_iterations") m.max_iterations = v.get<int>();
  else if (key == "thin") m.thin = v.get<int>();
  else if (key == "seed") m.seed = v.get<std::uint64_t>();
  else if (key == "check_every") m.check_every = v.get<int>();
  else if (key == "monitor") {
    m.monitor.clear();
    for (const auto& name : v) m.monitor.push_back(parse_monitor(name.get<std::string>()));
  } else if (key == "method") cfg.method = parse_method(v.get<std::string>());
  else if (key == "donors") cfg.donors = v.get<int>();
  else if (key == "data") cfg.data = v.get<std::string>();
  else if (key == "out") cfg.out = v.get<std::string>();
  else if (key == "response") cfg.response = v.get<std::string>();
  else if (key == "inputs") cfg.inputs = v.get<std::vector<std::string>>();
  else if (key == "emit_chain") cfg.emit_chain = v.get<bool>();
  else if (key == "emit_grid") cfg.emit_grid = v.get<bool>();
  else if (key == "grid_size") cfg.grid_size = v.get<int>();
  else return false;
  return true;
}

}  // namespace

void apply_config(const json& j, RunConfig& cfg) {
  if (!j.is_object()) throw ValidationError("config: expected a JSON object");
  try {
    for (const auto& [key, value] : j.items()) {
      if ((key == "hyper" || key == "mcmc") && value.is_object()) {
        for (const auto& [k, v] : value.items()) {
          if (!apply_key(k, v, cfg)) throw ValidationError("config: unknown key '" + key + "." + k + "'");
        }
      } else if (!apply_key(key, value, cfg)) {
        throw ValidationError("config: unknown key '" + key + "'");
      }
    }
  } catch (const json::exception& e) {
    throw ValidationError(std::string("config: ") + e.what());
  }
}

}  // namespace cwm::cli
