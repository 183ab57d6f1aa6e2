#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "config.hpp"

namespace cwm::cli {

struct SimulateOptions {
  std::string scenario;
  /// Scenario JSON file; used instead of a builtin name when set.
  std::string spec_file;
  std::uint64_t seed = 1;
  std::string out = ".";
};

/// Writes data.csv and truth.json.
void cmd_simulate(const SimulateOptions& opt);

/// Writes imputed.csv and diagnostics.json, plus chain.jsonl / grid.csv on request.
void cmd_impute(const RunConfig& cfg);

struct EvaluateOptions {
  std::string truth;
  /// Each entry is a path or label=path.
  std::vector<std::string> inputs;
  int replications = 1000;
  double level = 0.95;
  std::uint64_t seed = 1;
  std::string out = ".";
  /// "completed" fits g to the whole completed variable, "imputed" to the
  /// imputed values only.
  std::string fit_on = "completed";
  std::string interval_cache;
};

/// Writes report.json and report.csv; returns false if any input failed.
bool cmd_evaluate(const EvaluateOptions& opt);

struct DiagnoseOptions {
  std::string chain;
  std::string out = ".";
};

/// Writes trace.csv and diagnose.json; returns the warnings.
std::vector<std::string> cmd_diagnose(const DiagnoseOptions& opt);

/// Entry point of the cwm-impute executable; returns the exit code.
int run(int argc, char** argv);

inline constexpr int kChainSchemaVersion = 1;

}  // namespace cwm::cli
