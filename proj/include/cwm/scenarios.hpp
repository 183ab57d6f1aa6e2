#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "cwm/dataset.hpp"
#include "cwm/model.hpp"
#include "cwm/rng.hpp"

namespace cwm {

/// Joint Gaussian mixture used to generate data; covariates first, response last.
struct MixtureSpec {
  Vector weights;
  std::vector<Vector> means;
  std::vector<Matrix> covariances;
  int n = 0;

  int size() const noexcept { return static_cast<int>(weights.size()); }
  int p() const noexcept { return means.empty() ? 0 : static_cast<int>(means.front().size()); }
  void validate() const;
  std::vector<JointComponent> components() const;
};

// Cluster indices are 0-based; `variable` indexes the joint vector w, so the
// response is variable d.

/// Each row of cluster g is masked independently with probability rates[g].
struct McarByCluster {
  std::vector<double> rates;
};

/// Exactly round(rate * m) of the m rows with w[variable] > cutoff are
/// masked, chosen without replacement.
struct MnarThreshold {
  int variable = 0;
  double cutoff = 0.0;
  double rate = 0.0;
};

/// Row i is masked with probability 1 / (1 + exp(-(beta0 + beta1 y_i))).
struct MnarLogistic {
  double beta0 = 0.0;
  double beta1 = 0.0;
};

/// Every row of `cluster` with w[variable] > cutoff is masked.
struct Censor {
  int variable = 0;
  double cutoff = 0.0;
  int cluster = 0;
};

using MissingnessRule = std::variant<McarByCluster, MnarThreshold, MnarLogistic, Censor>;

std::string rule_kind(const MissingnessRule& rule);

struct GeneratedData {
  /// Complete data (nothing masked).
  MissingDataset data;
  /// True cluster of every row; empty for real data. Never handed to imputers.
  std::vector<int> labels;
};

GeneratedData gen_mixture_dataset(const MixtureSpec& spec, Rng& rng);

/// Masks y per `rule`; X is never touched. Cluster rules need `labels`.
MissingDataset apply_missingness(const MissingDataset& data, const std::vector<int>& labels,
                                 const MissingnessRule& rule, Rng& rng);

/// Old Faithful eruptions: covariate waiting, response eruptions. Verifies
/// the file checksum (IoError on mismatch or read failure).
MissingDataset load_faithful(const std::string& path = "");
std::string default_faithful_path();

struct Scenario {
  std::string name;
  /// Empty for the Faithful data.
  std::optional<MixtureSpec> spec;
  MissingnessRule rule;
  std::vector<std::string> column_names;
};

/// paper-mar, paper-mnar-threshold, paper-censored, faithful-mnar.
Scenario builtin_scenario(const std::string& name);
std::vector<std::string> builtin_scenario_names();

struct SimulatedScenario {
  MissingDataset data;
  std::vector<int> labels;
  /// Responses before masking.
  Vector complete_y;
};

SimulatedScenario simulate_scenario(const Scenario& scenario, std::uint64_t seed);

}  // namespace cwm
