#pragma once

// Imputers: the mixture model (cwm) and the comparison methods norm, mean
// and pmm. Every imputer leaves observed responses untouched.

#include <string>
#include <vector>

#include "cwm/dataset.hpp"
#include "cwm/gibbs.hpp"
#include "cwm/rng.hpp"

namespace cwm {

struct ImputeResult {
  /// Length n: observed y where present, imputations elsewhere.
  Vector y_completed;
  /// Imputations in missing-row order.
  Vector y_fill;
  /// Component (0-based) of every row, or empty when the method has none.
  std::vector<int> labels;
  std::vector<std::string> warnings;
};

/// Bayesian linear regression with an intercept under the noninformative
/// prior p(beta, sigma2) proportional to 1 / sigma2: sigma2 from a scaled
/// inverse chi-square, then beta* ~ N(beta_hat, sigma2 (X'X)^-1), then
/// y_mis ~ N(x beta*, sigma2). Requires d >= 1 and n_obs > d + 1.
ImputeResult impute_norm(const MissingDataset& data, Rng& rng);

struct PmmConfig {
  int donors = 5;
  void validate() const;
};

/// Predictive mean matching, type 1: observed rows are scored with
/// beta_hat, missing rows with a posterior draw beta*, and every missing row
/// copies the observed y of a donor picked uniformly among the `donors`
/// closest scores. Shrinks the pool (with a warning) when there are fewer
/// observed rows than donors.
ImputeResult impute_pmm(const MissingDataset& data, const PmmConfig& config, Rng& rng);

struct ChainImputation {
  ImputeResult result;
  Chain chain;
};

/// Mixture imputation: runs the sampler and returns the MAP state's
/// imputations and labels.
ChainImputation impute_cwm(const MissingDataset& data, const HyperOverrides& hyper, const McmcConfig& config,
                           const StateSink& sink = {});

/// Marginal mixture on y alone (covariates dropped); labels come from alpha.
ChainImputation impute_mean(const MissingDataset& data, const HyperOverrides& hyper, const McmcConfig& config,
                            const StateSink& sink = {});

}  // namespace cwm
