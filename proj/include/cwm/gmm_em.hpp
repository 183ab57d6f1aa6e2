#pragma once

#include <vector>

#include "cwm/linalg.hpp"
#include "cwm/rng.hpp"

namespace cwm {

/// Univariate Gaussian mixture.
struct UnivariateGmm {
  Vector weights;
  Vector means;
  Vector variances;

  int size() const noexcept { return static_cast<int>(weights.size()); }
  void validate() const;
  double logpdf(double x) const;
  double mean() const;
  double variance() const;
  Vector sample(int n, Rng& rng) const;
};

struct GmmFitConfig {
  int components = 2;
  int restarts = 5;
  /// Stop when the relative change of the log-likelihood drops below tol.
  double tol = 1e-8;
  int max_iter = 1000;
  /// A run collapses when a variance falls below this times the sample variance.
  double variance_floor_ratio = 1e-6;

  void validate() const;
};

struct GmmFit {
  UnivariateGmm model;
  double log_likelihood = 0.0;
  /// Log-likelihood before each M step of the returned run, then the final value.
  std::vector<double> trace;
  int iterations = 0;
  bool converged = false;
  /// Runs abandoned because a variance collapsed.
  int collapsed_runs = 0;
};

/// Best of `restarts` EM runs. Attempt 0 starts from quantile blocks of the
/// sorted data, later attempts from randomly chosen data points. Collapsed
/// runs are retried with a fresh start; NumericalError if every try collapses.
GmmFit fit_gmm_em(const Vector& y, const GmmFitConfig& config, Rng& rng);

}  // namespace cwm
