#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cwm/gmm_em.hpp"
#include "cwm/kl.hpp"
#include "cwm/model.hpp"
#include "cwm/rng.hpp"

namespace cwm {

/// Reference band (lo, hi) of KL values; lo is pinned at 0.
struct QuantileInterval {
  double lo = 0.0;
  double hi = 0.0;
  double level = 0.95;
  int replications = 0;
  int skipped = 0;
};

/// Draws N samples of size n from `truth`, refits each by EM and takes the
/// `level` quantile (type 7) of KL(truth, fit). Replications whose fit fails
/// are skipped; NumericalError if more than 1% fail.
QuantileInterval kl_quantile_interval(const UnivariateGmm& truth, int n, int N, double level,
                                      const GmmFitConfig& fit, const Rng& rng);

/// Type-7 empirical quantile of finite values.
double empirical_quantile(std::vector<double> values, double level);

struct RelativeDistance {
  bool within = false;
  /// kl / hi; set only outside the interval.
  std::optional<double> ratio;
};

/// WI when kl <= hi, else kl / hi. ValidationError when hi <= 0.
RelativeDistance relative_distance(double kl, const QuantileInterval& interval);

struct KlReport {
  std::string method;
  std::string source;
  double kl = 0.0;
  QuantileInterval interval;
  RelativeDistance distance;
  UnivariateGmm fit;
};

/// Fits g to `values` and compares it with `truth`.
KlReport evaluate_values(const std::string& method, const Vector& values, const UnivariateGmm& truth,
                         const QuantileInterval& interval, const GmmFitConfig& fit, Rng& rng);

/// Marginal of the response (last coordinate) of a joint Gaussian mixture.
UnivariateGmm response_marginal(const MixtureWeights& weights, std::span<const JointComponent> components);

}  // namespace cwm
