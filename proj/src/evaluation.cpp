#include "cwm/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "cwm/errors.hpp"
#include "cwm/kernels.hpp"

namespace cwm {

double empirical_quantile(std::vector<double> values, double level) {
  std::erase_if(values, [](double v) { return !std::isfinite(v); });
  if (values.empty()) throw ValidationError("quantile of an empty sample");
  if (!(level >= 0.0 && level <= 1.0)) throw ValidationError("quantile level must lie in [0, 1]");
  std::sort(values.begin(), values.end());
  const double h = (static_cast<double>(values.size()) - 1.0) * level;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, values.size() - 1);
  return values[lo] + (h - static_cast<double>(lo)) * (values[hi] - values[lo]);
}

QuantileInterval kl_quantile_interval(const UnivariateGmm& truth, int n, int N, double level,
                                      const GmmFitConfig& fit, const Rng& rng) {
  truth.validate();
  if (N < 1) throw ValidationError("kl interval: N must be positive");
  if (!(level > 0.0 && level < 1.0)) throw ValidationError("kl interval: level must lie in (0, 1)");
  if (n <= 2 * fit.components) throw ValidationError("kl interval: n must exceed 2G");
  const std::vector<double> values = kernels::kl_replications(truth, n, N, fit, rng);
  QuantileInterval out;
  out.level = level;
  out.replications = N;
  out.skipped = static_cast<int>(std::count_if(values.begin(), values.end(), [](double v) { return std::isnan(v); }));
  if (out.skipped * 100 > N) {
    throw NumericalError("kl interval: " + std::to_string(out.skipped) + " of " + std::to_string(N) +
                         " replications failed to fit");
  }
  out.hi = empirical_quantile(values, level);
  return out;
}

RelativeDistance relative_distance(double kl, const QuantileInterval& interval) {
  if (!(interval.hi > 0.0)) throw ValidationError("relative distance undefined for an interval ending at 0");
  if (!(interval.lo <= interval.hi)) throw ValidationError("interval bounds out of order");
  RelativeDistance d;
  if (kl <= interval.hi) {
    d.within = true;
  } else {
    d.ratio = kl / interval.hi;
  }
  return d;
}

KlReport evaluate_values(const std::string& method, const Vector& values, const UnivariateGmm& truth,
                         const QuantileInterval& interval, const GmmFitConfig& fit, Rng& rng) {
  KlReport r;
  r.method = method;
  r.fit = fit_gmm_em(values, fit, rng).model;
  r.kl = kl_divergence(truth, r.fit);
  r.interval = interval;
  r.distance = relative_distance(r.kl, interval);
  return r;
}

UnivariateGmm response_marginal(const MixtureWeights& weights, std::span<const JointComponent> components) {
  weights.validate();
  if (static_cast<int>(components.size()) != weights.size()) {
    throw ValidationError("response marginal: weight / component count mismatch");
  }
  UnivariateGmm m;
  const auto G = static_cast<Eigen::Index>(components.size());
  m.weights = weights.alpha;
  m.means.resize(G);
  m.variances.resize(G);
  for (Eigen::Index g = 0; g < G; ++g) {
    const auto& c = components[static_cast<std::size_t>(g)];
    const Eigen::Index last = c.mu_w.size() - 1;
    m.means[g] = c.mu_w[last];
    m.variances[g] = c.sigma_w(last, last);
  }
  m.validate();
  return m;
}

}  // namespace cwm
