#include "cwm/gmm_em.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "cwm/distributions.hpp"
#include "cwm/errors.hpp"

namespace cwm {

namespace {

constexpr double kLog2Pi = 1.8378770664093454836;

double component_logpdf(double x, double mean, double var) {
  const double r = x - mean;
  return -0.5 * (kLog2Pi + std::log(var) + r * r / var);
}

struct Start {
  Vector weights;
  Vector means;
  Vector variances;
};

Start quantile_start(const Vector& y, int G) {
  std::vector<double> sorted(y.data(), y.data() + y.size());
  std::sort(sorted.begin(), sorted.end());
  const auto n = sorted.size();
  Start s{Vector::Constant(G, 1.0 / G), Vector(G), Vector(G)};
  for (int g = 0; g < G; ++g) {
    const std::size_t lo = n * static_cast<std::size_t>(g) / static_cast<std::size_t>(G);
    const std::size_t hi = n * static_cast<std::size_t>(g + 1) / static_cast<std::size_t>(G);
    double m = 0.0;
    for (std::size_t i = lo; i < hi; ++i) m += sorted[i];
    m /= static_cast<double>(hi - lo);
    double v = 0.0;
    for (std::size_t i = lo; i < hi; ++i) v += (sorted[i] - m) * (sorted[i] - m);
    s.means[g] = m;
    s.variances[g] = v / static_cast<double>(hi - lo);
  }
  return s;
}

Start random_start(const Vector& y, int G, double sample_var, Rng& rng) {
  Start s{Vector::Constant(G, 1.0 / G), Vector(G), Vector::Constant(G, sample_var)};
  std::vector<std::size_t> picked;
  for (int g = 0; g < G; ++g) {
    std::size_t i = rng.index(static_cast<std::size_t>(y.size()));
    for (int tries = 0; tries < 20 && std::find(picked.begin(), picked.end(), i) != picked.end(); ++tries) {
      i = rng.index(static_cast<std::size_t>(y.size()));
    }
    picked.push_back(i);
    s.means[g] = y[static_cast<Eigen::Index>(i)];
  }
  return s;
}

struct RunResult {
  UnivariateGmm model;
  std::vector<double> trace;
  int iterations = 0;
  bool converged = false;
  bool collapsed = false;
};

RunResult run_em(const Vector& y, Start start, const GmmFitConfig& cfg, double floor) {
  const int G = cfg.components;
  const Eigen::Index n = y.size();
  RunResult out;
  UnivariateGmm& m = out.model;
  m.weights = std::move(start.weights);
  m.means = std::move(start.means);
  m.variances = std::move(start.variances);
  if ((m.variances.array() < floor).any()) {
    out.collapsed = true;
    return out;
  }

  Matrix resp(n, G);
  std::vector<double> row(static_cast<std::size_t>(G));
  double prev = -std::numeric_limits<double>::infinity();
  for (int iter = 0; iter < cfg.max_iter; ++iter) {
    // E step
    double ll = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      for (int g = 0; g < G; ++g) {
        row[static_cast<std::size_t>(g)] = std::log(m.weights[g]) + component_logpdf(y[i], m.means[g], m.variances[g]);
      }
      ll += normalize_log_weights(row);
      for (int g = 0; g < G; ++g) resp(i, g) = row[static_cast<std::size_t>(g)];
    }
    out.trace.push_back(ll);
    out.iterations = iter;
    if (std::isfinite(prev) && std::abs(ll - prev) < cfg.tol * std::abs(ll)) {
      out.converged = true;
      return out;
    }
    prev = ll;

    // M step
    for (int g = 0; g < G; ++g) {
      const double ng = resp.col(g).sum();
      if (!(ng > 0.0)) {
        out.collapsed = true;
        return out;
      }
      const double mean = resp.col(g).dot(y) / ng;
      const double var = (resp.col(g).array() * (y.array() - mean).square()).sum() / ng;
      m.weights[g] = ng / static_cast<double>(n);
      m.means[g] = mean;
      m.variances[g] = var;
      if (!(var >= floor)) {
        out.collapsed = true;
        return out;
      }
    }
  }
  out.iterations = cfg.max_iter;
  // log-likelihood of the final parameters
  double ll = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) ll += m.logpdf(y[i]);
  out.trace.push_back(ll);
  return out;
}

}  // namespace

void UnivariateGmm::validate() const {
  const Eigen::Index G = weights.size();
  if (G < 1 || means.size() != G || variances.size() != G) {
    throw ValidationError("gmm: weights, means and variances must have the same positive length");
  }
  if (!weights.allFinite() || !means.allFinite() || !variances.allFinite()) {
    throw ValidationError("gmm: non-finite parameter");
  }
  if ((weights.array() < 0.0).any() || std::abs(weights.sum() - 1.0) > 1e-9) {
    throw ValidationError("gmm: weights must be nonnegative and sum to 1");
  }
  if ((variances.array() <= 0.0).any()) throw ValidationError("gmm: variances must be positive");
}

double UnivariateGmm::logpdf(double x) const {
  double top = -std::numeric_limits<double>::infinity();
  for (int g = 0; g < size(); ++g) {
    if (weights[g] > 0.0) top = std::max(top, std::log(weights[g]) + component_logpdf(x, means[g], variances[g]));
  }
  if (!std::isfinite(top)) return top;
  double sum = 0.0;
  for (int g = 0; g < size(); ++g) {
    if (weights[g] > 0.0) sum += std::exp(std::log(weights[g]) + component_logpdf(x, means[g], variances[g]) - top);
  }
  return top + std::log(sum);
}

double UnivariateGmm::mean() const { return weights.dot(means); }

double UnivariateGmm::variance() const {
  const double m = mean();
  return (weights.array() * (variances.array() + (means.array() - m).square())).sum();
}

Vector UnivariateGmm::sample(int n, Rng& rng) const {
  Vector out(n);
  const std::span<const double> w(weights.data(), static_cast<std::size_t>(weights.size()));
  for (int i = 0; i < n; ++i) {
    const auto g = static_cast<Eigen::Index>(sample_categorical(w, rng));
    out[i] = means[g] + std::sqrt(variances[g]) * rng.normal();
  }
  return out;
}

void GmmFitConfig::validate() const {
  if (components < 1) throw ValidationError("gmm fit: components must be positive");
  if (restarts < 1) throw ValidationError("gmm fit: restarts must be positive");
  if (!(tol > 0.0)) throw ValidationError("gmm fit: tol must be positive");
  if (max_iter < 1) throw ValidationError("gmm fit: max_iter must be positive");
  if (!(variance_floor_ratio > 0.0)) throw ValidationError("gmm fit: variance floor must be positive");
}

GmmFit fit_gmm_em(const Vector& y, const GmmFitConfig& config, Rng& rng) {
  config.validate();
  const int G = config.components;
  if (y.size() <= 2 * G) throw ValidationError("gmm fit: need more than 2G observations");
  if (!y.allFinite()) throw ValidationError("gmm fit: non-finite observation");
  const double mean = y.mean();
  const double sample_var = (y.array() - mean).square().sum() / static_cast<double>(y.size());
  if (!(sample_var > 0.0)) throw NumericalError("gmm fit: data have zero variance");
  const double floor = config.variance_floor_ratio * sample_var;

  GmmFit best;
  best.log_likelihood = -std::numeric_limits<double>::infinity();
  int completed = 0;
  const int max_tries = 4 * config.restarts;
  for (int attempt = 0; attempt < max_tries && completed < config.restarts; ++attempt) {
    Start start = attempt == 0 ? quantile_start(y, G) : random_start(y, G, sample_var, rng);
    RunResult run = run_em(y, std::move(start), config, floor);
    if (run.collapsed) {
      ++best.collapsed_runs;
      continue;
    }
    ++completed;
    const double ll = run.trace.back();
    if (ll > best.log_likelihood) {
      best.model = std::move(run.model);
      best.log_likelihood = ll;
      best.trace = std::move(run.trace);
      best.iterations = run.iterations;
      best.converged = run.converged;
    }
  }
  if (completed == 0) throw NumericalError("gmm fit: every EM run collapsed (degenerate fit)");
  return best;
}

}  // namespace cwm
