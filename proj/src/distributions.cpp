#include "cwm/distributions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "cwm/errors.hpp"

namespace cwm {

namespace {
constexpr double kLog2Pi = 1.8378770664093454836;
}

double sample_gamma(double shape, double rate, Rng& rng) {
  if (!(shape > 0.0) || !(rate > 0.0) || !std::isfinite(shape) || !std::isfinite(rate)) {
    throw ValidationError("gamma: shape and rate must be positive and finite");
  }
  std::gamma_distribution<double> dist(shape, 1.0 / rate);
  return dist(rng.engine());
}

double sample_beta(double a, double b, Rng& rng) {
  if (!(a > 0.0) || !(b > 0.0)) throw ValidationError("beta: parameters must be positive");
  const double x = sample_gamma(a, 1.0, rng);
  const double y = sample_gamma(b, 1.0, rng);
  const double total = x + y;
  if (total == 0.0) {
    // both gamma draws underflowed; fall back on the mean
    return a / (a + b);
  }
  return x / total;
}

double sample_chisq(double df, Rng& rng) { return sample_gamma(0.5 * df, 0.5, rng); }

std::size_t sample_categorical(std::span<const double> weights, Rng& rng) {
  if (weights.empty()) throw ValidationError("categorical: empty weight vector");
  double total = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0) || !std::isfinite(w)) throw ValidationError("categorical: invalid weight");
    total += w;
  }
  if (!(total > 0.0)) throw ValidationError("categorical: weights sum to zero");
  const double u = rng.uniform() * total;
  double acc = 0.0;
  std::size_t last_positive = 0;
  for (std::size_t k = 0; k < weights.size(); ++k) {
    if (weights[k] > 0.0) last_positive = k;
    acc += weights[k];
    if (u < acc && weights[k] > 0.0) return k;
  }
  return last_positive;
}

std::size_t sample_categorical_log(std::span<const double> log_weights, Rng& rng) {
  std::vector<double> p(log_weights.begin(), log_weights.end());
  normalize_log_weights(p);
  return sample_categorical(p, rng);
}

Vector sample_mvn(const Vector& mean, const CholFactor& cov, Rng& rng) {
  Vector z(mean.size());
  for (Eigen::Index i = 0; i < z.size(); ++i) z[i] = rng.normal();
  return mean + cov.lower().triangularView<Eigen::Lower>() * z;
}

double mvn_logpdf(const Vector& x, const Vector& mean, const CholFactor& cov) {
  const Vector r = cov.half_solve(x - mean);
  return -0.5 * (static_cast<double>(x.size()) * kLog2Pi + cov.log_det() + r.squaredNorm());
}

double normal_logpdf(double x, double mean, double variance) {
  const double r = x - mean;
  return -0.5 * (kLog2Pi + std::log(variance) + r * r / variance);
}

Matrix sample_inverse_wishart(double df, const Matrix& scale, Rng& rng) {
  const int p = static_cast<int>(scale.rows());
  if (!(df > p - 1)) throw ValidationError("inverse wishart: df must exceed p - 1");
  // Bartlett: W = L^{-T} A A^T L^{-1} ~ Wishart(df, scale^{-1}) with
  // scale = L L^T, so W^{-1} = (L A^{-T})(L A^{-T})^T.
  const CholFactor scale_chol = CholFactor::of(scale);
  Matrix a = Matrix::Zero(p, p);
  for (int i = 0; i < p; ++i) {
    a(i, i) = std::sqrt(sample_chisq(df - i, rng));
    for (int j = 0; j < i; ++j) a(i, j) = rng.normal();
  }
  // B^T = A^{-1} L^T  (solve A X = L^T)
  const Matrix bt = a.triangularView<Eigen::Lower>().solve(scale_chol.lower().transpose());
  return symmetrize(bt.transpose() * bt);
}

double log_multigamma(double a, int p) {
  double out = 0.25 * p * (p - 1) * std::log(std::numbers::pi);
  for (int j = 0; j < p; ++j) out += std::lgamma(a - 0.5 * j);
  return out;
}

double inverse_wishart_logpdf(const Matrix& sigma, double df, const Matrix& scale) {
  const int p = static_cast<int>(sigma.rows());
  const CholFactor sc = CholFactor::of(sigma);
  const CholFactor ps = CholFactor::of(scale);
  // tr(scale * sigma^{-1}) = ||L_sigma^{-1} L_scale||_F^2
  const Matrix m = sc.lower().triangularView<Eigen::Lower>().solve(ps.lower());
  return 0.5 * df * ps.log_det() - 0.5 * df * p * std::log(2.0) - log_multigamma(0.5 * df, p) -
         0.5 * (df + p + 1) * sc.log_det() - 0.5 * m.squaredNorm();
}

double gamma_logpdf(double x, double shape, double rate) {
  if (!(x > 0.0)) return -std::numeric_limits<double>::infinity();
  return shape * std::log(rate) - std::lgamma(shape) + (shape - 1.0) * std::log(x) - rate * x;
}

double beta_logpdf(double x, double a, double b) {
  if (!(x > 0.0) || !(x < 1.0)) return -std::numeric_limits<double>::infinity();
  return std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) + (a - 1.0) * std::log(x) +
         (b - 1.0) * std::log1p(-x);
}

double log_sum_exp(std::span<const double> values) {
  double m = -std::numeric_limits<double>::infinity();
  for (double v : values) m = std::max(m, v);
  if (!std::isfinite(m)) return m;
  double s = 0.0;
  for (double v : values) s += std::exp(v - m);
  return m + std::log(s);
}

double normalize_log_weights(std::span<double> values) {
  double m = -std::numeric_limits<double>::infinity();
  for (double v : values) m = std::max(m, v);
  if (!std::isfinite(m)) {
    if (m == std::numeric_limits<double>::infinity()) {
      throw NumericalError("log weights contain +inf");
    }
    throw NumericalError("all log weights are -inf");
  }
  double s = 0.0;
  for (double& v : values) {
    v = std::exp(v - m);
    s += v;
  }
  for (double& v : values) v /= s;
  return m + std::log(s);
}

}  // namespace cwm
