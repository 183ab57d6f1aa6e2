#pragma once

#include <span>

#include "cwm/linalg.hpp"
#include "cwm/rng.hpp"

namespace cwm {

// Conventions: Gamma(shape, rate) has mean shape/rate. InverseWishart(df,
// scale) has mean scale/(df - p - 1).

double sample_gamma(double shape, double rate, Rng& rng);
double sample_beta(double a, double b, Rng& rng);
double sample_chisq(double df, Rng& rng);

/// Index drawn with probability proportional to `weights` (need not sum to 1).
std::size_t sample_categorical(std::span<const double> weights, Rng& rng);
/// Same, from unnormalized log weights (may contain -inf).
std::size_t sample_categorical_log(std::span<const double> log_weights, Rng& rng);

Vector sample_mvn(const Vector& mean, const CholFactor& cov, Rng& rng);
double mvn_logpdf(const Vector& x, const Vector& mean, const CholFactor& cov);
double normal_logpdf(double x, double mean, double variance);

Matrix sample_inverse_wishart(double df, const Matrix& scale, Rng& rng);

/// log density of InverseWishart(df, scale) at sigma.
double inverse_wishart_logpdf(const Matrix& sigma, double df, const Matrix& scale);
double gamma_logpdf(double x, double shape, double rate);
double beta_logpdf(double x, double a, double b);

/// log Gamma_p(a), the multivariate gamma function.
double log_multigamma(double a, int p);

double log_sum_exp(std::span<const double> values);
/// Normalizes log weights in place into probabilities; returns the log
/// normalizer. Never produces NaN as long as one entry is finite.
double normalize_log_weights(std::span<double> values);

}  // namespace cwm
