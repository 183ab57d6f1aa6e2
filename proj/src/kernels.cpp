#include "cwm/kernels.hpp"

#include <cmath>
#include <cstdlib>
#include <limits>
#include <string>

#include "cwm/errors.hpp"
#include "cwm/gmm_em.hpp"
#include "cwm/kl.hpp"

#ifdef CWM_HAVE_OPENMP
#include <omp.h>
#endif

namespace cwm::kernels {

namespace {

constexpr double kLog2Pi = 1.8378770664093454836;

struct PreparedTerm {
  double constant;
  const double* mean;
  const Matrix* lower;
};

std::vector<PreparedTerm> prepare(std::span<const WeightedGaussian> terms, int p) {
  std::vector<PreparedTerm> out;
  out.reserve(terms.size());
  for (const auto& t : terms) {
    if (t.mean.size() != p || t.factor.dim() != p) {
      throw ValidationError("component_log_weights: dimension mismatch");
    }
    out.push_back({t.log_alpha - 0.5 * (p * kLog2Pi + t.factor.log_det()), t.mean.data(),
                   &t.factor.lower()});
  }
  return out;
}

// Forward substitution on one row; `scratch` holds p doubles.
inline void row_terms(const Matrix& W, Eigen::Index i, const std::vector<PreparedTerm>& prep,
                      double* scratch, Matrix& out) {
  const Eigen::Index p = W.cols();
  for (std::size_t g = 0; g < prep.size(); ++g) {
    const PreparedTerm& t = prep[g];
    if (t.constant == -std::numeric_limits<double>::infinity()) {
      out(i, static_cast<Eigen::Index>(g)) = t.constant;
      continue;
    }
    const Matrix& l = *t.lower;
    double quad = 0.0;
    for (Eigen::Index j = 0; j < p; ++j) {
      double s = W(i, j) - t.mean[j];
      for (Eigen::Index k = 0; k < j; ++k) s -= l(j, k) * scratch[k];
      s /= l(j, j);
      scratch[j] = s;
      quad += s * s;
    }
    out(i, static_cast<Eigen::Index>(g)) = t.constant - 0.5 * quad;
  }
}

}  // namespace

void component_log_weights_serial(const Matrix& W, std::span<const WeightedGaussian> terms,
                                  Matrix& out) {
  const auto prep = prepare(terms, static_cast<int>(W.cols()));
  out.resize(W.rows(), static_cast<Eigen::Index>(terms.size()));
  std::vector<double> scratch(static_cast<std::size_t>(W.cols()) + 1);
  for (Eigen::Index i = 0; i < W.rows(); ++i) row_terms(W, i, prep, scratch.data(), out);
}

void component_log_weights_parallel(const Matrix& W, std::span<const WeightedGaussian> terms,
                                    Matrix& out) {
#ifdef CWM_HAVE_OPENMP
  const auto prep = prepare(terms, static_cast<int>(W.cols()));
  out.resize(W.rows(), static_cast<Eigen::Index>(terms.size()));
  const Eigen::Index n = W.rows();
#pragma omp parallel num_threads(worker_count())
  {
    std::vector<double> scratch(static_cast<std::size_t>(W.cols()) + 1);
#pragma omp for schedule(static)
    for (Eigen::Index i = 0; i < n; ++i) row_terms(W, i, prep, scratch.data(), out);
  }
#else
  component_log_weights_serial(W, terms, out);
#endif
}

void component_log_weights(const Matrix& W, std::span<const WeightedGaussian> terms, Matrix& out) {
  // below this many terms the fork/join costs more than the work
  constexpr Eigen::Index kParallelThreshold = 20000;
  if (worker_count() > 1 && W.rows() * static_cast<Eigen::Index>(terms.size()) >= kParallelThreshold) {
    component_log_weights_parallel(W, terms, out);
  } else {
    component_log_weights_serial(W, terms, out);
  }
}

namespace {

double one_replication(const UnivariateGmm& truth, int n, const GmmFitConfig& fit, Rng rng) {
  try {
    const Vector sample = truth.sample(n, rng);
    const GmmFit fitted = fit_gmm_em(sample, fit, rng);
    return kl_divergence(truth, fitted.model);
  } catch (const Error&) {
    return std::numeric_limits<double>::quiet_NaN();
  }
}

}  // namespace

std::vector<double> kl_replications_serial(const UnivariateGmm& truth, int n, int count,
                                           const GmmFitConfig& fit, const Rng& base) {
  std::vector<double> out(static_cast<std::size_t>(count));
  for (int r = 0; r < count; ++r) {
    out[static_cast<std::size_t>(r)] = one_replication(truth, n, fit, base.split(static_cast<std::uint64_t>(r)));
  }
  return out;
}

std::vector<double> kl_replications_parallel(const UnivariateGmm& truth, int n, int count,
                                             const GmmFitConfig& fit, const Rng& base) {
#ifdef CWM_HAVE_OPENMP
  std::vector<double> out(static_cast<std::size_t>(count));
#pragma omp parallel for schedule(dynamic, 4) num_threads(worker_count())
  for (int r = 0; r < count; ++r) {
    out[static_cast<std::size_t>(r)] = one_replication(truth, n, fit, base.split(static_cast<std::uint64_t>(r)));
  }
  return out;
#else
  return kl_replications_serial(truth, n, count, fit, base);
#endif
}

std::vector<double> kl_replications(const UnivariateGmm& truth, int n, int count,
                                    const GmmFitConfig& fit, const Rng& base) {
  if (worker_count() > 1) return kl_replications_parallel(truth, n, count, fit, base);
  return kl_replications_serial(truth, n, count, fit, base);
}

int worker_count() {
  int workers = 1;
#ifdef CWM_HAVE_OPENMP
  workers = omp_get_max_threads();
#endif
  if (const char* env = std::getenv("CWM_IMPUTE_THREADS")) {
    try {
      const int cap = std::stoi(env);
      if (cap >= 1) workers = std::min(workers, cap);
    } catch (const std::exception&) {
      // unparsable values are ignored
    }
  }
  return std::max(workers, 1);
}

}  // namespace cwm::kernels
