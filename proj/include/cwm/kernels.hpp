#pragma once

// Data-parallel kernels. Each kernel has a serial reference (`*_serial`)
// kept for testing and benchmarking, an OpenMP version (`*_parallel`), and
// a dispatching entry point. All versions produce bit-identical output:
// work items are independent and every item owns its random stream.

#include <span>
#include <vector>

#include "cwm/linalg.hpp"
#include "cwm/model.hpp"
#include "cwm/rng.hpp"

namespace cwm {

struct UnivariateGmm;
struct GmmFitConfig;

namespace kernels {

/// Gaussian term log(alpha_g) + log phi_p(. ; mean_g, L_g L_g^T).
struct WeightedGaussian {
  double log_alpha;
  Vector mean;
  CholFactor factor;
};

/// out(i, g) = log alpha_g + log phi_p(row_i(W); mu_g, Sigma_g).
void component_log_weights_serial(const Matrix& W, std::span<const WeightedGaussian> terms,
                                  Matrix& out);
void component_log_weights_parallel(const Matrix& W, std::span<const WeightedGaussian> terms,
                                    Matrix& out);
void component_log_weights(const Matrix& W, std::span<const WeightedGaussian> terms, Matrix& out);

/// KL(truth, fit) for replications [0, count): replication r draws `n`
/// points from `truth` with stream base.split(r), refits by EM and records
/// the divergence (NaN when the fit fails).
std::vector<double> kl_replications_serial(const UnivariateGmm& truth, int n, int count,
                                           const GmmFitConfig& fit, const Rng& base);
std::vector<double> kl_replications_parallel(const UnivariateGmm& truth, int n, int count,
                                             const GmmFitConfig& fit, const Rng& base);
std::vector<double> kl_replications(const UnivariateGmm& truth, int n, int count,
                                    const GmmFitConfig& fit, const Rng& base);

/// Worker cap: CWM_IMPUTE_THREADS if set, else the OpenMP default.
int worker_count();

}  // namespace kernels
}  // namespace cwm
