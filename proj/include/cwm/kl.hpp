#pragma once

#include "cwm/gmm_em.hpp"

namespace cwm {

struct KlOptions {
  /// Absolute error bound on the integral.
  double tol = 1e-9;
  /// Half-width of the integration window, in component standard deviations.
  double window_sd = 12.0;
};

/// KL(f, g) = integral of f log(f / g), by adaptive Gauss-Kronrod quadrature
/// over the union of all component windows. Throws NumericalError when the
/// integrand is not finite or the error estimate exceeds tol.
double kl_divergence(const UnivariateGmm& f, const UnivariateGmm& g, const KlOptions& options = {});

}  // namespace cwm
