#pragma once

#include <span>

namespace cwm {

struct EssResult {
  double ess = 0.0;
  /// False for a constant series (autocorrelation undefined); ess is 0.
  bool defined = true;
};

/// n / tau with tau = -1 + 2 sum_m (rho_{2m} + rho_{2m+1}), summed over
/// Geyer's initial positive sequence. tau is floored at 1 / log10(n), so
/// antithetic chains may report ESS > n. Requires at least 10 values.
EssResult effective_sample_size(std::span<const double> series);

}  // namespace cwm
