#include "cwm/ess.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include <unsupported/Eigen/FFT>

#include "cwm/errors.hpp"

namespace cwm {

EssResult effective_sample_size(std::span<const double> series) {
  const std::size_t n = series.size();
  if (n < 10) throw ValidationError("effective_sample_size: need at least 10 values");
  for (double v : series) {
    if (!std::isfinite(v)) throw ValidationError("effective_sample_size: non-finite value");
  }
  double mean = 0.0;
  for (double v : series) mean += v;
  mean /= static_cast<double>(n);
  std::vector<double> c(n);
  double var = 0.0;
  for (std::size_t t = 0; t < n; ++t) {
    c[t] = series[t] - mean;
    var += c[t] * c[t];
  }
  var /= static_cast<double>(n);
  if (!(var > 1e-300) || var <= 1e-28 * mean * mean) return {0.0, false};

  // autocovariances through a zero-padded FFT
  std::size_t m2 = 1;
  while (m2 < 2 * n) m2 <<= 1;
  std::vector<double> padded(m2, 0.0);
  std::copy(c.begin(), c.end(), padded.begin());
  Eigen::FFT<double> fft;
  std::vector<std::complex<double>> spec;
  fft.fwd(spec, padded);
  for (auto& v : spec) v = std::norm(v);
  std::vector<double> acov;
  fft.inv(acov, spec);
  auto rho = [&](std::size_t lag) { return acov[lag] / (static_cast<double>(n) * var); };

  double sum_pairs = 0.0;
  for (std::size_t m = 0; 2 * m + 1 < n; ++m) {
    const double pair = (m == 0 ? 1.0 : rho(2 * m)) + rho(2 * m + 1);
    if (!(pair > 0.0)) break;
    sum_pairs += pair;
  }
  const double tau = std::max(-1.0 + 2.0 * sum_pairs, 1.0 / std::log10(static_cast<double>(n)));
  return {static_cast<double>(n) / tau, true};
}

}  // namespace cwm
