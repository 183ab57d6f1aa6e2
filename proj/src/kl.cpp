#include "cwm/kl.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "cwm/errors.hpp"

namespace cwm {

namespace {

void add_breaks(const UnivariateGmm& m, std::vector<double>& breaks, double& lo, double& hi, double width) {
  for (int k = 0; k < m.size(); ++k) {
    const double sd = std::sqrt(m.variances[k]);
    lo = std::min(lo, m.means[k] - width * sd);
    hi = std::max(hi, m.means[k] + width * sd);
    for (double s : {-6.0, -3.0, 0.0, 3.0, 6.0}) breaks.push_back(m.means[k] + s * sd);
  }
}

}  // namespace

double kl_divergence(const UnivariateGmm& f, const UnivariateGmm& g, const KlOptions& options) {
  f.validate();
  g.validate();
  if (!(options.tol > 0.0) || !(options.window_sd > 0.0)) throw ValidationError("kl: bad options");

  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  std::vector<double> breaks;
  add_breaks(f, breaks, lo, hi, options.window_sd);
  add_breaks(g, breaks, lo, hi, options.window_sd);
  breaks.push_back(lo);
  breaks.push_back(hi);
  std::erase_if(breaks, [&](double b) { return b < lo || b > hi; });
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());

  bool bad = false;
  double bad_at = 0.0;
  auto integrand = [&](double x) {
    const double lf = f.logpdf(x);
    // exp underflows to 0 below this; the contribution is exactly 0 in double
    if (lf < -745.0) return 0.0;
    const double lg = g.logpdf(x);
    const double v = std::exp(lf) * (lf - lg);
    if (!std::isfinite(v)) {
      bad = true;
      bad_at = x;
      return 0.0;
    }
    return v;
  };

  double total = 0.0;
  double error = 0.0;
  for (std::size_t k = 0; k + 1 < breaks.size(); ++k) {
    double err = 0.0;
    total += boost::math::quadrature::gauss_kronrod<double, 61>::integrate(integrand, breaks[k], breaks[k + 1], 15,
                                                                            1e-10, &err);
    error += err;
  }
  if (bad) throw NumericalError("kl: non-finite integrand at x = " + std::to_string(bad_at));
  if (!(error <= options.tol)) {
    throw NumericalError("kl: quadrature error estimate " + std::to_string(error) + " exceeds tolerance");
  }
  return total;
}

}  // namespace cwm
