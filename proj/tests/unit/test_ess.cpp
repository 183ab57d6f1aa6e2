#include <doctest.h>

#include <cmath>
#include <vector>

#include "cwm/errors.hpp"
#include "cwm/ess.hpp"
#include "cwm/rng.hpp"

using namespace cwm;

namespace {

std::vector<double> ar1(double rho, int n, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<double> x(static_cast<std::size_t>(n));
  double v = rng.normal() / std::sqrt(1 - rho * rho);
  for (auto& e : x) {
    v = rho * v + rng.normal();
    e = v;
  }
  return x;
}

}  // namespace

TEST_SUITE("ess") {
  TEST_CASE("AR(1) series match n (1 - rho) / (1 + rho)") {
    const int n = 100000;
    for (double rho : {0.3, 0.5, 0.9}) {
      CAPTURE(rho);
      const EssResult r = effective_sample_size(ar1(rho, n, 17));
      const double expected = n * (1 - rho) / (1 + rho);
      CHECK(r.defined);
      CHECK(r.ess == doctest::Approx(expected).epsilon(0.1));
    }
  }

  TEST_CASE("independent draws give ESS close to n") {
    const EssResult r = effective_sample_size(ar1(0.0, 20000, 5));
    CHECK(r.ess == doctest::Approx(20000).epsilon(0.1));
  }

  TEST_CASE("antithetic series may exceed n") {
    const EssResult r = effective_sample_size(ar1(-0.5, 20000, 6));
    CHECK(r.ess > 20000);
    CHECK(r.ess <= 20000 * std::log10(20000.0) + 1e-6);
  }

  TEST_CASE("constant series and short series") {
    const std::vector<double> flat(100, 3.5);
    const EssResult r = effective_sample_size(flat);
    CHECK_FALSE(r.defined);
    CHECK(r.ess == 0.0);
    CHECK_THROWS_AS(effective_sample_size(std::vector<double>(9, 1.0)), ValidationError);
    std::vector<double> bad = ar1(0.1, 50, 1);
    bad[3] = std::nan("");
    CHECK_THROWS_AS(effective_sample_size(bad), ValidationError);
  }

  TEST_CASE("ESS is invariant to shifting and scaling") {
    auto x = ar1(0.7, 5000, 8);
    const double base = effective_sample_size(x).ess;
    for (auto& v : x) v = 1000.0 + 3.0 * v;
    CHECK(effective_sample_size(x).ess == doctest::Approx(base).epsilon(1e-9));
  }
}
