#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "cwm/baselines.hpp"
#include "cwm/errors.hpp"

using namespace cwm;

namespace {

MissingDataset linear_data(int n, Rng& rng, double missing_rate) {
  MissingDataset data;
  data.X.resize(n, 2);
  data.y.resize(n);
  data.mask.assign(static_cast<std::size_t>(n), false);
  for (int i = 0; i < n; ++i) {
    data.X(i, 0) = rng.normal();
    data.X(i, 1) = 2.0 * rng.uniform();
    data.y[i] = 1.0 + 2.0 * data.X(i, 0) - data.X(i, 1) + 0.5 * rng.normal();
    data.mask[static_cast<std::size_t>(i)] = rng.uniform() < missing_rate;
  }
  data.column_names = {"x1", "x2", "y"};
  return data;
}

void check_observed_untouched(const MissingDataset& data, const ImputeResult& r) {
  REQUIRE(r.y_completed.size() == data.n());
  REQUIRE(r.y_fill.size() == data.n_missing());
  int k = 0;
  for (int i = 0; i < data.n(); ++i) {
    if (data.mask[static_cast<std::size_t>(i)]) {
      CHECK(r.y_completed[i] == r.y_fill[k++]);
    } else {
      CHECK(r.y_completed[i] == data.y[i]);
    }
  }
}

}  // namespace

TEST_SUITE("baselines") {
  TEST_CASE("norm: observed responses stay, imputations follow the fitted line") {
    Rng rng(1);
    const MissingDataset data = linear_data(2000, rng, 0.2);
    const ImputeResult r = impute_norm(data, rng);
    check_observed_untouched(data, r);
    CHECK(r.labels.empty());
    const auto mis = data.missing_rows();
    double ss = 0.0;
    for (std::size_t k = 0; k < mis.size(); ++k) {
      const int i = mis[k];
      const double line = 1.0 + 2.0 * data.X(i, 0) - data.X(i, 1);
      ss += std::pow(r.y_fill[static_cast<Eigen::Index>(k)] - line, 2);
    }
    CHECK(ss / static_cast<double>(mis.size()) == doctest::Approx(0.25).epsilon(0.15));
  }

  TEST_CASE("norm: imputation spread equals the Student-t predictive variance") {
    Rng data_rng(2);
    MissingDataset data = linear_data(12, data_rng, 0.0);
    data.mask[11] = true;
    const auto obs = data.observed_rows();
    Matrix X(static_cast<Eigen::Index>(obs.size()), 3);
    Vector y(static_cast<Eigen::Index>(obs.size()));
    for (std::size_t k = 0; k < obs.size(); ++k) {
      const auto r = static_cast<Eigen::Index>(k);
      X(r, 0) = 1.0;
      X(r, 1) = data.X(obs[k], 0);
      X(r, 2) = data.X(obs[k], 1);
      y[r] = data.y[obs[k]];
    }
    const Matrix xtx_inv = (X.transpose() * X).inverse();
    const Vector beta = xtx_inv * X.transpose() * y;
    const double df = static_cast<double>(obs.size()) - 3.0;
    const double s2 = (y - X * beta).squaredNorm() / df;
    const Vector x0{{1.0, data.X(11, 0), data.X(11, 1)}};
    const double pred_mean = x0.dot(beta);
    const double pred_var = s2 * (1.0 + x0.dot(xtx_inv * x0)) * df / (df - 2.0);

    Rng rng(3);
    const int draws = 200000;
    double sum = 0.0;
    double sq = 0.0;
    for (int k = 0; k < draws; ++k) {
      const double v = impute_norm(data, rng).y_fill[0];
      sum += v;
      sq += v * v;
    }
    const double m = sum / draws;
    CHECK(m == doctest::Approx(pred_mean).epsilon(0.01));
    CHECK(sq / draws - m * m == doctest::Approx(pred_var).epsilon(0.03));
  }

  TEST_CASE("norm: singular designs and missing covariates are rejected") {
    Rng rng(4);
    MissingDataset data = linear_data(50, rng, 0.2);
    data.X.col(1) = 3.0 * data.X.col(0);
    CHECK_THROWS_AS(impute_norm(data, rng), NumericalError);
    CHECK_THROWS_AS(impute_norm(data.select_covariates({}), rng), ValidationError);
    MissingDataset few = linear_data(6, rng, 0.0);
    for (int i = 0; i < 3; ++i) few.mask[static_cast<std::size_t>(i)] = true;
    CHECK_THROWS_AS(impute_norm(few, rng), ValidationError);
  }

  TEST_CASE("pmm: every imputation is an observed value") {
    Rng rng(5);
    const MissingDataset data = linear_data(500, rng, 0.3);
    const ImputeResult r = impute_pmm(data, PmmConfig{}, rng);
    check_observed_untouched(data, r);
    std::set<double> observed;
    for (int i : data.observed_rows()) observed.insert(data.y[i]);
    for (Eigen::Index k = 0; k < r.y_fill.size(); ++k) CHECK(observed.count(r.y_fill[k]) == 1);
    CHECK(r.warnings.empty());
  }

  TEST_CASE("pmm: donors come from the closest predicted means") {
    // Noise-free line: scores order exactly like y, so the donor must lie
    // within a few neighbors of the missing row's own value.
    Rng rng(6);
    MissingDataset data;
    const int n = 400;
    data.X.resize(n, 1);
    data.y.resize(n);
    data.mask.assign(n, false);
    for (int i = 0; i < n; ++i) {
      data.X(i, 0) = i;
      data.y[i] = 2.0 * i + 1e-3 * rng.normal();
      data.mask[static_cast<std::size_t>(i)] = i % 7 == 3;
    }
    const ImputeResult r = impute_pmm(data, PmmConfig{3}, rng);
    const auto mis = data.missing_rows();
    for (std::size_t k = 0; k < mis.size(); ++k) {
      CHECK(std::abs(r.y_fill[static_cast<Eigen::Index>(k)] - data.y[mis[k]]) < 2.0 * 4 + 0.1);
    }
  }

  TEST_CASE("pmm: a full pool picks donors uniformly and small pools warn") {
    Rng rng(7);
    MissingDataset data = linear_data(8, rng, 0.0);
    data.mask = {true, true, true, true, false, false, false, false};
    std::vector<int> hits(4, 0);
    const int reps = 20000;
    for (int k = 0; k < reps; ++k) {
      const ImputeResult r = impute_pmm(data, PmmConfig{4}, rng);
      for (int j = 0; j < 4; ++j) {
        if (r.y_fill[0] == data.y[4 + j]) ++hits[static_cast<std::size_t>(j)];
      }
    }
    for (int h : hits) CHECK(h / double(reps) == doctest::Approx(0.25).epsilon(0.06));
    const ImputeResult shrunk = impute_pmm(data, PmmConfig{10}, rng);
    CHECK(shrunk.warnings.size() == 1);
    CHECK_THROWS_AS(impute_pmm(data, PmmConfig{0}, rng), ValidationError);
  }

  TEST_CASE("cwm and mean: labels and untouched observations") {
    Rng rng(8);
    MissingDataset data = linear_data(150, rng, 0.2);
    McmcConfig c;
    c.burn_in = 100;
    c.target_ess = 50;
    c.check_every = 100;
    c.max_iterations = 1000;
    const ChainImputation cwm = impute_cwm(data, {}, c);
    check_observed_untouched(data, cwm.result);
    REQUIRE(cwm.result.labels.size() == static_cast<std::size_t>(data.n()));
    const auto mis = data.missing_rows();
    for (std::size_t k = 0; k < mis.size(); ++k) {
      CHECK(cwm.result.labels[static_cast<std::size_t>(mis[k])] == cwm.chain.map_state.z_mis[k]);
    }
    const ChainImputation mean = impute_mean(data, {}, c);
    check_observed_untouched(data, mean.result);
    CHECK(mean.chain.hyper.mu0.size() == 1);
  }
}
