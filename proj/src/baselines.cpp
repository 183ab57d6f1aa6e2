#include "cwm/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "cwm/distributions.hpp"
#include "cwm/errors.hpp"

namespace cwm {

namespace {

Matrix design(const MissingDataset& data, const std::vector<int>& rows) {
  Matrix out(static_cast<Eigen::Index>(rows.size()), data.d() + 1);
  for (std::size_t k = 0; k < rows.size(); ++k) {
    const auto r = static_cast<Eigen::Index>(k);
    out(r, 0) = 1.0;
    out.row(r).tail(data.d()) = data.X.row(rows[k]);
  }
  return out;
}

struct RegressionDraw {
  Vector beta_hat;
  Vector beta_star;
  double sigma2;
};

RegressionDraw draw_regression(const MissingDataset& data, Rng& rng) {
  data.validate();
  if (data.d() < 1) throw ValidationError("regression imputation needs at least one covariate");
  const auto obs = data.observed_rows();
  const int k = data.d() + 1;
  const int n_obs = static_cast<int>(obs.size());
  if (n_obs <= k) throw ValidationError("regression imputation needs more observed rows than d + 1");

  const Matrix X = design(data, obs);
  Vector y(n_obs);
  for (int i = 0; i < n_obs; ++i) y[i] = data.y[obs[static_cast<std::size_t>(i)]];

  const Eigen::ColPivHouseholderQR<Matrix> qr(X);
  if (qr.rank() < k) throw NumericalError("regression imputation: design matrix is rank deficient (singular fit)");
  CholFactor xtx;
  try {
    xtx = CholFactor::of(symmetrize(X.transpose() * X));
  } catch (const NotSpdError&) {
    throw NumericalError("regression imputation: X'X is singular");
  }
  RegressionDraw d;
  d.beta_hat = xtx.solve(X.transpose() * y);
  const double rss = (y - X * d.beta_hat).squaredNorm();
  d.sigma2 = rss / sample_chisq(n_obs - k, rng);
  // beta* = beta_hat + sigma L^-T z where X'X = L L'
  Vector z(k);
  for (int j = 0; j < k; ++j) z[j] = rng.normal();
  d.beta_star = d.beta_hat + std::sqrt(d.sigma2) * xtx.lower().transpose().triangularView<Eigen::Upper>().solve(z);
  return d;
}

ImputeResult finish(const MissingDataset& data, Vector fill) {
  ImputeResult r;
  r.y_completed = complete_response(data, fill);
  r.y_fill = std::move(fill);
  return r;
}

}  // namespace

ImputeResult impute_norm(const MissingDataset& data, Rng& rng) {
  const RegressionDraw d = draw_regression(data, rng);
  const auto mis = data.missing_rows();
  const Matrix Xm = design(data, mis);
  const double sd = std::sqrt(d.sigma2);
  Vector fill(static_cast<Eigen::Index>(mis.size()));
  for (Eigen::Index i = 0; i < fill.size(); ++i) fill[i] = Xm.row(i).dot(d.beta_star) + sd * rng.normal();
  return finish(data, std::move(fill));
}

void PmmConfig::validate() const {
  if (donors < 1) throw ValidationError("pmm: donors must be at least 1");
}

ImputeResult impute_pmm(const MissingDataset& data, const PmmConfig& config, Rng& rng) {
  config.validate();
  const RegressionDraw d = draw_regression(data, rng);
  const auto obs = data.observed_rows();
  const auto mis = data.missing_rows();
  const Vector score_obs = design(data, obs) * d.beta_hat;
  const Vector score_mis = design(data, mis) * d.beta_star;

  std::vector<std::string> warnings;
  int donors = config.donors;
  if (donors > static_cast<int>(obs.size())) {
    donors = static_cast<int>(obs.size());
    warnings.push_back("pmm: only " + std::to_string(donors) + " observed rows; donor pool shrunk");
  }

  std::vector<int> order(obs.size());
  Vector fill(static_cast<Eigen::Index>(mis.size()));
  for (Eigen::Index i = 0; i < fill.size(); ++i) {
    std::iota(order.begin(), order.end(), 0);
    const double target = score_mis[i];
    auto closer = [&](int a, int b) {
      const double da = std::abs(score_obs[a] - target);
      const double db = std::abs(score_obs[b] - target);
      return da < db || (da == db && a < b);
    };
    std::partial_sort(order.begin(), order.begin() + donors, order.end(), closer);
    const int pick = order[rng.index(static_cast<std::size_t>(donors))];
    fill[i] = data.y[obs[static_cast<std::size_t>(pick)]];
  }
  ImputeResult r = finish(data, std::move(fill));
  r.warnings = std::move(warnings);
  return r;
}

ChainImputation impute_cwm(const MissingDataset& data, const HyperOverrides& hyper, const McmcConfig& config,
                           const StateSink& sink) {
  ChainImputation out;
  out.chain = run_chain(data, hyper, config, sink);
  const GibbsState& map = out.chain.map_state;
  out.result = finish(data, map.y_fill);
  // missing rows report the component their imputation was drawn from
  out.result.labels = map.z;
  const auto mis = data.missing_rows();
  for (std::size_t k = 0; k < mis.size(); ++k) out.result.labels[static_cast<std::size_t>(mis[k])] = map.z_mis[k];
  out.result.warnings = out.chain.diagnostics.warnings;
  return out;
}

ChainImputation impute_mean(const MissingDataset& data, const HyperOverrides& hyper, const McmcConfig& config,
                            const StateSink& sink) {
  const MissingDataset marginal = data.select_covariates({});
  return impute_cwm(marginal, hyper, config, sink);
}

}  // namespace cwm
