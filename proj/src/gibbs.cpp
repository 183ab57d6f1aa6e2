#include "cwm/gibbs.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "cwm/distributions.hpp"
#include "cwm/errors.hpp"
#include "cwm/ess.hpp"
#include "cwm/kernels.hpp"

namespace cwm {

namespace {

// log(1 - nu) is floored here when the gamma remainder underflows to 0.
constexpr double kLog1mNuFloor = -745.0;

Vector column_means(const Matrix& W) {
  if (W.rows() == 0) return Vector::Zero(W.cols());
  return W.colwise().mean().transpose();
}

Vector column_variances(const Matrix& W) {
  const Vector m = column_means(W);
  Vector v(W.cols());
  for (Eigen::Index j = 0; j < W.cols(); ++j) {
    const double s = (W.col(j).array() - m[j]).square().sum();
    v[j] = W.rows() > 1 ? s / static_cast<double>(W.rows() - 1) : 1.0;
    if (!(v[j] > 0.0)) v[j] = 1.0;
  }
  return v;
}

}  // namespace

void Hyperparams::validate(int p) const {
  if (G < 1) throw ValidationError("hyperparams: G must be at least 1");
  if (mu0.size() != p) throw ValidationError("hyperparams: mu0 must have p entries");
  if (!(h > 0.0)) throw ValidationError("hyperparams: h must be positive");
  if (!(f > p - 1)) throw ValidationError("hyperparams: f must exceed p - 1");
  if (!(a_eta > 0.0) || !(b_eta > 0.0)) throw ValidationError("hyperparams: a_eta, b_eta must be positive");
  if (!(a_delta > 0.0)) throw ValidationError("hyperparams: a_delta must be positive");
  if (b_delta.size() != p || !(b_delta.array() > 0.0).all()) {
    throw ValidationError("hyperparams: b_delta must hold p positive rates");
  }
  if (fixed_delta && (fixed_delta->size() != p || !(fixed_delta->array() > 0.0).all())) {
    throw ValidationError("hyperparams: fixed_delta must hold p positive values");
  }
}

Hyperparams resolve_hyperparams(const HyperOverrides& o, const Matrix& completed) {
  const int p = static_cast<int>(completed.cols());
  Hyperparams hp;
  hp.G = o.G.value_or(10);
  hp.mu0 = o.mu0.value_or(column_means(completed));
  hp.h = o.h.value_or(1.0);
  hp.f = o.f.value_or(p + 2.0);
  hp.a_eta = o.a_eta.value_or(0.5);
  hp.b_eta = o.b_eta.value_or(0.5);
  hp.a_delta = o.a_delta.value_or(static_cast<double>(p));
  if (o.b_delta) {
    if (o.b_delta->size() == 1) {
      hp.b_delta = Vector::Constant(p, (*o.b_delta)[0]);
    } else {
      hp.b_delta = *o.b_delta;
    }
  } else {
    hp.b_delta = hp.a_delta * column_variances(completed).cwiseInverse();
  }
  hp.fixed_delta = o.fixed_delta;
  hp.validate(p);
  return hp;
}

std::string monitor_name(Monitor m) {
  switch (m) {
    case Monitor::LogPosterior:
      return "log_posterior";
    case Monitor::MeanImputed:
      return "mean_imputed";
  }
  return "unknown";
}

Monitor parse_monitor(const std::string& name) {
  if (name == "log_posterior") return Monitor::LogPosterior;
  if (name == "mean_imputed") return Monitor::MeanImputed;
  throw ValidationError("unknown monitor '" + name + "'");
}

void McmcConfig::validate() const {
  if (burn_in < 0) throw ValidationError("mcmc: burn_in must be nonnegative");
  if (!(target_ess > 0.0)) throw ValidationError("mcmc: target_ess must be positive");
  if (max_iterations < 1) throw ValidationError("mcmc: max_iterations must be positive");
  if (thin < 1) throw ValidationError("mcmc: thin must be positive");
  if (check_every < 10) throw ValidationError("mcmc: check_every must be at least 10");
}

int GibbsState::occupied() const {
  std::vector<bool> seen(components.size(), false);
  int k = 0;
  for (int label : z) {
    if (!seen[static_cast<std::size_t>(label)]) {
      seen[static_cast<std::size_t>(label)] = true;
      ++k;
    }
  }
  return k;
}

Vector stick_transform(const Vector& nu) {
  const Eigen::Index G = nu.size();
  if (G < 1) throw ValidationError("stick_transform: empty");
  if (nu[G - 1] != 1.0) throw ValidationError("stick_transform: last stick fraction must be 1");
  Vector alpha(G);
  double remaining = 1.0;
  double assigned = 0.0;
  for (Eigen::Index g = 0; g + 1 < G; ++g) {
    if (!(nu[g] >= 0.0) || !(nu[g] <= 1.0)) throw ValidationError("stick_transform: nu outside [0, 1]");
    alpha[g] = nu[g] * remaining;
    remaining *= 1.0 - nu[g];
    assigned += alpha[g];
  }
  alpha[G - 1] = std::max(0.0, 1.0 - assigned);
  return alpha;
}

std::vector<int> component_counts(const std::vector<int>& z, int G) {
  std::vector<int> counts(static_cast<std::size_t>(G), 0);
  for (int label : z) ++counts[static_cast<std::size_t>(label)];
  return counts;
}

std::vector<int> update_assignments(const Matrix& W, const Vector& alpha,
                                    const std::vector<JointComponent>& components, Rng& rng) {
  std::vector<kernels::WeightedGaussian> terms;
  terms.reserve(components.size());
  for (std::size_t g = 0; g < components.size(); ++g) {
    const double a = alpha[static_cast<Eigen::Index>(g)];
    terms.push_back({a > 0.0 ? std::log(a) : -std::numeric_limits<double>::infinity(),
                     components[g].mu_w, CholFactor::of(components[g].sigma_w)});
  }
  Matrix logw;
  kernels::component_log_weights(W, terms, logw);
  std::vector<int> z(static_cast<std::size_t>(W.rows()));
  std::vector<double> row(components.size());
  for (Eigen::Index i = 0; i < W.rows(); ++i) {
    for (std::size_t g = 0; g < row.size(); ++g) row[g] = logw(i, static_cast<Eigen::Index>(g));
    z[static_cast<std::size_t>(i)] = static_cast<int>(sample_categorical_log(row, rng));
  }
  return z;
}

StickDraw update_sticks(const std::vector<int>& z, int G, double eta, Rng& rng) {
  const auto counts = component_counts(z, G);
  StickDraw out;
  out.nu.resize(G);
  out.log1m_nu.resize(G);
  int tail = static_cast<int>(z.size());
  for (int g = 0; g + 1 < G; ++g) {
    tail -= counts[static_cast<std::size_t>(g)];
    // Beta(a, b) as X / (X + Y); log(1 - nu) from Y directly.
    const double x = sample_gamma(1.0 + counts[static_cast<std::size_t>(g)], 1.0, rng);
    const double y = sample_gamma(eta + tail, 1.0, rng);
    const double total = x + y;
    if (total == 0.0) {
      out.nu[g] = 1.0 / (1.0 + eta + tail);
      out.log1m_nu[g] = std::log1p(-out.nu[g]);
      continue;
    }
    out.nu[g] = x / total;
    out.log1m_nu[g] = y > 0.0 ? std::log(y) - std::log(total) : kLog1mNuFloor;
  }
  out.nu[G - 1] = 1.0;
  out.log1m_nu[G - 1] = -std::numeric_limits<double>::infinity();
  out.alpha = stick_transform(out.nu);
  return out;
}

double update_eta(const Vector& log1m_nu, const Hyperparams& hyper, Rng& rng) {
  const Eigen::Index G = log1m_nu.size();
  double rate = hyper.b_eta;
  for (Eigen::Index g = 0; g + 1 < G; ++g) rate -= std::max(log1m_nu[g], kLog1mNuFloor);
  return sample_gamma(hyper.a_eta + static_cast<double>(G - 1), rate, rng);
}

std::vector<JointComponent> update_components(const Matrix& W, const std::vector<int>& z,
                                              const Hyperparams& hyper, const Vector& delta,
                                              Rng& rng) {
  const int p = static_cast<int>(W.cols());
  const int G = hyper.G;
  std::vector<int> counts(static_cast<std::size_t>(G), 0);
  std::vector<Vector> sums(static_cast<std::size_t>(G), Vector::Zero(p));
  for (Eigen::Index i = 0; i < W.rows(); ++i) {
    const auto g = static_cast<std::size_t>(z[static_cast<std::size_t>(i)]);
    ++counts[g];
    sums[g] += W.row(i).transpose();
  }
  std::vector<Vector> means(static_cast<std::size_t>(G));
  std::vector<Matrix> scatter(static_cast<std::size_t>(G), Matrix::Zero(p, p));
  for (int g = 0; g < G; ++g) {
    const auto k = static_cast<std::size_t>(g);
    means[k] = counts[k] > 0 ? Vector(sums[k] / counts[k]) : Vector::Zero(p);
  }
  for (Eigen::Index i = 0; i < W.rows(); ++i) {
    const auto g = static_cast<std::size_t>(z[static_cast<std::size_t>(i)]);
    const Vector r = W.row(i).transpose() - means[g];
    scatter[g].selfadjointView<Eigen::Lower>().rankUpdate(r);
  }

  const Matrix Delta = delta.asDiagonal();
  std::vector<JointComponent> out(static_cast<std::size_t>(G));
  for (int g = 0; g < G; ++g) {
    const auto k = static_cast<std::size_t>(g);
    const double n = counts[k];
    Matrix scale = Delta;
    Vector post_mean = hyper.mu0;
    if (n > 0) {
      const Vector diff = means[k] - hyper.mu0;
      scale += scatter[k].selfadjointView<Eigen::Lower>();
      scale += (hyper.h * n / (hyper.h + n)) * diff * diff.transpose();
      post_mean = (hyper.h * hyper.mu0 + n * means[k]) / (hyper.h + n);
    }
    JointComponent c;
    c.sigma_w = sample_inverse_wishart(hyper.f + n, symmetrize(scale), rng);
    const CholFactor mean_cov = CholFactor::of(c.sigma_w / (hyper.h + n));
    c.mu_w = sample_mvn(post_mean, mean_cov, rng);
    out[k] = std::move(c);
  }
  return out;
}

Vector update_delta(const std::vector<JointComponent>& components, const Hyperparams& hyper,
                    Rng& rng) {
  const Eigen::Index p = hyper.b_delta.size();
  Vector rate = hyper.b_delta;
  for (const auto& c : components) {
    rate += 0.5 * CholFactor::of(c.sigma_w).inverse_diagonal();
  }
  const double shape = hyper.a_delta + 0.5 * static_cast<double>(components.size()) * hyper.f;
  Vector out(p);
  for (Eigen::Index j = 0; j < p; ++j) out[j] = sample_gamma(shape, rate[j], rng);
  return out;
}

Imputation impute_step(const MissingDataset& data, const LcwmModel& model, Rng& rng) {
  Imputation out;
  const auto rows = data.missing_rows();
  out.z_mis.resize(rows.size());
  out.y_fill.resize(static_cast<Eigen::Index>(rows.size()));
  const int d = data.d();
  if (model.covariate_dim() != d) throw ValidationError("impute_step: model / data dimension mismatch");
  const Vector& alpha = model.weights().alpha;
  for (std::size_t k = 0; k < rows.size(); ++k) {
    const int i = rows[k];
    Vector x = d > 0 ? Vector(data.X.row(i).transpose()) : Vector(0);
    std::size_t g = 0;
    if (d == 0) {
      g = sample_categorical(std::span<const double>(alpha.data(), static_cast<std::size_t>(alpha.size())), rng);
    } else {
      const Vector probs = posterior_z_given_x(x, model);
      g = sample_categorical(std::span<const double>(probs.data(), static_cast<std::size_t>(probs.size())), rng);
    }
    const Predictive pred = conditional_predictive(x, model.components()[g]);
    out.z_mis[k] = static_cast<int>(g);
    out.y_fill[static_cast<Eigen::Index>(k)] = pred.mean + std::sqrt(pred.variance) * rng.normal();
  }
  return out;
}

std::vector<int> relabel_sort(GibbsState& state) {
  const int G = static_cast<int>(state.alpha.size());
  std::vector<int> order(static_cast<std::size_t>(G));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return state.alpha[a] > state.alpha[b]; });
  std::vector<int> new_label(static_cast<std::size_t>(G));
  for (int pos = 0; pos < G; ++pos) new_label[static_cast<std::size_t>(order[static_cast<std::size_t>(pos)])] = pos;

  Vector alpha(G);
  std::vector<JointComponent> comps(static_cast<std::size_t>(G));
  for (int pos = 0; pos < G; ++pos) {
    const auto old = static_cast<std::size_t>(order[static_cast<std::size_t>(pos)]);
    alpha[pos] = state.alpha[static_cast<Eigen::Index>(old)];
    comps[static_cast<std::size_t>(pos)] = std::move(state.components[old]);
  }
  state.alpha = std::move(alpha);
  state.components = std::move(comps);
  for (int& label : state.z) label = new_label[static_cast<std::size_t>(label)];
  for (int& label : state.z_mis) label = new_label[static_cast<std::size_t>(label)];
  return order;
}

double log_posterior(const GibbsState& state, const MissingDataset& data, const Hyperparams& hyper) {
  const int G = static_cast<int>(state.components.size());
  const int p = data.p();
  std::vector<CholFactor> factors;
  factors.reserve(static_cast<std::size_t>(G));
  for (const auto& c : state.components) factors.push_back(CholFactor::of(c.sigma_w));

  double lp = 0.0;
  const Vector y = complete_response(data, state.y_fill);
  for (int i = 0; i < data.n(); ++i) {
    const auto g = static_cast<std::size_t>(state.z[static_cast<std::size_t>(i)]);
    lp += std::log(state.alpha[static_cast<Eigen::Index>(g)]);
    lp += mvn_logpdf(data.joint_row(i, y[i]), state.components[g].mu_w, factors[g]);
  }

  const Vector delta = hyper.fixed_delta ? *hyper.fixed_delta : state.delta;
  const Matrix Delta = delta.asDiagonal();
  for (int g = 0; g < G; ++g) {
    const auto& c = state.components[static_cast<std::size_t>(g)];
    lp += inverse_wishart_logpdf(c.sigma_w, hyper.f, Delta);
    const CholFactor mean_cov = CholFactor::from_lower(factors[static_cast<std::size_t>(g)].lower() / std::sqrt(hyper.h));
    lp += mvn_logpdf(c.mu_w, hyper.mu0, mean_cov);
  }
  for (int g = 0; g + 1 < G; ++g) {
    // Beta(1, eta) density: eta (1 - nu)^(eta - 1)
    lp += std::log(state.eta) + (state.eta - 1.0) * std::max(state.log1m_nu[g], kLog1mNuFloor);
  }
  lp += gamma_logpdf(state.eta, hyper.a_eta, hyper.b_eta);
  if (!hyper.fixed_delta) {
    for (int j = 0; j < p; ++j) lp += gamma_logpdf(state.delta[j], hyper.a_delta, hyper.b_delta[j]);
  }
  return lp;
}

void check_state(const GibbsState& state, const MissingDataset& data, int G) {
  auto fail = [](const std::string& what) { throw NumericalError("gibbs state invariant: " + what); };
  if (static_cast<int>(state.components.size()) != G || state.alpha.size() != G || state.nu.size() != G) {
    fail("component count");
  }
  if (static_cast<int>(state.z.size()) != data.n()) fail("label count");
  for (int label : state.z) {
    if (label < 0 || label >= G) fail("label out of range");
  }
  for (int label : state.z_mis) {
    if (label < 0 || label >= G) fail("imputation label out of range");
  }
  if (state.y_fill.size() != data.n_missing() || !state.y_fill.allFinite()) fail("imputed values");
  if (std::abs(state.alpha.sum() - 1.0) > 1e-12 || (state.alpha.array() < 0.0).any()) fail("alpha");
  for (int g = 0; g + 1 < G; ++g) {
    if (state.alpha[g] < state.alpha[g + 1]) fail("alpha not sorted");
  }
  Vector sorted_sticks = stick_transform(state.nu);
  std::sort(sorted_sticks.data(), sorted_sticks.data() + G, std::greater<>());
  if ((sorted_sticks - state.alpha).cwiseAbs().maxCoeff() > 1e-12) fail("alpha does not match sticks");
  if (!(state.eta > 0.0)) fail("eta");
}

GibbsSampler::GibbsSampler(const MissingDataset& data, const HyperOverrides& overrides,
                           std::uint64_t seed)
    : data_(data), missing_(data.missing_rows()), rng_(seed) {
  data_.validate();
  const int n = data_.n();
  const int p = data_.p();
  const Vector yobs = data_.observed_y();

  // Initial fill: draws from a normal fitted to the observed responses.
  double mean = 0.0;
  double sd = 1.0;
  if (yobs.size() > 0) mean = yobs.mean();
  if (yobs.size() > 1) sd = std::sqrt((yobs.array() - mean).square().sum() / static_cast<double>(yobs.size() - 1));
  if (!(sd > 0.0)) sd = 1.0;
  state_.y_fill.resize(static_cast<Eigen::Index>(missing_.size()));
  for (Eigen::Index k = 0; k < state_.y_fill.size(); ++k) state_.y_fill[k] = mean + sd * rng_.normal();

  W_.resize(n, p);
  W_.leftCols(data_.d()) = data_.X;
  W_.col(p - 1) = data_.y;
  write_fill();

  hyper_ = resolve_hyperparams(overrides, W_);
  const int G = hyper_.G;

  // Initial labels: a few Lloyd iterations on standardized completed data,
  // centers seeded at quantiles of the response.
  const int k0 = std::min(G, 3);
  const Vector mu = W_.colwise().mean().transpose();
  Vector sdv = (W_.rowwise() - mu.transpose()).colwise().norm().transpose() / std::sqrt(std::max(1.0, n - 1.0));
  for (Eigen::Index j = 0; j < sdv.size(); ++j) {
    if (!(sdv[j] > 0.0)) sdv[j] = 1.0;
  }
  const Matrix S = (W_.rowwise() - mu.transpose()).array().rowwise() / sdv.transpose().array();
  std::vector<int> by_y(static_cast<std::size_t>(n));
  std::iota(by_y.begin(), by_y.end(), 0);
  std::stable_sort(by_y.begin(), by_y.end(), [&](int a, int b) { return W_(a, p - 1) < W_(b, p - 1); });
  Matrix centers(k0, p);
  for (int c = 0; c < k0; ++c) {
    const auto q = static_cast<std::size_t>((2 * c + 1) * n / (2 * k0));
    centers.row(c) = S.row(by_y[std::min(q, static_cast<std::size_t>(n - 1))]);
  }
  state_.z.assign(static_cast<std::size_t>(n), 0);
  for (int iter = 0; iter < 10; ++iter) {
    for (int i = 0; i < n; ++i) {
      Eigen::Index best = 0;
      (centers.rowwise() - S.row(i)).rowwise().squaredNorm().minCoeff(&best);
      state_.z[static_cast<std::size_t>(i)] = static_cast<int>(best);
    }
    Matrix sums = Matrix::Zero(k0, p);
    Vector counts = Vector::Zero(k0);
    for (int i = 0; i < n; ++i) {
      sums.row(state_.z[static_cast<std::size_t>(i)]) += S.row(i);
      counts[state_.z[static_cast<std::size_t>(i)]] += 1.0;
    }
    for (int c = 0; c < k0; ++c) {
      if (counts[c] > 0) centers.row(c) = sums.row(c) / counts[c];
    }
  }

  state_.eta = 1.0;
  state_.delta = hyper_.fixed_delta ? *hyper_.fixed_delta
                                    : Vector(hyper_.a_delta * hyper_.b_delta.cwiseInverse());
  StickDraw sticks = update_sticks(state_.z, G, state_.eta, rng_);
  state_.nu = std::move(sticks.nu);
  state_.log1m_nu = std::move(sticks.log1m_nu);
  state_.alpha = std::move(sticks.alpha);
  state_.components = update_components(W_, state_.z, hyper_, state_.delta, rng_);
  state_.z_mis.assign(missing_.size(), 0);
  relabel_sort(state_);
  state_.log_posterior = log_posterior(state_, data_, hyper_);
}

void GibbsSampler::write_fill() {
  const Eigen::Index last = W_.cols() - 1;
  for (std::size_t k = 0; k < missing_.size(); ++k) {
    W_(missing_[k], last) = state_.y_fill[static_cast<Eigen::Index>(k)];
  }
}

void GibbsSampler::sweep() {
  const int G = hyper_.G;
  state_.z = update_assignments(W_, state_.alpha, state_.components, rng_);

  StickDraw sticks = update_sticks(state_.z, G, state_.eta, rng_);
  state_.nu = std::move(sticks.nu);
  state_.log1m_nu = std::move(sticks.log1m_nu);
  state_.alpha = std::move(sticks.alpha);
  state_.eta = update_eta(state_.log1m_nu, hyper_, rng_);

  state_.components = update_components(W_, state_.z, hyper_, state_.delta, rng_);
  state_.delta = hyper_.fixed_delta ? *hyper_.fixed_delta : update_delta(state_.components, hyper_, rng_);

  if (!missing_.empty()) {
    const LcwmModel model = LcwmModel::from_joint(MixtureWeights{state_.alpha}, state_.components);
    Imputation imp = impute_step(data_, model, rng_);
    state_.z_mis = std::move(imp.z_mis);
    state_.y_fill = std::move(imp.y_fill);
    write_fill();
  }

  relabel_sort(state_);
  state_.log_posterior = log_posterior(state_, data_, hyper_);
#ifndef NDEBUG
  check_state(state_, data_, G);
#endif
}

namespace {

double monitor_value(Monitor m, const GibbsState& s) {
  if (m == Monitor::LogPosterior) return s.log_posterior;
  return s.y_fill.size() > 0 ? s.y_fill.mean() : 0.0;
}

std::vector<MonitorEss> compute_ess(const std::vector<Monitor>& monitors, const ChainDiagnostics& d) {
  std::vector<MonitorEss> out;
  for (Monitor m : monitors) {
    const auto& series = m == Monitor::LogPosterior ? d.trace_log_posterior : d.trace_mean_imputed;
    MonitorEss e{m, 0.0, false};
    if (series.size() >= 10) {
      const EssResult r = effective_sample_size(series);
      e.ess = r.ess;
      e.defined = r.defined;
    }
    out.push_back(e);
  }
  return out;
}

bool targets_met(const std::vector<MonitorEss>& ess, double target) {
  for (const auto& e : ess) {
    if (!e.defined || e.ess < target) return false;
  }
  return true;
}

}  // namespace

Chain run_chain(const MissingDataset& data, const HyperOverrides& overrides,
                const McmcConfig& config, const StateSink& sink) {
  config.validate();
  data.validate();
  if (data.n_missing() == data.n()) throw ValidationError("run_chain: every response is missing");

  std::vector<Monitor> monitors = config.monitor;
  Chain chain;
  if (data.n_missing() == 0) {
    std::erase(monitors, Monitor::MeanImputed);
  }
  if (monitors.empty()) monitors.push_back(Monitor::LogPosterior);

  GibbsSampler sampler(data, overrides, config.seed);
  chain.hyper = sampler.hyper();
  const int G = sampler.hyper().G;
  auto& diag = chain.diagnostics;
  double best = -std::numeric_limits<double>::infinity();

  for (int s = 1; s <= config.burn_in; ++s) {
    sampler.sweep();
    const int occ = sampler.state().occupied();
    diag.occupied.push_back(occ);
    if (occ >= G) diag.saturated = true;
  }

  int post = 0;
  std::size_t next_check = static_cast<std::size_t>(config.check_every);
  while (post < config.max_iterations) {
    sampler.sweep();
    ++post;
    const GibbsState& st = sampler.state();
    const int occ = st.occupied();
    diag.occupied.push_back(occ);
    diag.max_occupied_after_burn_in = std::max(diag.max_occupied_after_burn_in, occ);
    if (occ >= G) diag.saturated = true;
    if (post % config.thin != 0) continue;

    const int iteration = config.burn_in + post;
    diag.trace_log_posterior.push_back(st.log_posterior);
    diag.trace_mean_imputed.push_back(monitor_value(Monitor::MeanImputed, st));
    if (st.log_posterior > best) {
      best = st.log_posterior;
      chain.map_state = st;
      chain.map_index = chain.retained;
      chain.map_iteration = iteration;
    }
    if (config.keep_states) {
      chain.states.push_back(st);
      chain.iterations.push_back(iteration);
    }
    if (sink) sink(iteration, st);
    ++chain.retained;

    if (chain.retained >= next_check) {
      next_check += static_cast<std::size_t>(config.check_every);
      diag.ess = compute_ess(monitors, diag);
      if (targets_met(diag.ess, config.target_ess)) {
        diag.target_reached = true;
        break;
      }
    }
  }
  diag.sweeps = config.burn_in + post;
  if (chain.retained == 0) throw ValidationError("run_chain: no retained states (check thin / max_iterations)");
  if (!diag.target_reached) {
    diag.ess = compute_ess(monitors, diag);
    diag.target_reached = targets_met(diag.ess, config.target_ess);
    if (!diag.target_reached) {
      diag.warnings.push_back("target ESS not reached within max_iterations");
    }
  }
  if (diag.saturated) {
    diag.warnings.push_back("occupied components reached G = " + std::to_string(G) +
                            "; consider increasing G");
  }
  return chain;
}

}  // namespace cwm
