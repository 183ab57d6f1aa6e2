#pragma once

// Blocked Gibbs sampler for a truncated stick-breaking mixture of
// multivariate normals on w = (x, y), with imputation of the missing
// responses through the regression (LCWM) view of each component.
//
// Priors:
//   alpha_g = nu_g prod_{k<g} (1 - nu_k),  nu_g ~ Beta(1, eta), nu_G = 1
//   eta ~ Gamma(a_eta, b_eta)
//   mu_g | Sigma_g ~ N(mu0, Sigma_g / h),  Sigma_g ~ IW(f, diag(delta))
//   delta_j ~ Gamma(a_delta, b_delta_j)

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "cwm/dataset.hpp"
#include "cwm/model.hpp"
#include "cwm/rng.hpp"

namespace cwm {

struct Hyperparams {
  int G = 10;
  Vector mu0;
  double h = 1.0;
  double f = 0.0;
  double a_eta = 0.5;
  double b_eta = 0.5;
  double a_delta = 0.0;
  /// One rate per coordinate of w.
  Vector b_delta;
  /// When set, delta is held at this value instead of being sampled.
  std::optional<Vector> fixed_delta;

  void validate(int p) const;
};

/// User overrides; anything left empty takes the data-driven default.
struct HyperOverrides {
  std::optional<int> G;
  std::optional<Vector> mu0;
  std::optional<double> h;
  std::optional<double> f;
  std::optional<double> a_eta;
  std::optional<double> b_eta;
  std::optional<double> a_delta;
  /// Either one value (broadcast) or p values.
  std::optional<Vector> b_delta;
  std::optional<Vector> fixed_delta;
};

/// Defaults: mu0 = column means of the completed data, h = 1, f = p + 2,
/// a_eta = b_eta = 0.5, a_delta = p, b_delta_j = a_delta / var_j.
Hyperparams resolve_hyperparams(const HyperOverrides& overrides, const Matrix& completed);

enum class Monitor { LogPosterior, MeanImputed };
std::string monitor_name(Monitor m);
Monitor parse_monitor(const std::string& name);

struct McmcConfig {
  int burn_in = 10000;
  double target_ess = 1500.0;
  /// Cap on post-burn-in sweeps.
  int max_iterations = 200000;
  int thin = 1;
  std::uint64_t seed = 1;
  std::vector<Monitor> monitor{Monitor::LogPosterior, Monitor::MeanImputed};
  /// Retained states between ESS checks.
  int check_every = 1000;
  /// Keep every retained state in Chain::states.
  bool keep_states = false;

  void validate() const;
};

struct GibbsState {
  /// Component label of every row (0-based).
  std::vector<int> z;
  /// Imputation label of every missing row, in row order.
  std::vector<int> z_mis;
  /// Current imputed responses, in missing-row order.
  Vector y_fill;
  /// Stick fractions in the order they were drawn (nu_G = 1) and their
  /// log(1 - nu), kept separately so tiny remainders do not round to 0.
  Vector nu;
  Vector log1m_nu;
  /// Mixing weights, sorted in decreasing order after relabeling.
  Vector alpha;
  double eta = 1.0;
  Vector delta;
  std::vector<JointComponent> components;
  double log_posterior = 0.0;

  int occupied() const;
};

/// alpha_g = nu_g prod_{k<g}(1 - nu_k); requires nu_G == 1.
Vector stick_transform(const Vector& nu);

struct StickDraw {
  Vector nu;
  Vector log1m_nu;
  Vector alpha;
};

std::vector<int> component_counts(const std::vector<int>& z, int G);

/// Draws every label from alpha_g phi_p(w_i; mu_g, Sigma_g).
std::vector<int> update_assignments(const Matrix& W, const Vector& alpha,
                                    const std::vector<JointComponent>& components, Rng& rng);

/// nu_g ~ Beta(1 + n_g, eta + sum_{k>g} n_k), nu_G = 1.
StickDraw update_sticks(const std::vector<int>& z, int G, double eta, Rng& rng);

/// eta ~ Gamma(a_eta + G - 1, b_eta - sum_{g<G} log(1 - nu_g)).
double update_eta(const Vector& log1m_nu, const Hyperparams& hyper, Rng& rng);

/// Normal-inverse-Wishart update of every component; empty components are
/// drawn from the prior.
std::vector<JointComponent> update_components(const Matrix& W, const std::vector<int>& z,
                                              const Hyperparams& hyper, const Vector& delta,
                                              Rng& rng);

/// delta_j ~ Gamma(a_delta + G f / 2, b_delta_j + 1/2 sum_g (Sigma_g^{-1})_jj).
Vector update_delta(const std::vector<JointComponent>& components, const Hyperparams& hyper,
                    Rng& rng);

struct Imputation {
  std::vector<int> z_mis;
  Vector y_fill;
};

/// Labels from p(Z | x) and responses from the component regression, for
/// every missing row. With d = 0 labels come from alpha alone.
Imputation impute_step(const MissingDataset& data, const LcwmModel& model, Rng& rng);

/// Stable sort of the components by decreasing alpha; permutes z, z_mis
/// and the component parameters consistently. Returns the permutation
/// (new position -> old label).
std::vector<int> relabel_sort(GibbsState& state);

/// Completed-data log likelihood plus the log prior of (mu, Sigma, nu, eta, delta).
double log_posterior(const GibbsState& state, const MissingDataset& data, const Hyperparams& hyper);

/// Throws NumericalError when a state invariant is violated.
void check_state(const GibbsState& state, const MissingDataset& data, int G);

/// One chain of the sampler. `sweep()` runs a single iteration in the order
/// assignments, sticks, eta, components, delta, imputation, relabel.
class GibbsSampler {
 public:
  GibbsSampler(const MissingDataset& data, const HyperOverrides& overrides, std::uint64_t seed);

  void sweep();

  const GibbsState& state() const noexcept { return state_; }
  const Hyperparams& hyper() const noexcept { return hyper_; }
  const MissingDataset& data() const noexcept { return data_; }
  /// Completed data matrix (n x p) for the current state.
  const Matrix& completed() const noexcept { return W_; }

 private:
  void write_fill();

  MissingDataset data_;
  std::vector<int> missing_;
  Matrix W_;
  Hyperparams hyper_;
  GibbsState state_;
  Rng rng_;
};

struct MonitorEss {
  Monitor monitor;
  double ess = 0.0;
  bool defined = true;
};

struct ChainDiagnostics {
  std::vector<double> trace_log_posterior;
  std::vector<double> trace_mean_imputed;
  /// Occupied components at every sweep, burn-in included.
  std::vector<int> occupied;
  std::vector<MonitorEss> ess;
  bool target_reached = false;
  bool saturated = false;
  int max_occupied_after_burn_in = 0;
  int sweeps = 0;
  std::vector<std::string> warnings;
};

struct Chain {
  std::vector<GibbsState> states;
  /// Sweep index (1-based) of every retained state.
  std::vector<int> iterations;
  GibbsState map_state;
  std::size_t map_index = 0;
  int map_iteration = 0;
  std::size_t retained = 0;
  Hyperparams hyper;
  ChainDiagnostics diagnostics;
};

/// Receives every retained state with its sweep index.
using StateSink = std::function<void(int iteration, const GibbsState&)>;

/// Burn-in, then retained (thinned) sweeps until every monitor reaches the
/// target ESS or max_iterations sweeps have run.
Chain run_chain(const MissingDataset& data, const HyperOverrides& overrides,
                const McmcConfig& config, const StateSink& sink = {});

}  // namespace cwm
