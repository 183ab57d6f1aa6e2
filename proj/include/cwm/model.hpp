#pragma once

// Gaussian linear cluster-weighted model: joint (FMM) and regression (LCWM)
// parameterizations of one component, the mapping between them, and the
// mixture densities / posterior classification weights.
//
// Block ordering everywhere: covariates occupy indices 0..d-1, the response
// occupies index d.

#include <span>
#include <vector>

#include "cwm/linalg.hpp"

namespace cwm {

/// Component in joint space: w = (x, y) ~ N(mu_w, sigma_w).
struct JointComponent {
  Vector mu_w;
  Matrix sigma_w;

  int covariate_dim() const noexcept { return static_cast<int>(mu_w.size()) - 1; }
  void validate() const;
};

/// Component in regression space: x ~ N(mu_x, sigma_xx),
/// y | x ~ N(b0 + b.x, sigma2). With d = 0, mu_x and b are empty and the
/// component is the marginal N(b0, sigma2) of y.
struct LcwmComponent {
  Vector mu_x;
  Matrix sigma_xx;
  double b0 = 0.0;
  Vector b;
  double sigma2 = 1.0;

  int covariate_dim() const noexcept { return static_cast<int>(mu_x.size()); }
  void validate() const;
};

struct MixtureWeights {
  Vector alpha;

  int size() const noexcept { return static_cast<int>(alpha.size()); }
  /// Nonnegative entries summing to 1 within 1e-12.
  void validate() const;
};

/// Mixture in regression space. Caches the covariate Cholesky factors.
class LcwmModel {
 public:
  LcwmModel(MixtureWeights weights, std::vector<LcwmComponent> components);

  /// Maps every joint component; d = 0 components become marginal-only.
  static LcwmModel from_joint(const MixtureWeights& weights,
                              std::span<const JointComponent> components);

  int size() const noexcept { return static_cast<int>(components_.size()); }
  int covariate_dim() const noexcept { return d_; }
  const MixtureWeights& weights() const noexcept { return weights_; }
  const std::vector<LcwmComponent>& components() const noexcept { return components_; }
  const CholFactor& covariate_factor(int g) const { return xx_factors_[static_cast<std::size_t>(g)]; }

  /// log alpha_g + log phi_d(x; mu_g, Sigma_g) for every g (no normalization).
  Vector covariate_log_terms(const Vector& x) const;

 private:
  MixtureWeights weights_;
  std::vector<LcwmComponent> components_;
  std::vector<CholFactor> xx_factors_;
  int d_ = 0;
};

/// Regression parameters of a joint component (Schur complement on the
/// response block). Throws NotSpdError for a non-SPD sigma_w and
/// ValidationError when d = 0.
LcwmComponent fmm_to_lcwm(const JointComponent& c);

/// d = 0 counterpart of fmm_to_lcwm: the response marginal only.
LcwmComponent marginal_only(const JointComponent& c);

/// Inverse of fmm_to_lcwm.
JointComponent lcwm_to_fmm(const LcwmComponent& c);

struct Predictive {
  double mean;
  double variance;
};

Predictive conditional_predictive(const Vector& x, const LcwmComponent& c);

/// log p(x, y) for the LCWM mixture.
double lcwm_joint_logdensity(const Vector& x, double y, const LcwmModel& m);

/// p(Z | x, y).
Vector posterior_z_given_xy(const Vector& x, double y, const LcwmModel& m);

/// p(Z | x); returns alpha when d = 0.
Vector posterior_z_given_x(const Vector& x, const LcwmModel& m);

/// log of the joint Gaussian mixture sum_g alpha_g phi_p(w; mu_g, Sigma_g).
double joint_mixture_logdensity(const Vector& w, const MixtureWeights& weights,
                                std::span<const JointComponent> components);

/// Responsibilities of the joint Gaussian mixture at w.
Vector joint_responsibilities(const Vector& w, const MixtureWeights& weights,
                              std::span<const JointComponent> components);

}  // namespace cwm
