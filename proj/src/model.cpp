#include "cwm/model.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "cwm/distributions.hpp"
#include "cwm/errors.hpp"

namespace cwm {

void JointComponent::validate() const {
  if (mu_w.size() < 1) throw ValidationError("joint component: empty mean");
  if (sigma_w.rows() != mu_w.size() || sigma_w.cols() != mu_w.size()) {
    throw ValidationError("joint component: covariance shape does not match mean");
  }
  CholFactor::of(sigma_w);
}

void LcwmComponent::validate() const {
  const auto d = mu_x.size();
  if (b.size() != d || sigma_xx.rows() != d || sigma_xx.cols() != d) {
    throw ValidationError("lcwm component: inconsistent dimensions");
  }
  if (!(sigma2 > 0.0) || !std::isfinite(sigma2)) {
    throw ValidationError("lcwm component: conditional variance must be positive");
  }
  if (d > 0) CholFactor::of(sigma_xx);
}

void MixtureWeights::validate() const {
  if (alpha.size() < 1) throw ValidationError("mixture weights: empty");
  double total = 0.0;
  for (double a : alpha) {
    if (!(a >= 0.0) || !std::isfinite(a)) throw ValidationError("mixture weights: negative entry");
    total += a;
  }
  if (std::abs(total - 1.0) > 1e-12) {
    throw ValidationError("mixture weights: sum is " + std::to_string(total));
  }
}

LcwmModel::LcwmModel(MixtureWeights weights, std::vector<LcwmComponent> components)
    : weights_(std::move(weights)), components_(std::move(components)) {
  weights_.validate();
  if (components_.empty()) throw ValidationError("lcwm model: no components");
  if (static_cast<int>(components_.size()) != weights_.size()) {
    throw ValidationError("lcwm model: weight / component count mismatch");
  }
  d_ = components_.front().covariate_dim();
  xx_factors_.reserve(components_.size());
  for (const auto& c : components_) {
    if (c.covariate_dim() != d_) throw ValidationError("lcwm model: mixed covariate dimensions");
    if (!(c.sigma2 > 0.0)) throw ValidationError("lcwm model: conditional variance must be positive");
    xx_factors_.push_back(d_ > 0 ? CholFactor::of(c.sigma_xx) : CholFactor());
  }
}

LcwmModel LcwmModel::from_joint(const MixtureWeights& weights,
                                std::span<const JointComponent> components) {
  std::vector<LcwmComponent> out;
  out.reserve(components.size());
  for (const auto& c : components) {
    out.push_back(c.covariate_dim() == 0 ? marginal_only(c) : fmm_to_lcwm(c));
  }
  return LcwmModel(weights, std::move(out));
}

Vector LcwmModel::covariate_log_terms(const Vector& x) const {
  Vector out(size());
  for (int g = 0; g < size(); ++g) {
    const double la = std::log(weights_.alpha[g]);
    if (d_ == 0) {
      out[g] = la;
      continue;
    }
    const auto& c = components_[static_cast<std::size_t>(g)];
    out[g] = la + mvn_logpdf(x, c.mu_x, xx_factors_[static_cast<std::size_t>(g)]);
  }
  return out;
}

LcwmComponent fmm_to_lcwm(const JointComponent& c) {
  const int d = c.covariate_dim();
  if (d < 1) throw ValidationError("fmm_to_lcwm: no covariates (use marginal_only)");
  if (c.sigma_w.rows() != d + 1 || c.sigma_w.cols() != d + 1) {
    throw ValidationError("fmm_to_lcwm: covariance shape does not match mean");
  }
  // With L = chol(Sigma_w) = [[L_xx, 0], [l^T, l_yy]]:
  //   b^T = L_xx^{-T} l  and  sigma2 = l_yy^2 (the Schur complement).
  const CholFactor full = CholFactor::of(c.sigma_w);
  const Matrix& l = full.lower();
  const Matrix lxx = l.topLeftCorner(d, d);
  const Vector ly = l.row(d).head(d).transpose();

  LcwmComponent out;
  out.mu_x = c.mu_w.head(d);
  out.sigma_xx = c.sigma_w.topLeftCorner(d, d);
  out.b = lxx.transpose().triangularView<Eigen::Upper>().solve(ly);
  out.b0 = c.mu_w[d] - out.b.dot(out.mu_x);
  out.sigma2 = l(d, d) * l(d, d);
  return out;
}

LcwmComponent marginal_only(const JointComponent& c) {
  if (c.covariate_dim() != 0) throw ValidationError("marginal_only: component has covariates");
  if (!(c.sigma_w(0, 0) > 0.0)) throw NotSpdError(0, c.sigma_w(0, 0));
  LcwmComponent out;
  out.mu_x = Vector(0);
  out.sigma_xx = Matrix(0, 0);
  out.b = Vector(0);
  out.b0 = c.mu_w[0];
  out.sigma2 = c.sigma_w(0, 0);
  return out;
}

JointComponent lcwm_to_fmm(const LcwmComponent& c) {
  const int d = c.covariate_dim();
  JointComponent out;
  out.mu_w.resize(d + 1);
  out.sigma_w.resize(d + 1, d + 1);
  out.mu_w.head(d) = c.mu_x;
  out.mu_w[d] = c.b0 + c.b.dot(c.mu_x);
  const Vector sxy = c.sigma_xx * c.b;
  out.sigma_w.topLeftCorner(d, d) = c.sigma_xx;
  out.sigma_w.topRightCorner(d, 1) = sxy;
  out.sigma_w.bottomLeftCorner(1, d) = sxy.transpose();
  out.sigma_w(d, d) = c.sigma2 + c.b.dot(sxy);
  return out;
}

Predictive conditional_predictive(const Vector& x, const LcwmComponent& c) {
  return {c.b0 + c.b.dot(x), c.sigma2};
}

namespace {

Vector joint_log_terms(const Vector& x, double y, const LcwmModel& m) {
  Vector terms = m.covariate_log_terms(x);
  for (int g = 0; g < m.size(); ++g) {
    const auto& c = m.components()[static_cast<std::size_t>(g)];
    const Predictive pred = conditional_predictive(x, c);
    terms[g] += normal_logpdf(y, pred.mean, pred.variance);
  }
  return terms;
}

Vector normalized(Vector terms) {
  normalize_log_weights(std::span<double>(terms.data(), static_cast<std::size_t>(terms.size())));
  return terms;
}

}  // namespace

double lcwm_joint_logdensity(const Vector& x, double y, const LcwmModel& m) {
  const Vector terms = joint_log_terms(x, y, m);
  return log_sum_exp(std::span<const double>(terms.data(), static_cast<std::size_t>(terms.size())));
}

Vector posterior_z_given_xy(const Vector& x, double y, const LcwmModel& m) {
  return normalized(joint_log_terms(x, y, m));
}

Vector posterior_z_given_x(const Vector& x, const LcwmModel& m) {
  if (m.covariate_dim() == 0) return m.weights().alpha;
  return normalized(m.covariate_log_terms(x));
}

namespace {

Vector joint_mixture_terms(const Vector& w, const MixtureWeights& weights,
                           std::span<const JointComponent> components) {
  Vector terms(static_cast<Eigen::Index>(components.size()));
  for (std::size_t g = 0; g < components.size(); ++g) {
    const auto& c = components[g];
    terms[static_cast<Eigen::Index>(g)] =
        std::log(weights.alpha[static_cast<Eigen::Index>(g)]) +
        mvn_logpdf(w, c.mu_w, CholFactor::of(c.sigma_w));
  }
  return terms;
}

}  // namespace

double joint_mixture_logdensity(const Vector& w, const MixtureWeights& weights,
                                std::span<const JointComponent> components) {
  const Vector t = joint_mixture_terms(w, weights, components);
  return log_sum_exp(std::span<const double>(t.data(), static_cast<std::size_t>(t.size())));
}

Vector joint_responsibilities(const Vector& w, const MixtureWeights& weights,
                              std::span<const JointComponent> components) {
  return normalized(joint_mixture_terms(w, weights, components));
}

}  // namespace cwm
