#include "bypass/ada_engine.hpp"

#include <algorithm>

#include "bypass/errors.hpp"

namespace bypass {

GradientState GradientState::initial(Eigen::Index dim) {
  GradientState g;
  for (auto& p : g.psi) {
    p = Vector::Zero(dim);
  }
  g.s_matrix = Matrix::Identity(dim, dim);
  return g;
}

bool GradientState::all_finite() const {
  return s_matrix.allFinite() && std::all_of(psi.begin(), psi.end(), [](const Vector& p) { return p.allFinite(); });
}

HyperUpdate pa_hyper_update(const HyperParams& hyper, const GradientState& grads, const Vector& x, double residual,
                            double beta_prev) {
  HyperUpdate out;
  out.hyper = hyper;
  const auto omega = hyper.omega();
  std::array<double, HyperParams::kCount> next{};
  for (std::size_t j = 0; j < HyperParams::kCount; ++j) {
    const double step = hyper.c_omega * beta_prev * x.dot(grads.psi[j]) * residual;
    out.unconstrained[j] = omega[j] + step;
    next[j] = std::max(out.unconstrained[j], hyper.omega_min[j]);
  }
  out.hyper.set_omega(next);
  return out;
}

Matrix update_s(const Matrix& s_prev, const Vector& g, const Vector& x) {
  const Eigen::Index n = x.size();
  const Matrix left = Matrix::Identity(n, n) - g * x.transpose();
  return left * s_prev * left.transpose();
}

Vector update_psi(const Vector& psi_prev, const Vector& g, const Vector& x, double beta_t, const Matrix& s_t,
                  double residual_t) {
  return psi_prev - g * x.dot(psi_prev) + beta_t * (s_t * x) * residual_t;
}

AdaStepResult ada_bypass_step(const WeightBelief& belief, const VariationalState& vstate, const HyperParams& hyper,
                              const GradientState& grads, const Observation& obs, const GoviConfig& cfg) {
  AdaStepResult out;
  if (!obs.y) {
    StepResult r = handle_missing(belief, vstate, obs.x);
    out.belief = std::move(r.belief);
    out.vstate = r.vstate;
    out.pred = r.pred;
    out.diag = r.diag;
    out.hyper = hyper;
    out.grads = grads;
    out.unconstrained = hyper.omega();
    return out;
  }

  const Vector& x = obs.x;
  const double y = *obs.y;

  const double residual_prev = y - x.dot(belief.mean) - vstate.mu_mean;
  const HyperUpdate hu = pa_hyper_update(hyper, grads, x, residual_prev, vstate.beta_mean);
  out.hyper = hu.hyper;
  out.unconstrained = hu.unconstrained;

  StepResult r = bypass_step(belief, vstate, out.hyper, obs, cfg);

  // Gain of the committed measurement update.
  const Matrix P = predictive_covariance(belief, r.vstate.alpha_mean);
  const Vector g = kalman_gain(P, x, r.vstate.beta_mean);
  const double residual_t = y - x.dot(belief.mean) - r.vstate.mu_mean;

  out.grads.s_matrix = update_s(grads.s_matrix, g, x);
  for (std::size_t j = 0; j < HyperParams::kCount; ++j) {
    out.grads.psi[j] = update_psi(grads.psi[j], g, x, r.vstate.beta_mean, out.grads.s_matrix, residual_t);
  }

  out.belief = std::move(r.belief);
  out.vstate = r.vstate;
  out.pred = r.pred;
  out.diag = r.diag;
  return out;
}

AdaBypassFilter::AdaBypassFilter(Eigen::Index dim, const HyperParams& hyper, const GoviConfig& cfg)
    : belief_(WeightBelief::zero(dim)), hyper_(hyper), grads_(GradientState::initial(dim)), cfg_(cfg) {
  hyper_.validate_floors();
  cfg_.validate();
  vstate_ = initial_vstate(hyper_, cfg_);
}

AdaStepResult AdaBypassFilter::step(const Observation& obs) {
  check_observation(obs, t_, belief_.dim());
  AdaStepResult r = ada_bypass_step(belief_, vstate_, hyper_, grads_, obs, cfg_);
  belief_ = r.belief;
  vstate_ = r.vstate;
  hyper_ = r.hyper;
  grads_ = r.grads;
  ++t_;
  return r;
}

PredictiveDist AdaBypassFilter::predict(const Vector& x) const {
  return bypass::predict(belief_, vstate_, x).dist;
}

}  // namespace bypass
