#include "bypass/govi_engine.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "bypass/distributions.hpp"
#include "bypass/errors.hpp"

namespace bypass {
namespace {

double rel_change(double next, double prev) {
  return std::abs(next - prev) / (std::abs(prev) + 1e-12);
}

double max_rel_change(const VariationalState& next, const VariationalState& prev) {
  return std::max({rel_change(next.alpha_mean, prev.alpha_mean), rel_change(next.beta_mean, prev.beta_mean),
                   rel_change(next.mu_mean, prev.mu_mean), rel_change(next.mu_var, prev.mu_var)});
}

WeightBelief kalman_moments(const WeightBelief& prev, const VariationalState& vs, const Vector& x, double y) {
  const Matrix P = predictive_covariance(prev, vs.alpha_mean);
  const Vector g = kalman_gain(P, x, vs.beta_mean);
  return measurement_update(prev, P, g, x, y, vs.mu_mean);
}

}  // namespace

void HyperParams::validate() const {
  if (!(a > 0.0) || !std::isfinite(a)) throw ConfigError("a must be positive and finite");
  if (!(b > 0.0) || !std::isfinite(b)) throw ConfigError("b must be positive and finite");
  if (!(epsilon >= 0.0) || !std::isfinite(epsilon)) throw ConfigError("epsilon must be finite and >= 0");
  for (std::size_t j = 0; j < kCount; ++j) {
    if (!(omega_min[j] > 0.0) || !std::isfinite(omega_min[j])) {
      throw ConfigError("omega_min." + std::string(kNames[j]) + " must be positive and finite");
    }
  }
  if (!(c_omega > 0.0) || !std::isfinite(c_omega)) {
    throw ConfigError("c_omega must be positive and finite");
  }
}

void HyperParams::validate_floors() const {
  validate();
  const auto w = omega();
  for (std::size_t j = 0; j < kCount; ++j) {
    if (w[j] < omega_min[j]) {
      throw ConfigError(std::string(kNames[j]) + " is below its omega_min floor");
    }
  }
}

void GoviConfig::validate() const {
  if (max_fixed_point_iters < 0) {
    throw ConfigError("max_fixed_point_iters must be >= 0");
  }
  if (!(rel_tol > 0.0)) {
    throw ConfigError("rel_tol must be > 0");
  }
  if (!(alpha_denominator_floor > 0.0)) {
    throw ConfigError("alpha_denominator_floor must be > 0");
  }
  if (!(beta0 > 0.0) || !std::isfinite(beta0)) {
    throw ConfigError("beta0 must be positive and finite");
  }
  guards.validate();
}

double update_alpha(double a, double b, const WeightBelief& belief_t, const WeightBelief& belief_prev, double floor) {
  const double drift = (belief_t.mean - belief_prev.mean).squaredNorm();
  const double trace_diff = belief_t.covariance.trace() - belief_prev.covariance.trace();
  const double denom = std::max(2.0 * b + drift + trace_diff, floor);
  return 2.0 * a / denom;
}

double compute_rho(double y, const Vector& x, const WeightBelief& belief, double mu_mean, double mu_var,
                   double rho_floor) {
  const double r = y - x.dot(belief.mean) - mu_mean;
  const double rho = r * r + x.dot(belief.covariance * x) + mu_var;
  return std::max(rho, rho_floor);
}

double update_beta(double rho, const NumericGuards& guards) {
  return gig_beta_mean(rho, guards);
}

MuMoments update_mu(double y, const Vector& x, const WeightBelief& belief, double beta_old, double epsilon,
                    const NumericGuards& guards) {
  if (epsilon == 0.0) {
    return {0.0, 0.0};
  }
  TruncGaussSpec spec;
  spec.location = y - x.dot(belief.mean);
  spec.precision = beta_old;
  spec.lower = -epsilon;
  spec.upper = epsilon;
  const TruncGaussMoments m = trunc_gauss_moments(spec, guards);
  return {m.mean, m.variance};
}

VariationalState initial_vstate(const HyperParams& hyper, const GoviConfig& cfg) {
  VariationalState vs;
  vs.alpha_mean = hyper.a / hyper.b;
  vs.beta_mean = cfg.beta0;
  vs.mu_mean = 0.0;
  vs.mu_var = ubar_variance(hyper.epsilon);
  return vs;
}

StepResult bypass_step(const WeightBelief& belief, const VariationalState& vstate, const HyperParams& hyper,
                       const Observation& obs, const GoviConfig& cfg) {
  if (!obs.y.has_value()) {
    throw std::invalid_argument("bypass_step: observation has no output; use handle_missing");
  }
  const double y = *obs.y;
  const Vector& x = obs.x;

  StepResult out;
  out.pred = predict(belief, vstate, x).dist;

  VariationalState current = vstate;
  for (int it = 1; it <= cfg.max_fixed_point_iters; ++it) {
    const WeightBelief candidate = kalman_moments(belief, current, x, y);

    VariationalState next;
    const MuMoments mu = update_mu(y, x, candidate, current.beta_mean, hyper.epsilon, cfg.guards);
    next.mu_mean = mu.mean;
    next.mu_var = mu.variance;
    out.diag.rho = compute_rho(y, x, candidate, next.mu_mean, next.mu_var, cfg.guards.rho_floor);
    next.beta_mean = update_beta(out.diag.rho, cfg.guards);
    next.alpha_mean = update_alpha(hyper.a, hyper.b, candidate, belief, cfg.alpha_denominator_floor);

    const double change = max_rel_change(next, current);
    current = next;
    out.diag.iterations = it;
    if (change <= cfg.rel_tol) {
      out.diag.converged = true;
      break;
    }
  }
  if (cfg.max_fixed_point_iters == 0) {
    out.diag.converged = true;
  }

  out.belief = kalman_moments(belief, current, x, y);
  out.vstate = current;
  out.diag.residual = y - x.dot(out.belief.mean) - current.mu_mean;
  if (cfg.max_fixed_point_iters == 0) {
    out.diag.rho = compute_rho(y, x, out.belief, current.mu_mean, current.mu_var, cfg.guards.rho_floor);
  }
  return out;
}

StepResult handle_missing(const WeightBelief& belief, const VariationalState& vstate, const Vector& x) {
  const Prediction p = predict(belief, vstate, x);
  StepResult out;
  out.pred = p.dist;
  out.belief.mean = belief.mean;
  out.belief.covariance = p.P;
  out.vstate = vstate;
  out.diag.converged = true;
  return out;
}

void check_observation(const Observation& obs, std::size_t index, Eigen::Index dim) {
  if (obs.x.size() != dim) {
    throw StreamError(index, "feature dimension " + std::to_string(obs.x.size()) + " != " + std::to_string(dim));
  }
  if (!obs.x.allFinite()) {
    throw StreamError(index, "non-finite feature");
  }
  if (obs.y.has_value() && !std::isfinite(*obs.y)) {
    throw StreamError(index, "non-finite output");
  }
}

BypassFilter::BypassFilter(Eigen::Index dim, const HyperParams& hyper, const GoviConfig& cfg)
    : belief_(WeightBelief::zero(dim)), hyper_(hyper), cfg_(cfg) {
  hyper_.validate();
  cfg_.validate();
  vstate_ = initial_vstate(hyper_, cfg_);
}

StepResult BypassFilter::step(const Observation& obs) {
  check_observation(obs, t_, belief_.dim());
  StepResult r = obs.y ? bypass_step(belief_, vstate_, hyper_, obs, cfg_) : handle_missing(belief_, vstate_, obs.x);
  belief_ = r.belief;
  vstate_ = r.vstate;
  ++t_;
  return r;
}

PredictiveDist BypassFilter::predict(const Vector& x) const {
  return bypass::predict(belief_, vstate_, x).dist;
}

}  // namespace bypass
