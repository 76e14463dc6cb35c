#pragma once

#include <cstddef>

#include "bypass/filter_state.hpp"
#include "bypass/hyper_params.hpp"
#include "bypass/special_functions.hpp"

namespace bypass {

struct GoviConfig {
  /// 0 freezes the variational means: the step reduces to a plain Kalman step.
  int max_fixed_point_iters = 50;
  double rel_tol = 1e-8;
  double alpha_denominator_floor = 1e-12;
  NumericGuards guards{};
  /// Initial output precision; its prior mean is undefined, so it is set directly.
  double beta0 = 500.0;

  void validate() const;
};

struct StepDiagnostics {
  int iterations = 0;
  bool converged = false;
  double rho = 0.0;
  double residual = 0.0;
};

struct MuMoments {
  double mean;
  double variance;
};

/// <alpha> = 2a / (2b + |dmu|^2 + tr(Sigma_t - Sigma_{t-1})), denominator floored.
double update_alpha(double a, double b, const WeightBelief& belief_t, const WeightBelief& belief_prev, double floor);

/// rho = (y - x'mu_w - <mu>)^2 + x'Sigma x + V_mu, floored at rho_floor.
double compute_rho(double y, const Vector& x, const WeightBelief& belief, double mu_mean, double mu_var, double rho_floor);

/// <beta> = K0(sqrt(rho)) / (sqrt(rho) K1(sqrt(rho))).
double update_beta(double rho, const NumericGuards& guards = {});

/// Moments of N(y - x'mu_w, 1/beta_old) truncated to [-eps, eps]; (0, 0) when eps == 0.
MuMoments update_mu(double y, const Vector& x, const WeightBelief& belief, double beta_old, double epsilon,
                    const NumericGuards& guards = {});

/// Prior-mean starting point: <alpha> = a/b, <beta> = beta0, <mu> = 0, V_mu = Var[Ubar].
VariationalState initial_vstate(const HyperParams& hyper, const GoviConfig& cfg);

struct StepResult {
  WeightBelief belief;
  VariationalState vstate;
  PredictiveDist pred;
  StepDiagnostics diag;
};

/// One observation of the GOVI fixed-point loop. The prediction uses the
/// previous step's state; the Kalman moments are recomputed inside every
/// iteration and committed with the final variational means.
StepResult bypass_step(const WeightBelief& belief, const VariationalState& vstate, const HyperParams& hyper,
                       const Observation& obs, const GoviConfig& cfg);

/// Missing output: emit the prediction and propagate the belief through the drift only.
StepResult handle_missing(const WeightBelief& belief, const VariationalState& vstate, const Vector& x);

/// Stateful BYPASS filter over a single stream.
class BypassFilter {
 public:
  BypassFilter(Eigen::Index dim, const HyperParams& hyper, const GoviConfig& cfg);

  /// Predicts, then updates with obs.y if present. Throws StreamError on non-finite input.
  StepResult step(const Observation& obs);
  PredictiveDist predict(const Vector& x) const;

  const WeightBelief& belief() const { return belief_; }
  const VariationalState& vstate() const { return vstate_; }
  const HyperParams& hyper() const { return hyper_; }
  const GoviConfig& config() const { return cfg_; }
  std::size_t steps() const { return t_; }

 private:
  WeightBelief belief_;
  VariationalState vstate_;
  HyperParams hyper_;
  GoviConfig cfg_;
  std::size_t t_ = 0;
};

/// Throws StreamError(index) if x or a present y is not finite.
void check_observation(const Observation& obs, std::size_t index, Eigen::Index dim);

}  // namespace bypass
