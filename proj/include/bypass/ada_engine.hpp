#pragma once

#include <array>
#include <cstddef>

#include "bypass/filter_state.hpp"
#include "bypass/govi_engine.hpp"
#include "bypass/hyper_params.hpp"

namespace bypass {

/// Sensitivities of the filtering moments to the hyperparameters:
/// psi[j] = d mu_w / d omega_j, and one S = d Sigma_w / d omega shared by all j.
struct GradientState {
  std::array<Vector, HyperParams::kCount> psi;
  Matrix s_matrix;

  /// psi = 0, S = I.
  static GradientState initial(Eigen::Index dim);
  bool all_finite() const;
};

struct HyperUpdate {
  HyperParams hyper;
  /// Pre-max values omega_{t-1} + C beta (x'psi_j) residual.
  std::array<double, HyperParams::kCount> unconstrained{};
};

/// omega_j <- max(omega_j + C_omega * beta_prev * (x'psi_j) * residual, omega_min_j).
/// residual = y - x'mu_w_{t-1} - <mu>_{t-1}.
HyperUpdate pa_hyper_update(const HyperParams& hyper, const GradientState& grads, const Vector& x, double residual,
                            double beta_prev);

/// S_t = (I - g x') S_{t-1} (I - x g').
Matrix update_s(const Matrix& s_prev, const Vector& g, const Vector& x);

/// psi_t = (I - g x') psi_{t-1} + beta_t S_t x residual_t, residual_t = y - x'mu_w_{t-1} - <mu>_t.
Vector update_psi(const Vector& psi_prev, const Vector& g, const Vector& x, double beta_t, const Matrix& s_t,
                  double residual_t);

struct AdaStepResult {
  WeightBelief belief;
  VariationalState vstate;
  HyperParams hyper;
  GradientState grads;
  PredictiveDist pred;
  StepDiagnostics diag;
  std::array<double, HyperParams::kCount> unconstrained{};
};

/// Prediction, hyperparameter step with t-1 quantities, GOVI step under the
/// new hyperparameters, then the S and psi recursions.
AdaStepResult ada_bypass_step(const WeightBelief& belief, const VariationalState& vstate, const HyperParams& hyper,
                              const GradientState& grads, const Observation& obs, const GoviConfig& cfg);

class AdaBypassFilter {
 public:
  AdaBypassFilter(Eigen::Index dim, const HyperParams& hyper, const GoviConfig& cfg);

  AdaStepResult step(const Observation& obs);
  PredictiveDist predict(const Vector& x) const;

  const WeightBelief& belief() const { return belief_; }
  const VariationalState& vstate() const { return vstate_; }
  const HyperParams& hyper() const { return hyper_; }
  const GradientState& grads() const { return grads_; }
  std::size_t steps() const { return t_; }

 private:
  WeightBelief belief_;
  VariationalState vstate_;
  HyperParams hyper_;
  GradientState grads_;
  GoviConfig cfg_;
  std::size_t t_ = 0;
};

}  // namespace bypass
