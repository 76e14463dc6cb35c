#pragma once

#include <cstddef>

#include "bypass/filter_state.hpp"

namespace bypass {

// ---------------------------------------------------------------------------
// Sequential Kalman filter (SKF)
//
// Random-walk weights with isotropic process noise q and measurement noise r,
// both re-estimated online from the innovations (Jazwinski-style), smoothed
// by an exponential forgetting factor. forgetting == 1 freezes q and r.
// ---------------------------------------------------------------------------

struct SkfConfig {
  double forgetting = 0.98;
  double r_floor = 1e-8;
  double r0 = 1.0 / 500.0;
  double q0 = 1.0 / 1000.0;

  void validate() const;
};

struct SkfState {
  Vector weight_mean;
  Matrix weight_cov;
  double r_hat = 1.0 / 500.0;
  double q_hat = 1.0 / 1000.0;
  double forgetting = 0.98;
  double r_floor = 1e-8;

  static SkfState initial(Eigen::Index dim, const SkfConfig& cfg);
};

struct SkfStepResult {
  SkfState state;
  PredictiveDist pred;
};

SkfStepResult skf_step(const SkfState& state, const Observation& obs);

/// Predictive distribution without touching the state.
PredictiveDist skf_predict(const SkfState& state, const Vector& x);

// ---------------------------------------------------------------------------
// PA-I regression
// ---------------------------------------------------------------------------

struct PaRegressorState {
  Vector weights;
  double c = 1.0;
  double epsilon = 0.0;
};

double eps_insensitive_loss(double y, double y_hat, double epsilon);

/// Closed-form PA-I step: tau = min(C, loss / |x|^2), w += sign(y - x'w) tau x.
PaRegressorState pa1_step(const PaRegressorState& state, const Observation& obs);

/// 0.5 |w - w_prev|^2 + C loss(y, x'w; eps)
double pa1_objective(const Vector& w, const Vector& w_prev, const Vector& x, double y, double c, double epsilon);

}  // namespace bypass
