#pragma once

#include <optional>

#include <Eigen/Dense>

namespace bypass {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Gaussian filtering posterior N(mean, covariance) over the weight vector.
struct WeightBelief {
  Vector mean;
  Matrix covariance;

  /// Zero mean, zero covariance: the starting point of the filter.
  static WeightBelief zero(Eigen::Index dim);
  Eigen::Index dim() const { return mean.size(); }
};

/// Current variational means of the drift precision alpha, the output
/// precision beta and the noise offset mu, plus the variance of mu.
struct VariationalState {
  double alpha_mean = 1000.0;
  double beta_mean = 500.0;
  double mu_mean = 0.0;
  double mu_var = 0.0;
};

struct Observation {
  Vector x;
  std::optional<double> y;
};

/// One-step predictive distribution of the output.
struct PredictiveDist {
  double mean = 0.0;
  double variance = 1.0;
};

struct Prediction {
  PredictiveDist dist;
  Matrix P;  // predictive weight covariance
};

/// P = Sigma + alpha^{-1} I
Matrix predictive_covariance(const WeightBelief& belief, double alpha_mean);

/// Predictive mean x'mu + <mu> and variance x'Px + 1/<beta>, returning P for reuse.
Prediction predict(const WeightBelief& belief, const VariationalState& vstate, const Vector& x);

/// g = P x / (x'Px + 1/beta)
Vector kalman_gain(const Matrix& P, const Vector& x, double beta_mean);

/// mean' = mean + g (y - x'mean - <mu>), cov' = (I - g x') P, re-symmetrised.
WeightBelief measurement_update(const WeightBelief& belief, const Matrix& P, const Vector& g, const Vector& x, double y,
                                double mu_mean);

double predictive_log_lik(const PredictiveDist& pred, double y);

}  // namespace bypass
