#include "bypass/filter_state.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "bypass/errors.hpp"

namespace bypass {
namespace {

void require_dim(Eigen::Index expected, Eigen::Index got, const char* what) {
  if (expected != got) {
    throw std::invalid_argument(std::string(what) + ": dimension mismatch (expected " + std::to_string(expected) +
                                ", got " + std::to_string(got) + ")");
  }
}

}  // namespace

WeightBelief WeightBelief::zero(Eigen::Index dim) {
  return {Vector::Zero(dim), Matrix::Zero(dim, dim)};
}

Matrix predictive_covariance(const WeightBelief& belief, double alpha_mean) {
  Matrix P = belief.covariance;
  P.diagonal().array() += 1.0 / alpha_mean;
  return P;
}

Prediction predict(const WeightBelief& belief, const VariationalState& vstate, const Vector& x) {
  require_dim(belief.dim(), x.size(), "predict");
  Prediction out;
  out.P = predictive_covariance(belief, vstate.alpha_mean);
  out.dist.mean = x.dot(belief.mean) + vstate.mu_mean;
  out.dist.variance = x.dot(out.P * x) + 1.0 / vstate.beta_mean;
  return out;
}

Vector kalman_gain(const Matrix& P, const Vector& x, double beta_mean) {
  require_dim(P.rows(), x.size(), "kalman_gain");
  const Vector px = P * x;
  const double denom = x.dot(px) + 1.0 / beta_mean;
  if (!(denom > 0.0)) {
    throw NumericError("kalman_gain: non-positive innovation variance");
  }
  return px / denom;
}

WeightBelief measurement_update(const WeightBelief& belief, const Matrix& P, const Vector& g, const Vector& x, double y,
                                double mu_mean) {
  const Eigen::Index n = belief.dim();
  require_dim(n, x.size(), "measurement_update");
  require_dim(n, g.size(), "measurement_update");
  require_dim(n, P.rows(), "measurement_update");

  WeightBelief out;
  const double innovation = y - x.dot(belief.mean) - mu_mean;
  out.mean = belief.mean + g * innovation;
  Matrix cov = P - g * (x.transpose() * P);
  out.covariance = 0.5 * (cov + cov.transpose());
  return out;
}

double predictive_log_lik(const PredictiveDist& pred, double y) {
  const double r = y - pred.mean;
  return -0.5 * std::log(2.0 * std::numbers::pi * pred.variance) - r * r / (2.0 * pred.variance);
}

}  // namespace bypass
