#include "bypass/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "bypass/errors.hpp"

namespace bypass {

void SkfConfig::validate() const {
  if (!(forgetting > 0.0 && forgetting <= 1.0)) throw ConfigError("skf.forgetting must lie in (0, 1]");
  if (!(r_floor > 0.0)) throw ConfigError("skf.r_floor must be > 0");
  if (!(r0 > 0.0) || !std::isfinite(r0)) throw ConfigError("skf.r0 must be positive and finite");
  if (!(q0 >= 0.0) || !std::isfinite(q0)) throw ConfigError("skf.q0 must be finite and >= 0");
}

SkfState SkfState::initial(Eigen::Index dim, const SkfConfig& cfg) {
  cfg.validate();
  SkfState s;
  s.weight_mean = Vector::Zero(dim);
  s.weight_cov = Matrix::Zero(dim, dim);
  s.r_hat = cfg.r0;
  s.q_hat = cfg.q0;
  s.forgetting = cfg.forgetting;
  s.r_floor = cfg.r_floor;
  return s;
}

PredictiveDist skf_predict(const SkfState& state, const Vector& x) {
  if (x.size() != state.weight_mean.size()) {
    throw std::invalid_argument("skf_predict: dimension mismatch");
  }
  Matrix P = state.weight_cov;
  P.diagonal().array() += state.q_hat;
  return {x.dot(state.weight_mean), x.dot(P * x) + state.r_hat};
}

SkfStepResult skf_step(const SkfState& state, const Observation& obs) {
  const Vector& x = obs.x;
  if (x.size() != state.weight_mean.size()) {
    throw std::invalid_argument("skf_step: dimension mismatch");
  }
  if (!x.allFinite() || (obs.y && !std::isfinite(*obs.y))) {
    throw DataError("skf_step: non-finite observation");
  }

  SkfStepResult out;
  out.state = state;
  Matrix P = state.weight_cov;
  P.diagonal().array() += state.q_hat;
  const double xpx = x.dot(P * x);
  out.pred = {x.dot(state.weight_mean), xpx + state.r_hat};

  if (!obs.y) {
    out.state.weight_cov = P;
    return out;
  }
  const double y = *obs.y;
  const double e = y - out.pred.mean;
  const double e2 = e * e;
  const double f = state.forgetting;

  if (f < 1.0) {
    out.state.r_hat = f * state.r_hat + (1.0 - f) * std::max(e2 - xpx, state.r_floor);
    const double xsx = x.dot(state.weight_cov * x);
    const double q_inst = std::max(0.0, (e2 - xsx - out.state.r_hat) / (x.squaredNorm() + 1e-12));
    out.state.q_hat = f * state.q_hat + (1.0 - f) * q_inst;
    P = state.weight_cov;
    P.diagonal().array() += out.state.q_hat;
  }

  const Vector px = P * x;
  const Vector g = px / (x.dot(px) + out.state.r_hat);
  out.state.weight_mean = state.weight_mean + g * (y - x.dot(state.weight_mean));
  const Matrix cov = P - g * px.transpose();
  out.state.weight_cov = 0.5 * (cov + cov.transpose());
  return out;
}

double eps_insensitive_loss(double y, double y_hat, double epsilon) {
  return std::max(std::abs(y - y_hat) - epsilon, 0.0);
}

PaRegressorState pa1_step(const PaRegressorState& state, const Observation& obs) {
  if (!obs.y) {
    throw std::invalid_argument("pa1_step: observation has no output");
  }
  const Vector& x = obs.x;
  const double y = *obs.y;
  const double y_hat = x.dot(state.weights);
  const double loss = eps_insensitive_loss(y, y_hat, state.epsilon);
  const double norm2 = x.squaredNorm();
  PaRegressorState out = state;
  if (loss == 0.0 || norm2 == 0.0) {
    return out;
  }
  const double tau = std::min(state.c, loss / norm2);
  const double sign = (y - y_hat) > 0.0 ? 1.0 : -1.0;
  out.weights = state.weights + sign * tau * x;
  return out;
}

double pa1_objective(const Vector& w, const Vector& w_prev, const Vector& x, double y, double c, double epsilon) {
  return 0.5 * (w - w_prev).squaredNorm() + c * eps_insensitive_loss(y, x.dot(w), epsilon);
}

}  // namespace bypass
