#include "bypass/models.hpp"

#include <cmath>
#include <string>

#include "bypass/distributions.hpp"
#include "bypass/errors.hpp"

namespace bypass {
namespace {

ModelSnapshot snapshot_of(const VariationalState& vs, const HyperParams& h, const StepDiagnostics& diag) {
  ModelSnapshot s;
  s.alpha_mean = vs.alpha_mean;
  s.beta_mean = vs.beta_mean;
  s.mu_mean = vs.mu_mean;
  s.a = h.a;
  s.b = h.b;
  s.epsilon = h.epsilon;
  s.fp_iters = diag.iterations;
  s.converged = diag.converged;
  return s;
}

class BypassModel final : public OnlineModel {
 public:
  BypassModel(Eigen::Index dim, const ModelSettings& s) : filter_(dim, s.hyper, s.govi) {}

  ModelKind kind() const override { return ModelKind::kBypass; }
  Eigen::Index dim() const override { return filter_.belief().dim(); }
  PredictiveDist predict(const Vector& x) const override { return filter_.predict(x); }
  ModelStep step(const Observation& obs) override {
    const StepResult r = filter_.step(obs);
    return {r.pred, snapshot_of(r.vstate, filter_.hyper(), r.diag)};
  }
  Vector weight_mean() const override { return filter_.belief().mean; }
  std::unique_ptr<OnlineModel> clone() const override { return std::make_unique<BypassModel>(*this); }

 private:
  BypassFilter filter_;
};

class AdaBypassModel final : public OnlineModel {
 public:
  AdaBypassModel(Eigen::Index dim, const ModelSettings& s) : filter_(dim, s.hyper, s.govi) {}

  ModelKind kind() const override { return ModelKind::kAdaBypass; }
  Eigen::Index dim() const override { return filter_.belief().dim(); }
  PredictiveDist predict(const Vector& x) const override { return filter_.predict(x); }
  ModelStep step(const Observation& obs) override {
    const AdaStepResult r = filter_.step(obs);
    return {r.pred, snapshot_of(r.vstate, r.hyper, r.diag)};
  }
  Vector weight_mean() const override { return filter_.belief().mean; }
  std::unique_ptr<OnlineModel> clone() const override { return std::make_unique<AdaBypassModel>(*this); }

 private:
  AdaBypassFilter filter_;
};

class SkfModel final : public OnlineModel {
 public:
  SkfModel(Eigen::Index dim, const ModelSettings& s) : state_(SkfState::initial(dim, s.skf)) {}

  ModelKind kind() const override { return ModelKind::kSkf; }
  Eigen::Index dim() const override { return state_.weight_mean.size(); }
  PredictiveDist predict(const Vector& x) const override { return skf_predict(state_, x); }
  ModelStep step(const Observation& obs) override {
    check_observation(obs, t_, dim());
    SkfStepResult r = skf_step(state_, obs);
    state_ = std::move(r.state);
    ++t_;
    return {r.pred, {}};
  }
  Vector weight_mean() const override { return state_.weight_mean; }
  std::unique_ptr<OnlineModel> clone() const override { return std::make_unique<SkfModel>(*this); }

 private:
  SkfState state_;
  std::size_t t_ = 0;
};

// PA-I makes point predictions; the reported variance is that of the
// epsilon-insensitive noise density the loss corresponds to.
class Pa1Model final : public OnlineModel {
 public:
  Pa1Model(Eigen::Index dim, const ModelSettings& s) {
    s.pa1.validate();
    state_.weights = Vector::Zero(dim);
    state_.c = s.pa1.c;
    state_.epsilon = s.pa1.epsilon;
    variance_ = eps_noise_variance(EpsNoiseModel{s.pa1.epsilon});
  }

  ModelKind kind() const override { return ModelKind::kPa1; }
  Eigen::Index dim() const override { return state_.weights.size(); }
  PredictiveDist predict(const Vector& x) const override { return {x.dot(state_.weights), variance_}; }
  ModelStep step(const Observation& obs) override {
    check_observation(obs, t_, dim());
    const PredictiveDist pred = predict(obs.x);
    if (obs.y) {
      state_ = pa1_step(state_, obs);
    }
    ++t_;
    ModelSnapshot snap;
    snap.epsilon = state_.epsilon;
    return {pred, snap};
  }
  Vector weight_mean() const override { return state_.weights; }
  std::unique_ptr<OnlineModel> clone() const override { return std::make_unique<Pa1Model>(*this); }

 private:
  PaRegressorState state_;
  double variance_ = 1.0;
  std::size_t t_ = 0;
};

}  // namespace

std::string_view to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::kBypass:
      return "bypass";
    case ModelKind::kAdaBypass:
      return "ada-bypass";
    case ModelKind::kSkf:
      return "skf";
    case ModelKind::kPa1:
      return "pa1";
  }
  return "unknown";
}

ModelKind parse_model_kind(std::string_view name) {
  if (name == "bypass") return ModelKind::kBypass;
  if (name == "ada-bypass") return ModelKind::kAdaBypass;
  if (name == "skf") return ModelKind::kSkf;
  if (name == "pa1") return ModelKind::kPa1;
  throw ConfigError("model: unknown model '" + std::string(name) + "' (expected bypass, ada-bypass, skf or pa1)");
}

void Pa1Config::validate() const {
  if (!(c > 0.0) || !std::isfinite(c)) throw ConfigError("pa1.c must be positive and finite");
  if (!(epsilon >= 0.0) || !std::isfinite(epsilon)) throw ConfigError("pa1.epsilon must be finite and >= 0");
}

std::unique_ptr<OnlineModel> make_model(ModelKind kind, Eigen::Index dim, const ModelSettings& settings) {
  switch (kind) {
    case ModelKind::kBypass:
      return std::make_unique<BypassModel>(dim, settings);
    case ModelKind::kAdaBypass:
      return std::make_unique<AdaBypassModel>(dim, settings);
    case ModelKind::kSkf:
      return std::make_unique<SkfModel>(dim, settings);
    case ModelKind::kPa1:
      return std::make_unique<Pa1Model>(dim, settings);
  }
  throw ConfigError("model: unknown model kind");
}

}  // namespace bypass
