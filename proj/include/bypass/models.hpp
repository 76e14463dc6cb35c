#pragma once

#include <memory>
#include <optional>
#include <string_view>

#include "bypass/ada_engine.hpp"
#include "bypass/baselines.hpp"
#include "bypass/govi_engine.hpp"

namespace bypass {

enum class ModelKind { kBypass, kAdaBypass, kSkf, kPa1 };

std::string_view to_string(ModelKind kind);
/// Accepts "bypass", "ada-bypass", "skf", "pa1". Throws ConfigError otherwise.
ModelKind parse_model_kind(std::string_view name);

struct Pa1Config {
  double c = 1.0;
  double epsilon = 1.25;

  void validate() const;
};

struct ModelSettings {
  HyperParams hyper{};
  GoviConfig govi{};
  SkfConfig skf{};
  Pa1Config pa1{};
};

/// Per-step state exported for the prediction CSV. Fields a model does not
/// have stay empty.
struct ModelSnapshot {
  std::optional<double> alpha_mean;
  std::optional<double> beta_mean;
  std::optional<double> mu_mean;
  std::optional<double> a;
  std::optional<double> b;
  std::optional<double> epsilon;
  int fp_iters = 0;
  bool converged = true;
};

struct ModelStep {
  PredictiveDist pred;
  ModelSnapshot snap;
};

/// Common streaming surface over the four engines.
class OnlineModel {
 public:
  virtual ~OnlineModel() = default;

  virtual ModelKind kind() const = 0;
  virtual Eigen::Index dim() const = 0;
  /// One-step predictive distribution at x; does not change the state.
  virtual PredictiveDist predict(const Vector& x) const = 0;
  /// Predict, then absorb obs (a missing y only propagates the state).
  virtual ModelStep step(const Observation& obs) = 0;
  virtual Vector weight_mean() const = 0;
  virtual std::unique_ptr<OnlineModel> clone() const = 0;
};

std::unique_ptr<OnlineModel> make_model(ModelKind kind, Eigen::Index dim, const ModelSettings& settings);

}  // namespace bypass
