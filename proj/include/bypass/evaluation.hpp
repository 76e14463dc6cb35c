#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "bypass/filter_state.hpp"

namespace bypass {

struct MetricsSummary {
  double rmse = 0.0;
  double mad = 0.0;  // median absolute error
  double mae = 0.0;
  double ll = 0.0;   // summed predictive log likelihood
  std::size_t n = 0;
};

/// Streaming forecast scorer. Keeps the residual log so the median is exact.
class ForecastMetrics {
 public:
  void add(const PredictiveDist& pred, double y);

  MetricsSummary summary() const;
  std::size_t n() const { return abs_residuals_.size(); }
  const std::vector<double>& abs_residuals() const { return abs_residuals_; }
  const std::vector<double>& log_liks() const { return log_liks_; }

  /// Rebuilds the summary from the stored logs alone.
  MetricsSummary recompute() const;

 private:
  std::vector<double> abs_residuals_;
  std::vector<double> log_liks_;
  double sum_sq_ = 0.0;
  double sum_abs_ = 0.0;
  double sum_ll_ = 0.0;
};

ForecastMetrics score_step(ForecastMetrics metrics, const PredictiveDist& pred, double y);

/// mean / sample std * sqrt(annualization). Throws DomainError when undefined.
double sharpe_ratio(std::span<const double> daily_returns, double annualization = 252.0);

struct DrawdownStats {
  double fraction = 0.0;
  std::size_t duration = 0;
};

/// Largest peak-to-trough fraction and longest stretch strictly below the running peak.
DrawdownStats max_drawdown(std::span<const double> equity);

}  // namespace bypass
