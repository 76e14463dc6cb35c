#include "bypass/evaluation.hpp"

#include <algorithm>
#include <cmath>

#include "bypass/errors.hpp"

namespace bypass {
namespace {

double median_of(std::vector<double> v) {
  if (v.empty()) {
    return 0.0;
  }
  const std::size_t mid = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
  const double upper = v[mid];
  if (v.size() % 2 == 1) {
    return upper;
  }
  const double lower = *std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid));
  return 0.5 * (lower + upper);
}

}  // namespace

void ForecastMetrics::add(const PredictiveDist& pred, double y) {
  const double r = std::abs(y - pred.mean);
  const double ll = predictive_log_lik(pred, y);
  abs_residuals_.push_back(r);
  log_liks_.push_back(ll);
  sum_sq_ += r * r;
  sum_abs_ += r;
  sum_ll_ += ll;
}

MetricsSummary ForecastMetrics::summary() const {
  MetricsSummary s;
  s.n = abs_residuals_.size();
  if (s.n == 0) {
    return s;
  }
  const double n = static_cast<double>(s.n);
  s.rmse = std::sqrt(sum_sq_ / n);
  s.mae = sum_abs_ / n;
  s.mad = median_of(abs_residuals_);
  s.ll = sum_ll_;
  return s;
}

MetricsSummary ForecastMetrics::recompute() const {
  ForecastMetrics fresh;
  fresh.abs_residuals_ = abs_residuals_;
  fresh.log_liks_ = log_liks_;
  for (std::size_t i = 0; i < abs_residuals_.size(); ++i) {
    fresh.sum_sq_ += abs_residuals_[i] * abs_residuals_[i];
    fresh.sum_abs_ += abs_residuals_[i];
    fresh.sum_ll_ += log_liks_[i];
  }
  return fresh.summary();
}

ForecastMetrics score_step(ForecastMetrics metrics, const PredictiveDist& pred, double y) {
  metrics.add(pred, y);
  return metrics;
}

double sharpe_ratio(std::span<const double> daily_returns, double annualization) {
  if (daily_returns.size() < 2) {
    throw DomainError("sharpe_ratio: need at least two returns");
  }
  if (!(annualization > 0.0)) {
    throw DomainError("sharpe_ratio: annualization must be > 0");
  }
  const double n = static_cast<double>(daily_returns.size());
  double mean = 0.0;
  for (double r : daily_returns) mean += r;
  mean /= n;
  double ss = 0.0;
  for (double r : daily_returns) ss += (r - mean) * (r - mean);
  const double sd = std::sqrt(ss / (n - 1.0));
  if (!(sd > 0.0)) {
    throw DomainError("sharpe_ratio: zero variance, metric undefined");
  }
  return mean / sd * std::sqrt(annualization);
}

DrawdownStats max_drawdown(std::span<const double> equity) {
  if (equity.empty()) {
    throw DomainError("max_drawdown: empty equity curve");
  }
  DrawdownStats out;
  double peak = equity.front();
  std::size_t run = 0;
  for (double e : equity) {
    if (!(e > 0.0)) {
      throw DomainError("max_drawdown: equity must be positive");
    }
    if (e >= peak) {
      peak = e;
      run = 0;
      continue;
    }
    ++run;
    out.duration = std::max(out.duration, run);
    out.fraction = std::max(out.fraction, (peak - e) / peak);
  }
  return out;
}

}  // namespace bypass
