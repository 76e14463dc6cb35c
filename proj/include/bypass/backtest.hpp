#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "bypass/models.hpp"

namespace bypass {

/// z-score band rule for a two-leg spread.
struct TradeConfig {
  double z_entry = 1.0;
  /// A short-spread position closes once z <= z_exit, a long one once z >= -z_exit.
  double z_exit = 0.0;
  double annualization = 252.0;
  /// Days at the start of the stream during which no position is opened.
  std::size_t warmup = 20;

  void validate() const;
};

struct BacktestMetrics {
  double sharpe = 0.0;
  double max_drawdown = 0.0;
  std::size_t max_dd_duration = 0;
  std::size_t round_trips = 0;
  std::vector<double> equity_curve;
  std::vector<double> daily_returns;
  std::vector<double> hedge_ratio;
  std::vector<double> z_scores;
};

/// Pairs trade driven by a scalar hedge model y_t = w_t x_t + noise.
///
/// Each day the model's predictive spread e = y - m_hat and z = e / sqrt(V_hat)
/// are taken before the update. z > z_entry shorts one unit of y against w
/// units of x, z < -z_entry does the opposite. Daily P&L is marked to market
/// and divided by a fixed capital of twice the first y price. The model sees
/// (x_t, y_t) only after the day's decision.
///
/// Sharpe is reported as 0 when no position was ever taken.
BacktestMetrics pairs_backtest(std::span<const double> x_prices, std::span<const double> y_prices, OnlineModel& model,
                               const TradeConfig& cfg);

}  // namespace bypass
