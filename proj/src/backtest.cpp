#include "bypass/backtest.hpp"

#include <algorithm>
#include <cmath>

#include "bypass/errors.hpp"
#include "bypass/evaluation.hpp"

namespace bypass {

void TradeConfig::validate() const {
  if (!(z_entry > 0.0) || !std::isfinite(z_entry)) throw ConfigError("trade.z_entry must be positive and finite");
  if (!(z_exit >= 0.0 && z_exit < z_entry)) throw ConfigError("trade.z_exit must satisfy 0 <= z_exit < z_entry");
  if (!(annualization > 0.0)) throw ConfigError("trade.annualization must be > 0");
}

BacktestMetrics pairs_backtest(std::span<const double> x_prices, std::span<const double> y_prices, OnlineModel& model,
                               const TradeConfig& cfg) {
  cfg.validate();
  if (x_prices.size() != y_prices.size()) {
    throw DataError("pairs_backtest: price series differ in length");
  }
  if (x_prices.empty()) {
    throw DataError("pairs_backtest: empty price series");
  }
  if (model.dim() != 1) {
    throw ConfigError("pairs_backtest: the hedge model must have a single weight");
  }
  for (std::size_t t = 0; t < x_prices.size(); ++t) {
    if (!(x_prices[t] > 0.0) || !(y_prices[t] > 0.0) || !std::isfinite(x_prices[t]) || !std::isfinite(y_prices[t])) {
      throw DataError("pairs_backtest: non-positive or non-finite price on day " + std::to_string(t));
    }
  }

  const std::size_t n = x_prices.size();
  const double capital = 2.0 * y_prices[0];

  BacktestMetrics out;
  out.equity_curve.reserve(n);
  out.daily_returns.reserve(n);

  double qty_y = 0.0;
  double qty_x = 0.0;
  int side = 0;  // +1 long spread, -1 short spread
  double equity = 1.0;
  bool traded = false;

  Vector x(1);
  for (std::size_t t = 0; t < n; ++t) {
    if (t > 0) {
      const double pnl = qty_y * (y_prices[t] - y_prices[t - 1]) + qty_x * (x_prices[t] - x_prices[t - 1]);
      const double ret = pnl / capital;
      equity += ret;
      out.daily_returns.push_back(ret);
    }
    // Ruin floors the curve so drawdown stays within [0, 1].
    out.equity_curve.push_back(std::max(equity, 1e-12));

    x(0) = x_prices[t];
    const PredictiveDist pred = model.predict(x);
    const double hedge = model.weight_mean()(0);
    const double z = (y_prices[t] - pred.mean) / std::sqrt(pred.variance);
    out.hedge_ratio.push_back(hedge);
    out.z_scores.push_back(z);

    if (side == -1 && z <= cfg.z_exit) {
      side = 0;
    } else if (side == 1 && z >= -cfg.z_exit) {
      side = 0;
    }
    if (side == 0 && (qty_y != 0.0 || qty_x != 0.0)) {
      qty_y = qty_x = 0.0;
      ++out.round_trips;
    }
    if (side == 0 && t >= cfg.warmup && t + 1 < n) {
      if (z > cfg.z_entry) {
        side = -1;
        qty_y = -1.0;
        qty_x = hedge;
        traded = true;
      } else if (z < -cfg.z_entry) {
        side = 1;
        qty_y = 1.0;
        qty_x = -hedge;
        traded = true;
      }
    }

    Observation obs;
    obs.x = x;
    obs.y = y_prices[t];
    model.step(obs);
  }

  const DrawdownStats dd = max_drawdown(out.equity_curve);
  out.max_drawdown = dd.fraction;
  out.max_dd_duration = dd.duration;
  if (traded && out.daily_returns.size() >= 2) {
    try {
      out.sharpe = sharpe_ratio(out.daily_returns, cfg.annualization);
    } catch (const DomainError&) {
      out.sharpe = 0.0;
    }
  }
  return out;
}

}  // namespace bypass
