#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "bypass/evaluation.hpp"
#include "bypass/models.hpp"
#include "bypass/series_io.hpp"

namespace bypass {

struct ForecastRow {
  std::string t;
  std::optional<double> y;
  PredictiveDist pred;
  ModelSnapshot snap;
};

struct StreamRun {
  std::vector<ForecastRow> rows;
  ForecastMetrics metrics;
  /// Last observed value, or the last predictive mean when it was missing.
  double last_lag = 0.0;
};

/// Streams an AR(1) model over the series: one row per record after the seed
/// lag. A missing lag is replaced by the previous one-step predictive mean; a
/// missing target only propagates the state and is not scored.
StreamRun run_ar1_stream(OnlineModel& model, const std::vector<SeriesRecord>& series);

/// Iterates one-step predictions h = 1..horizon with x = [1, previous mean].
/// The model is not updated. The reported variance is the one-step variance at
/// the plugged-in mean, so it understates the true horizon-h uncertainty.
std::vector<PredictiveDist> multi_step_forecast(const OnlineModel& model, double last_lag, std::size_t horizon);

}  // namespace bypass
