#include "bypass/forecast.hpp"

#include "bypass/errors.hpp"

namespace bypass {

StreamRun run_ar1_stream(OnlineModel& model, const std::vector<SeriesRecord>& series) {
  if (model.dim() != 2) {
    throw ConfigError("AR(1) stream needs a two-weight model");
  }
  if (series.size() < 2) {
    throw DataError("AR(1) stream: need at least two records");
  }
  if (!series.front().value) {
    throw DataError("AR(1) stream: first value is missing (no seed lag)");
  }
  StreamRun run;
  run.rows.reserve(series.size() - 1);
  double lag = *series.front().value;
  Observation obs;
  obs.x = Vector(2);
  for (std::size_t t = 1; t < series.size(); ++t) {
    obs.x(0) = 1.0;
    obs.x(1) = lag;
    obs.y = series[t].value;
    const ModelStep out = model.step(obs);
    if (obs.y) {
      run.metrics.add(out.pred, *obs.y);
    }
    run.rows.push_back({series[t].index, obs.y, out.pred, out.snap});
    lag = obs.y ? *obs.y : out.pred.mean;
  }
  run.last_lag = lag;
  return run;
}

std::vector<PredictiveDist> multi_step_forecast(const OnlineModel& model, double last_lag, std::size_t horizon) {
  if (horizon < 1) {
    throw ConfigError("horizon must be >= 1");
  }
  std::vector<PredictiveDist> out;
  out.reserve(horizon);
  Vector x(2);
  double lag = last_lag;
  for (std::size_t h = 0; h < horizon; ++h) {
    x(0) = 1.0;
    x(1) = lag;
    const PredictiveDist p = model.predict(x);
    out.push_back(p);
    lag = p.mean;
  }
  return out;
}

}  // namespace bypass
