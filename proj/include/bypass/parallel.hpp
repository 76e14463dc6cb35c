#pragma once

#include <vector>

#include "bypass/forecast.hpp"

namespace bypass {

/// One independent AR(1) stream: a model specification and the series it runs over.
struct StreamJob {
  ModelKind kind = ModelKind::kAdaBypass;
  ModelSettings settings{};
  std::vector<SeriesRecord> series;
};

/// Reference implementation: runs the jobs one after another.
std::vector<StreamRun> run_streams_serial(const std::vector<StreamJob>& jobs);

/// Same results as run_streams_serial, with jobs spread over OpenMP threads.
/// The first exception raised by any job is rethrown after the loop.
std::vector<StreamRun> run_streams_parallel(const std::vector<StreamJob>& jobs);

}  // namespace bypass
