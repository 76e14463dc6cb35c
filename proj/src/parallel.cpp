#include "bypass/parallel.hpp"

#include <exception>

namespace bypass {
namespace {

StreamRun run_job(const StreamJob& job) {
  auto model = make_model(job.kind, 2, job.settings);
  return run_ar1_stream(*model, job.series);
}

}  // namespace

std::vector<StreamRun> run_streams_serial(const std::vector<StreamJob>& jobs) {
  std::vector<StreamRun> out;
  out.reserve(jobs.size());
  for (const auto& job : jobs) {
    out.push_back(run_job(job));
  }
  return out;
}

std::vector<StreamRun> run_streams_parallel(const std::vector<StreamJob>& jobs) {
  const auto n = static_cast<long>(jobs.size());
  std::vector<StreamRun> out(jobs.size());
  std::vector<std::exception_ptr> errors(jobs.size());
#pragma omp parallel for schedule(dynamic, 1)
  for (long i = 0; i < n; ++i) {
    try {
      out[static_cast<std::size_t>(i)] = run_job(jobs[static_cast<std::size_t>(i)]);
    } catch (...) {
      errors[static_cast<std::size_t>(i)] = std::current_exception();
    }
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return out;
}

}  // namespace bypass
