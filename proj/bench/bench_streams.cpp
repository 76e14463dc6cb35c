#include <benchmark/benchmark.h>

#include "bypass/parallel.hpp"

namespace {

std::vector<bypass::StreamJob> make_jobs(int count, std::size_t length) {
  std::vector<bypass::StreamJob> jobs;
  for (int i = 0; i < count; ++i) {
    const auto values = bypass::synth_changepoint(static_cast<std::uint64_t>(i + 1),
                                                  {{length / 2, 0.0, 0.6, 1.0}, {length - length / 2, 1.5, 0.6, 1.0}});
    bypass::StreamJob job;
    job.kind = i % 2 == 0 ? bypass::ModelKind::kAdaBypass : bypass::ModelKind::kSkf;
    job.series = bypass::to_records(values);
    jobs.push_back(std::move(job));
  }
  return jobs;
}

void BM_StreamsSerial(benchmark::State& state) {
  const auto jobs = make_jobs(static_cast<int>(state.range(0)), 2000);
  for (auto _ : state) {
    benchmark::DoNotOptimize(bypass::run_streams_serial(jobs));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0) * 2000);
}

void BM_StreamsParallel(benchmark::State& state) {
  const auto jobs = make_jobs(static_cast<int>(state.range(0)), 2000);
  for (auto _ : state) {
    benchmark::DoNotOptimize(bypass::run_streams_parallel(jobs));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0) * 2000);
}

}  // namespace

BENCHMARK(BM_StreamsSerial)->Arg(4)->Arg(16)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_StreamsParallel)->Arg(4)->Arg(16)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
