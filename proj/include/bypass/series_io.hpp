#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "bypass/filter_state.hpp"

namespace bypass {

/// One row of a two-column (index, value) series. An empty value is missing.
struct SeriesRecord {
  std::string index;
  std::optional<double> value;
};

/// Reads "index,value" rows after a header line. Indices must be strictly
/// increasing: numerically when both parse as numbers, lexicographically
/// otherwise (ISO dates). Throws DataError with the line number.
std::vector<SeriesRecord> read_series_csv(const std::filesystem::path& path);
std::vector<SeriesRecord> parse_series_csv(std::istream& in, const std::string& source = "<stream>");

void write_series_csv(const std::filesystem::path& path, const std::vector<SeriesRecord>& series,
                      const std::string& value_name = "y");

/// Shortest round-trip, locale-independent representation.
std::string format_double(double v);

/// z-scores the present values (mean and sample std over the whole series).
std::vector<SeriesRecord> standardize(const std::vector<SeriesRecord>& series);

/// AR(1) design x_t = [1, y_{t-1}], target y_t, for t >= 1. The first record
/// is consumed as the seed lag and must be present. A missing interior lag is
/// encoded as NaN in x(1); the stream driver replaces it with the model's
/// predictive mean.
std::vector<Observation> ar1_design(const std::vector<SeriesRecord>& series);

struct Segment {
  std::size_t length = 1;
  /// (intercept, AR coefficient)
  double intercept = 0.0;
  double ar_coef = 0.0;
  double noise_sd = 0.0;
};

/// Piecewise-constant AR(1) series with Gaussian noise, deterministic in seed.
/// The recursion starts from the first segment's stationary mean (or 0 when
/// |ar_coef| >= 1).
std::vector<double> synth_changepoint(std::uint64_t seed, const std::vector<Segment>& segments);

struct PairSpec {
  std::size_t length = 1000;
  double x0 = 50.0;
  double x_vol = 0.01;          // daily log-return sd of x
  double hedge_start = 1.5;
  double hedge_end = 1.5;       // linear drift of the true hedge ratio
  double spread_kappa = 0.1;    // OU mean reversion per day
  double spread_sd = 0.5;       // OU innovation sd
};

struct PricePair {
  std::vector<double> x;
  std::vector<double> y;
  std::vector<double> hedge;
};

/// x follows a geometric random walk; y = hedge_t x_t + s_t with s an
/// Ornstein-Uhlenbeck spread. Deterministic in seed.
PricePair synth_pair(std::uint64_t seed, const PairSpec& spec);

std::vector<SeriesRecord> to_records(const std::vector<double>& values);

}  // namespace bypass
