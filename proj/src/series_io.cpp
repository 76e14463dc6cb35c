#include "bypass/series_io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <random>
#include <sstream>

#include "bypass/errors.hpp"

namespace bypass {
namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::optional<double> parse_number(const std::string& s) {
  double v = 0.0;
  const char* begin = s.data();
  const char* end = s.data() + s.size();
  if (!s.empty() && *begin == '+') ++begin;
  const auto [ptr, ec] = std::from_chars(begin, end, v);
  if (ec != std::errc() || ptr != end) {
    return std::nullopt;
  }
  return v;
}

// Strict ordering between consecutive indices.
bool index_increases(const std::string& prev, const std::string& next) {
  const auto a = parse_number(prev);
  const auto b = parse_number(next);
  if (a && b) {
    return *a < *b;
  }
  return prev < next;
}

}  // namespace

std::vector<SeriesRecord> parse_series_csv(std::istream& in, const std::string& source) {
  std::vector<SeriesRecord> out;
  std::string line;
  std::size_t line_no = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string row = trim(line);
    if (!header_seen) {
      if (row.empty()) {
        continue;
      }
      header_seen = true;
      continue;
    }
    if (row.empty()) {
      continue;
    }
    const auto comma = row.find(',');
    if (comma == std::string::npos) {
      throw DataError(source + ":" + std::to_string(line_no) + ": expected 'index,value'");
    }
    SeriesRecord rec;
    rec.index = trim(row.substr(0, comma));
    std::string value = trim(row.substr(comma + 1));
    // Only the first two columns are read.
    if (const auto next = value.find(','); next != std::string::npos) {
      value = trim(value.substr(0, next));
    }
    if (rec.index.empty()) {
      throw DataError(source + ":" + std::to_string(line_no) + ": empty index");
    }
    if (!value.empty() && value != "NA" && value != "nan" && value != "NaN") {
      const auto v = parse_number(value);
      if (!v || !std::isfinite(*v)) {
        throw DataError(source + ":" + std::to_string(line_no) + ": cannot parse value '" + value + "'");
      }
      rec.value = *v;
    }
    if (!out.empty() && !index_increases(out.back().index, rec.index)) {
      throw DataError(source + ":" + std::to_string(line_no) + ": index '" + rec.index +
                      "' is not strictly increasing");
    }
    out.push_back(std::move(rec));
  }
  if (!header_seen) {
    throw DataError(source + ": missing header row");
  }
  return out;
}

std::vector<SeriesRecord> read_series_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw DataError("cannot open " + path.string());
  }
  return parse_series_csv(in, path.string());
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

void write_series_csv(const std::filesystem::path& path, const std::vector<SeriesRecord>& series,
                      const std::string& value_name) {
  std::ofstream out(path);
  if (!out) {
    throw DataError("cannot write " + path.string());
  }
  out << "t," << value_name << '\n';
  for (const auto& r : series) {
    out << r.index << ',' << (r.value ? format_double(*r.value) : std::string()) << '\n';
  }
}

std::vector<SeriesRecord> standardize(const std::vector<SeriesRecord>& series) {
  double sum = 0.0;
  std::size_t n = 0;
  for (const auto& r : series) {
    if (r.value) {
      sum += *r.value;
      ++n;
    }
  }
  if (n < 2) {
    throw DataError("standardize: need at least two present values");
  }
  const double mean = sum / static_cast<double>(n);
  double ss = 0.0;
  for (const auto& r : series) {
    if (r.value) ss += (*r.value - mean) * (*r.value - mean);
  }
  const double sd = std::sqrt(ss / static_cast<double>(n - 1));
  if (!(sd > 0.0)) {
    throw DataError("standardize: constant series");
  }
  std::vector<SeriesRecord> out = series;
  for (auto& r : out) {
    if (r.value) r.value = (*r.value - mean) / sd;
  }
  return out;
}

std::vector<Observation> ar1_design(const std::vector<SeriesRecord>& series) {
  if (series.size() < 2) {
    throw DataError("ar1_design: need at least two records");
  }
  if (!series.front().value) {
    throw DataError("ar1_design: first value is missing (no seed lag)");
  }
  std::vector<Observation> out;
  out.reserve(series.size() - 1);
  for (std::size_t t = 1; t < series.size(); ++t) {
    Observation obs;
    obs.x = Vector(2);
    obs.x(0) = 1.0;
    obs.x(1) = series[t - 1].value.value_or(std::numeric_limits<double>::quiet_NaN());
    obs.y = series[t].value;
    out.push_back(std::move(obs));
  }
  return out;
}

std::vector<double> synth_changepoint(std::uint64_t seed, const std::vector<Segment>& segments) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> out;
  if (segments.empty()) {
    return out;
  }
  const Segment& first = segments.front();
  double prev = std::abs(first.ar_coef) < 1.0 ? first.intercept / (1.0 - first.ar_coef) : 0.0;
  for (const Segment& seg : segments) {
    if (seg.length < 1 || !(seg.noise_sd >= 0.0)) {
      throw ConfigError("synth: segment length must be >= 1 and noise_sd >= 0");
    }
    for (std::size_t i = 0; i < seg.length; ++i) {
      const double noise = seg.noise_sd * normal(rng);
      prev = seg.intercept + seg.ar_coef * prev + noise;
      out.push_back(prev);
    }
  }
  return out;
}

PricePair synth_pair(std::uint64_t seed, const PairSpec& spec) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  PricePair out;
  out.x.reserve(spec.length);
  out.y.reserve(spec.length);
  out.hedge.reserve(spec.length);
  double x = spec.x0;
  double spread = 0.0;
  for (std::size_t t = 0; t < spec.length; ++t) {
    if (t > 0) {
      x *= std::exp(spec.x_vol * normal(rng));
      spread += -spec.spread_kappa * spread + spec.spread_sd * normal(rng);
    }
    const double frac = spec.length > 1 ? static_cast<double>(t) / static_cast<double>(spec.length - 1) : 0.0;
    const double hedge = spec.hedge_start + (spec.hedge_end - spec.hedge_start) * frac;
    out.x.push_back(x);
    out.hedge.push_back(hedge);
    out.y.push_back(hedge * x + spread);
  }
  return out;
}

std::vector<SeriesRecord> to_records(const std::vector<double>& values) {
  std::vector<SeriesRecord> out;
  out.reserve(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    out.push_back({std::to_string(i + 1), values[i]});
  }
  return out;
}

}  // namespace bypass
