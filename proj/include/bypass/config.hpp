#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include "bypass/backtest.hpp"
#include "bypass/models.hpp"

namespace bypass {

/// Everything a CLI run can be configured with. Defaults are the library defaults.
struct RunConfig {
  ModelKind model = ModelKind::kAdaBypass;
  ModelSettings settings{};
  TradeConfig trade{};
  std::size_t horizon = 1;
  std::uint64_t seed = 0;
  bool standardize = false;

  void validate() const;
};

/// Parses a JSON document of the form
///   {"model": "...", "hyper": {...}, "govi": {...}, "skf": {...}, "pa1": {...},
///    "trade": {...}, "horizon": 1, "seed": 0, "standardize": false}
/// on top of the defaults. Unknown keys and wrong types throw ConfigError
/// naming the dotted field path.
RunConfig parse_run_config(const std::string& json_text, const std::string& source = "<config>");
RunConfig load_run_config(const std::filesystem::path& path);

/// Round-trips through parse_run_config.
std::string dump_run_config(const RunConfig& cfg);

}  // namespace bypass
