#include "bypass/cli.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "bypass/config.hpp"
#include "bypass/errors.hpp"
#include "bypass/forecast.hpp"
#include "bypass/parallel.hpp"
#include "bypass/series_io.hpp"

namespace bypass {
namespace {

using nlohmann::ordered_json;

struct CommonOpts {
  std::string config_path;
  std::string model;
  bool standardize = false;
  std::optional<std::size_t> horizon;
  std::optional<std::uint64_t> seed;
};

RunConfig resolve_config(const CommonOpts& o) {
  RunConfig cfg = o.config_path.empty() ? RunConfig{} : load_run_config(o.config_path);
  if (!o.model.empty() && o.model.find(',') == std::string::npos) {
    cfg.model = parse_model_kind(o.model);
  }
  if (o.standardize) cfg.standardize = true;
  if (o.horizon) cfg.horizon = *o.horizon;
  if (o.seed) cfg.seed = *o.seed;
  cfg.validate();
  return cfg;
}

std::vector<ModelKind> model_list(const std::string& spec, ModelKind fallback) {
  if (spec.empty()) return {fallback};
  std::vector<ModelKind> out;
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ',')) {
    out.push_back(parse_model_kind(item));
  }
  if (out.empty()) throw ConfigError("--model: empty model list");
  return out;
}

std::vector<SeriesRecord> load_input(const std::string& path, bool standardize_values) {
  auto series = read_series_csv(path);
  return standardize_values ? standardize(series) : series;
}

std::string opt_cell(const std::optional<double>& v) { return v ? format_double(*v) : std::string(); }

bool is_govi(ModelKind k) { return k == ModelKind::kBypass || k == ModelKind::kAdaBypass; }

void write_predictions(const std::string& path, const StreamRun& run, ModelKind kind) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path);
  out << "t,y,m_hat,v_hat,alpha_mean,beta_mean,mu_mean,a,b,epsilon,fp_iters\n";
  for (const auto& r : run.rows) {
    out << r.t << ',' << opt_cell(r.y) << ',' << format_double(r.pred.mean) << ',' << format_double(r.pred.variance)
        << ',' << opt_cell(r.snap.alpha_mean) << ',' << opt_cell(r.snap.beta_mean) << ',' << opt_cell(r.snap.mu_mean)
        << ',' << opt_cell(r.snap.a) << ',' << opt_cell(r.snap.b) << ',' << opt_cell(r.snap.epsilon) << ','
        << (is_govi(kind) ? std::to_string(r.snap.fp_iters) : std::string()) << '\n';
  }
}

void write_forecast(const std::string& path, const std::vector<PredictiveDist>& fc) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path);
  out << "h,m_hat,v_hat\n";
  for (std::size_t h = 0; h < fc.size(); ++h) {
    out << h + 1 << ',' << format_double(fc[h].mean) << ',' << format_double(fc[h].variance) << '\n';
  }
}

ordered_json metrics_json(const MetricsSummary& m) {
  return ordered_json{{"rmse", m.rmse}, {"mad", m.mad}, {"mae", m.mae}, {"ll", m.ll}, {"n", m.n}};
}

void emit_json(const ordered_json& doc, const std::string& path, std::ostream& out) {
  if (path.empty()) {
    out << doc.dump(2) << '\n';
    return;
  }
  std::ofstream f(path);
  if (!f) throw DataError("cannot write " + path);
  f << doc.dump(2) << '\n';
}

std::vector<double> price_column(const std::string& path) {
  std::vector<double> out;
  for (const auto& r : read_series_csv(path)) {
    if (!r.value) throw DataError(path + ": missing price at index " + r.index);
    out.push_back(*r.value);
  }
  return out;
}

Segment parse_segment(const std::string& text) {
  std::stringstream ss(text);
  std::string part;
  std::vector<std::string> parts;
  while (std::getline(ss, part, ':')) parts.push_back(part);
  if (parts.size() != 4) {
    throw ConfigError("--segment '" + text + "': expected length:intercept:ar_coef:noise_sd");
  }
  try {
    Segment s;
    const long long len = std::stoll(parts[0]);
    if (len < 1) throw ConfigError("--segment '" + text + "': length must be >= 1");
    s.length = static_cast<std::size_t>(len);
    s.intercept = std::stod(parts[1]);
    s.ar_coef = std::stod(parts[2]);
    s.noise_sd = std::stod(parts[3]);
    if (!(s.noise_sd >= 0.0)) throw ConfigError("--segment '" + text + "': noise_sd must be >= 0");
    return s;
  } catch (const std::logic_error&) {
    throw ConfigError("--segment '" + text + "': not a number");
  }
}

void add_common(CLI::App* cmd, CommonOpts& o) {
  cmd->add_option("--config", o.config_path, "JSON run configuration")->check(CLI::ExistingFile);
  cmd->add_option("--model", o.model, "bypass | ada-bypass | skf | pa1");
  cmd->add_flag("--standardize", o.standardize, "z-score the input series before filtering");
  cmd->add_option("--horizon", o.horizon, "forecast horizon")->check(CLI::PositiveNumber);
  cmd->add_option("--seed", o.seed, "random seed");
}

}  // namespace

int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Streaming BYPASS / ADA-BYPASS filtering, evaluation and backtesting"};
  app.require_subcommand(1);

  CommonOpts common;
  std::string input;
  std::string output;
  std::string forecast_output;
  std::string x_path;
  std::string y_path;
  std::string output_y;
  std::string kind = "changepoint";
  std::vector<std::string> segments;
  std::size_t length = 1000;

  auto* filter = app.add_subcommand("filter", "stream one-step predictions to CSV");
  add_common(filter, common);
  filter->add_option("--input", input, "series CSV (index,value)")->required();
  filter->add_option("--output", output, "prediction CSV")->required();
  filter->add_option("--forecast-output", forecast_output, "multi-step forecast CSV from the end of the stream");

  auto* evaluate = app.add_subcommand("evaluate", "score one or more models (comma-separated) on a series");
  add_common(evaluate, common);
  evaluate->add_option("--input", input, "series CSV (index,value)")->required();
  evaluate->add_option("--output", output, "metrics JSON (stdout when omitted)");

  auto* backtest = app.add_subcommand("backtest", "pairs trade y against x with a scalar hedge model");
  add_common(backtest, common);
  backtest->add_option("--x", x_path, "price CSV of the hedge leg")->required();
  backtest->add_option("--y", y_path, "price CSV of the traded leg")->required();
  backtest->add_option("--output", output, "metrics JSON (stdout when omitted)");

  auto* synth = app.add_subcommand("synth", "write a seeded synthetic series");
  add_common(synth, common);
  synth->add_option("--output", output, "output CSV (x leg for --kind pair)")->required();
  synth->add_option("--output-y", output_y, "y leg CSV for --kind pair");
  synth->add_option("--kind", kind, "changepoint | pair")->check(CLI::IsMember({"changepoint", "pair"}));
  synth->add_option("--segment", segments, "length:intercept:ar_coef:noise_sd (repeatable)");
  synth->add_option("--length", length, "pair length")->check(CLI::PositiveNumber);

  std::vector<std::string> argv_store;
  argv_store.reserve(args.size() + 1);
  argv_store.emplace_back("bypass");
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& a : argv_store) argv.push_back(a.data());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    app.exit(e, out, err);
    return kExitOk;
  } catch (const CLI::CallForAllHelp& e) {
    app.exit(e, out, err);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitConfig;
  }

  try {
    const RunConfig cfg = resolve_config(common);

    if (filter->parsed()) {
      const auto series = load_input(input, cfg.standardize);
      auto model = make_model(cfg.model, 2, cfg.settings);
      const StreamRun run = run_ar1_stream(*model, series);
      write_predictions(output, run, cfg.model);
      if (!forecast_output.empty()) {
        write_forecast(forecast_output, multi_step_forecast(*model, run.last_lag, cfg.horizon));
      }
      return kExitOk;
    }

    if (evaluate->parsed()) {
      const auto series = load_input(input, cfg.standardize);
      const auto kinds = model_list(common.model, cfg.model);
      std::vector<StreamJob> jobs;
      for (ModelKind k : kinds) jobs.push_back({k, cfg.settings, series});
      const auto runs = run_streams_parallel(jobs);
      ordered_json doc;
      if (runs.size() == 1) {
        doc = metrics_json(runs.front().metrics.summary());
      } else {
        doc = ordered_json::object();
        for (std::size_t i = 0; i < runs.size(); ++i) {
          doc[std::string(to_string(kinds[i]))] = metrics_json(runs[i].metrics.summary());
        }
      }
      emit_json(doc, output, out);
      return kExitOk;
    }

    if (backtest->parsed()) {
      const auto xs = price_column(x_path);
      const auto ys = price_column(y_path);
      auto model = make_model(cfg.model, 1, cfg.settings);
      const BacktestMetrics m = pairs_backtest(xs, ys, *model, cfg.trade);
      ordered_json doc{{"model", std::string(to_string(cfg.model))},
                       {"sharpe", m.sharpe},
                       {"max_drawdown", m.max_drawdown},
                       {"max_dd_duration_days", m.max_dd_duration},
                       {"round_trips", m.round_trips}};
      emit_json(doc, output, out);
      return kExitOk;
    }

    if (synth->parsed()) {
      if (kind == "pair") {
        if (output_y.empty()) throw ConfigError("--output-y is required for --kind pair");
        PairSpec spec;
        spec.length = length;
        const PricePair pair = synth_pair(cfg.seed, spec);
        write_series_csv(output, to_records(pair.x), "x");
        write_series_csv(output_y, to_records(pair.y), "y");
        return kExitOk;
      }
      std::vector<Segment> segs;
      for (const auto& s : segments) segs.push_back(parse_segment(s));
      if (segs.empty()) {
        segs = {{250, 0.0, 0.5, 1.0}, {250, 2.0, 0.5, 1.0}};
      }
      write_series_csv(output, to_records(synth_changepoint(cfg.seed, segs)), "y");
      return kExitOk;
    }
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const DataError& e) {
    err << "data error: " << e.what() << '\n';
    return kExitData;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitData;
  }
  return kExitConfig;
}

int cli_main(int argc, char** argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return cli_main(args, std::cout, std::cerr);
}

}  // namespace bypass
