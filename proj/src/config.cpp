#include "bypass/config.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <type_traits>
#include <vector>

#include <json.hpp>

#include "bypass/errors.hpp"

namespace bypass {
namespace {

using nlohmann::json;

class Reader {
 public:
  Reader(const json& obj, std::string path, const std::string& source) : obj_(obj), path_(std::move(path)), source_(source) {
    if (!obj_.is_object()) {
      fail(path_.empty() ? "<root>" : path_, "expected an object");
    }
    for (const auto& [key, _] : obj_.items()) {
      pending_.push_back(key);
    }
  }

  [[noreturn]] void fail(const std::string& field, const std::string& msg) const {
    throw ConfigError(source_ + ": " + field + ": " + msg);
  }

  std::string field(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

  const json* take(const std::string& key) {
    const auto it = obj_.find(key);
    if (it == obj_.end()) return nullptr;
    std::erase(pending_, key);
    return &*it;
  }

  void number(const std::string& key, double& out) {
    if (const json* v = take(key)) {
      if (!v->is_number()) fail(field(key), "expected a number");
      out = v->get<double>();
    }
  }

  template <typename Int>
  void integer(const std::string& key, Int& out) {
    if (const json* v = take(key)) {
      if (!v->is_number_integer()) fail(field(key), "expected an integer");
      if constexpr (std::is_unsigned_v<Int>) {
        if (!v->is_number_unsigned()) fail(field(key), "expected a non-negative integer");
      }
      out = v->get<Int>();
    }
  }

  void boolean(const std::string& key, bool& out) {
    if (const json* v = take(key)) {
      if (!v->is_boolean()) fail(field(key), "expected true or false");
      out = v->get<bool>();
    }
  }

  Reader child(const std::string& key) {
    const json* v = take(key);
    static const json empty = json::object();
    return Reader(v ? *v : empty, field(key), source_);
  }

  void finish() const {
    if (!pending_.empty()) {
      fail(field(pending_.front()), "unknown key");
    }
  }

 private:
  const json& obj_;
  std::string path_;
  const std::string& source_;
  std::vector<std::string> pending_;
};

void read_hyper(Reader r, HyperParams& h) {
  r.number("a", h.a);
  r.number("b", h.b);
  r.number("epsilon", h.epsilon);
  r.number("c_omega", h.c_omega);
  if (const json* v = r.take("omega_min")) {
    if (v->is_number()) {
      h.omega_min.fill(v->get<double>());
    } else if (v->is_array() && v->size() == HyperParams::kCount && std::all_of(v->begin(), v->end(), [](const json& e) { return e.is_number(); })) {
      for (std::size_t j = 0; j < HyperParams::kCount; ++j) h.omega_min[j] = (*v)[j].get<double>();
    } else {
      r.fail(r.field("omega_min"), "expected a number or an array of 3 numbers");
    }
  }
  r.finish();
}

void read_govi(Reader r, GoviConfig& g) {
  r.integer("max_fixed_point_iters", g.max_fixed_point_iters);
  r.number("rel_tol", g.rel_tol);
  r.number("alpha_denominator_floor", g.alpha_denominator_floor);
  r.number("rho_floor", g.guards.rho_floor);
  r.number("log_mass_floor", g.guards.log_mass_floor);
  r.number("beta0", g.beta0);
  r.finish();
}

void read_skf(Reader r, SkfConfig& s) {
  r.number("forgetting", s.forgetting);
  r.number("r_floor", s.r_floor);
  r.number("r0", s.r0);
  r.number("q0", s.q0);
  r.finish();
}

void read_pa1(Reader r, Pa1Config& p) {
  r.number("c", p.c);
  r.number("epsilon", p.epsilon);
  r.finish();
}

void read_trade(Reader r, TradeConfig& t) {
  r.number("z_entry", t.z_entry);
  r.number("z_exit", t.z_exit);
  r.number("annualization", t.annualization);
  r.integer("warmup", t.warmup);
  r.finish();
}

}  // namespace

void RunConfig::validate() const {
  settings.hyper.validate();
  settings.govi.validate();
  settings.skf.validate();
  settings.pa1.validate();
  trade.validate();
  if (horizon < 1) {
    throw ConfigError("horizon must be >= 1");
  }
}

RunConfig parse_run_config(const std::string& json_text, const std::string& source) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(source + ": " + e.what());
  }
  RunConfig cfg;
  Reader root(doc, "", source);
  if (const json* m = root.take("model")) {
    if (!m->is_string()) root.fail("model", "expected a string");
    cfg.model = parse_model_kind(m->get<std::string>());
  }
  read_hyper(root.child("hyper"), cfg.settings.hyper);
  read_govi(root.child("govi"), cfg.settings.govi);
  read_skf(root.child("skf"), cfg.settings.skf);
  read_pa1(root.child("pa1"), cfg.settings.pa1);
  read_trade(root.child("trade"), cfg.trade);
  root.integer("horizon", cfg.horizon);
  root.integer("seed", cfg.seed);
  root.boolean("standardize", cfg.standardize);
  root.finish();
  cfg.validate();
  return cfg;
}

RunConfig load_run_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw ConfigError("cannot open config " + path.string());
  }
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_run_config(buf.str(), path.string());
}

std::string dump_run_config(const RunConfig& cfg) {
  const auto& h = cfg.settings.hyper;
  const auto& g = cfg.settings.govi;
  const auto& s = cfg.settings.skf;
  json doc = {
      {"model", std::string(to_string(cfg.model))},
      {"hyper", {{"a", h.a}, {"b", h.b}, {"epsilon", h.epsilon}, {"c_omega", h.c_omega}, {"omega_min", h.omega_min}}},
      {"govi",
       {{"max_fixed_point_iters", g.max_fixed_point_iters},
        {"rel_tol", g.rel_tol},
        {"alpha_denominator_floor", g.alpha_denominator_floor},
        {"rho_floor", g.guards.rho_floor},
        {"log_mass_floor", g.guards.log_mass_floor},
        {"beta0", g.beta0}}},
      {"skf", {{"forgetting", s.forgetting}, {"r_floor", s.r_floor}, {"r0", s.r0}, {"q0", s.q0}}},
      {"pa1", {{"c", cfg.settings.pa1.c}, {"epsilon", cfg.settings.pa1.epsilon}}},
      {"trade",
       {{"z_entry", cfg.trade.z_entry},
        {"z_exit", cfg.trade.z_exit},
        {"annualization", cfg.trade.annualization},
        {"warmup", cfg.trade.warmup}}},
      {"horizon", cfg.horizon},
      {"seed", cfg.seed},
      {"standardize", cfg.standardize},
  };
  return doc.dump(2);
}

}  // namespace bypass
