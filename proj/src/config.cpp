#include "xroads/config.hpp"

#include <cmath>
#include <fstream>
#include <numbers>

#include "xroads/errors.hpp"

namespace xroads {

namespace {

std::string join(const std::string& where, const char* key) {
  return where.empty() ? std::string(key) : where + "." + key;
}

const json& require_object(const json& j, const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + ": expected an object");
  return j;
}

double number_at(const json& obj, const char* key, const std::string& where) {
  const json& v = obj.at(key);
  if (!v.is_number()) throw ConfigError(join(where, key) + ": expected a number");
  return v.get<double>();
}

std::optional<double> optional_number(const json& obj, const char* key, const std::string& where) {
  if (!obj.contains(key)) return std::nullopt;
  return number_at(obj, key, where);
}

double required_number(const json& obj, const char* key, const std::string& where) {
  if (!obj.contains(key)) throw ConfigError(join(where, key) + ": missing required field");
  return number_at(obj, key, where);
}

std::uint64_t unsigned_at(const json& obj, const char* key, const std::string& where) {
  const json& v = obj.at(key);
  if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0))
    throw ConfigError(join(where, key) + ": expected a non-negative integer");
  return v.get<std::uint64_t>();
}

std::vector<double> number_list(const json& obj, const char* key, const std::string& where) {
  const json& v = obj.at(key);
  if (!v.is_array()) throw ConfigError(join(where, key) + ": expected an array of numbers");
  std::vector<double> out;
  for (const auto& e : v) {
    if (!e.is_number()) throw ConfigError(join(where, key) + ": expected an array of numbers");
    out.push_back(e.get<double>());
  }
  return out;
}

ChannelParams channel_preset(const std::string& name, const std::string& where) {
  if (name == "LOS" || name == "los") return ChannelParams::los();
  if (name == "NLOS" || name == "nlos") return ChannelParams::nlos();
  throw ConfigError(where + ".preset: unknown channel preset '" + name + "' (LOS or NLOS)");
}

}  // namespace

void require_known_keys(const json& j, const std::string& where,
                        std::initializer_list<const char*> allowed) {
  for (const auto& [key, value] : j.items()) {
    bool known = false;
    for (const char* a : allowed) known = known || key == a;
    if (!known) throw ConfigError(join(where, key.c_str()) + ": unknown key");
  }
}

Engine parse_engine(const std::string& name) {
  if (name == "analytic") return Engine::Analytic;
  if (name == "mc" || name == "montecarlo") return Engine::MonteCarlo;
  if (name == "both") return Engine::Both;
  throw ConfigError("engine: expected analytic, mc or both, got '" + name + "'");
}

const char* engine_name(Engine engine) {
  switch (engine) {
    case Engine::Analytic: return "analytic";
    case Engine::MonteCarlo: return "mc";
    case Engine::Both: return "both";
  }
  return "?";
}

RawScenario raw_scenario_from_json(const json& j) {
  const std::string where = "scenario";
  require_object(j, where);
  require_known_keys(j, where, {"channel", "geometry", "link", "layout", "p", "threshold_db"});
  for (const char* section : {"channel", "geometry", "link", "layout"})
    if (!j.contains(section)) throw ConfigError(join(where, section) + ": missing section");

  RawScenario raw;

  const std::string wc = join(where, "channel");
  const json& ch = require_object(j.at("channel"), wc);
  require_known_keys(ch, wc, {"preset", "alpha", "m", "mu"});
  if (ch.contains("preset")) {
    if (!ch.at("preset").is_string()) throw ConfigError(wc + ".preset: expected a string");
    const ChannelParams preset = channel_preset(ch.at("preset").get<std::string>(), wc);
    raw.alpha = preset.alpha;
    raw.m = preset.m;
    raw.mu = preset.mu;
    raw.alpha = optional_number(ch, "alpha", wc).value_or(raw.alpha);
    raw.m = optional_number(ch, "m", wc).value_or(raw.m);
    raw.mu = optional_number(ch, "mu", wc).value_or(raw.mu);
  } else {
    raw.alpha = required_number(ch, "alpha", wc);
    raw.m = required_number(ch, "m", wc);
    raw.mu = optional_number(ch, "mu", wc).value_or(1.0);
  }

  const std::string wg = join(where, "geometry");
  const json& geo = require_object(j.at("geometry"), wg);
  require_known_keys(geo, wg, {"d", "theta_deg"});
  raw.d = required_number(geo, "d", wg);
  // Scaling pi/2 keeps 90 and 45 degrees exact.
  raw.theta = std::numbers::pi / 2 * (optional_number(geo, "theta_deg", wg).value_or(0.0) / 90.0);

  const std::string wl = join(where, "link");
  const json& link = require_object(j.at("link"), wl);
  require_known_keys(link, wl, {"r"});
  raw.r = required_number(link, "r", wl);

  const std::string wy = join(where, "layout");
  const json& lay = require_object(j.at("layout"), wy);
  require_known_keys(lay, wy, {"lanes_x", "lanes_y", "lambda_x", "lambda_y"});
  if (lay.contains("lanes_x")) raw.lanes_x = number_list(lay, "lanes_x", wy);
  if (lay.contains("lanes_y")) raw.lanes_y = number_list(lay, "lanes_y", wy);
  raw.lambda_x = required_number(lay, "lambda_x", wy);
  raw.lambda_y = required_number(lay, "lambda_y", wy);

  raw.p = required_number(j, "p", where);
  raw.theta_threshold = db_to_linear(required_number(j, "threshold_db", where));
  return raw;
}

Scenario scenario_from_json(const json& j) { return validate_scenario(raw_scenario_from_json(j)); }

json scenario_to_json(const Scenario& s) {
  return json{
      {"channel", {{"alpha", s.channel.alpha}, {"m", s.channel.m}, {"mu", s.channel.mu}}},
      {"geometry", {{"d", s.geometry.d}, {"theta_deg", s.geometry.theta * 90.0 / (std::numbers::pi / 2)}}},
      {"link", {{"r", s.link.r}}},
      {"layout",
       {{"lanes_x", s.layout.lanes_x},
        {"lanes_y", s.layout.lanes_y},
        {"lambda_x", s.layout.lambda_x},
        {"lambda_y", s.layout.lambda_y}}},
      {"p", s.p},
      {"threshold_db", 10.0 * std::log10(s.theta_threshold)},
  };
}

SimConfig MonteCarloSettings::resolve(const Scenario& scenario) const {
  SimConfig sim;
  sim.trials = trials;
  sim.master_seed = seed;
  sim.confidence = confidence;
  sim.half_length = half_length ? *half_length
                                : std::min(max_half_length, half_length_for_bias(scenario, max_bias));
  check_config(sim);
  return sim;
}

MonteCarloSettings mc_settings_from_json(const json& j) {
  const std::string where = "monte_carlo";
  require_object(j, where);
  require_known_keys(j, where,
                     {"trials", "half_length", "max_bias", "max_half_length", "seed", "confidence"});
  MonteCarloSettings mc;
  if (j.contains("trials")) mc.trials = unsigned_at(j, "trials", where);
  if (j.contains("seed")) mc.seed = unsigned_at(j, "seed", where);
  if (j.contains("half_length")) {
    const json& h = j.at("half_length");
    if (h.is_string() && h.get<std::string>() == "auto")
      mc.half_length.reset();
    else
      mc.half_length = number_at(j, "half_length", where);
  }
  mc.max_bias = optional_number(j, "max_bias", where).value_or(mc.max_bias);
  mc.max_half_length = optional_number(j, "max_half_length", where).value_or(mc.max_half_length);
  mc.confidence = optional_number(j, "confidence", where).value_or(mc.confidence);

  if (mc.trials < 1) throw ConfigError("monte_carlo.trials: must be >= 1");
  if (mc.half_length && !(*mc.half_length > 0.0))
    throw ConfigError("monte_carlo.half_length: must be positive or \"auto\"");
  if (!(mc.max_bias > 0.0)) throw ConfigError("monte_carlo.max_bias: must be positive");
  if (!(mc.max_half_length > 0.0))
    throw ConfigError("monte_carlo.max_half_length: must be positive");
  if (!(mc.confidence > 0.0 && mc.confidence < 1.0))
    throw ConfigError("monte_carlo.confidence: must lie in (0, 1)");
  return mc;
}

json mc_settings_to_json(const MonteCarloSettings& mc) {
  json j{{"trials", mc.trials}, {"seed", mc.seed}, {"confidence", mc.confidence},
         {"max_bias", mc.max_bias}};
  if (mc.half_length)
    j["half_length"] = *mc.half_length;
  else
    j["half_length"] = "auto";
  if (std::isfinite(mc.max_half_length)) j["max_half_length"] = mc.max_half_length;
  return j;
}

LaplaceEvalConfig analytic_config_from_json(const json& j) {
  const std::string where = "analytic";
  require_object(j, where);
  require_known_keys(j, where, {"rel_tol", "truncation"});
  LaplaceEvalConfig cfg;
  cfg.rel_tol = optional_number(j, "rel_tol", where).value_or(cfg.rel_tol);
  cfg.truncation = optional_number(j, "truncation", where).value_or(cfg.truncation);
  try {
    check_config(cfg);
  } catch (const DomainError& e) {
    throw ConfigError(std::string("analytic: ") + e.what());
  }
  return cfg;
}

json analytic_config_to_json(const LaplaceEvalConfig& cfg) {
  return json{{"rel_tol", cfg.rel_tol}, {"truncation", cfg.truncation}};
}

PointConfig point_config_from_json(const json& j) {
  require_object(j, "config");
  require_known_keys(j, "", {"scenario", "monte_carlo", "analytic", "engine"});
  if (!j.contains("scenario")) throw ConfigError("scenario: missing section");
  PointConfig pc;
  pc.scenario = scenario_from_json(j.at("scenario"));
  if (j.contains("monte_carlo")) pc.mc = mc_settings_from_json(j.at("monte_carlo"));
  if (j.contains("analytic")) pc.analytic = analytic_config_from_json(j.at("analytic"));
  if (j.contains("engine")) {
    if (!j.at("engine").is_string()) throw ConfigError("engine: expected a string");
    pc.engine = parse_engine(j.at("engine").get<std::string>());
  }
  return pc;
}

json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path + ": cannot open config file");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

}  // namespace xroads
