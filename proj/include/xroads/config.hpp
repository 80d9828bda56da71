#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <string>

#include "json.hpp"

#include "xroads/analytic.hpp"
#include "xroads/model.hpp"
#include "xroads/montecarlo.hpp"

namespace xroads {

using json = nlohmann::json;

enum class Engine { Analytic, MonteCarlo, Both };

Engine parse_engine(const std::string& name);
const char* engine_name(Engine engine);
inline bool uses_analytic(Engine e) { return e != Engine::MonteCarlo; }
inline bool uses_montecarlo(Engine e) { return e != Engine::Analytic; }

/// Monte-Carlo settings as written in a config file. A missing
/// `half_length` means `auto`: the road is sized by half_length_for_bias
/// with `max_bias`, then capped at `max_half_length`.
struct MonteCarloSettings {
  std::uint64_t trials = 50'000;
  std::optional<double> half_length = 1000.0;
  double max_bias = 1e-3;
  double max_half_length = std::numeric_limits<double>::infinity();
  std::uint64_t seed = 1;
  double confidence = 0.95;

  SimConfig resolve(const Scenario& scenario) const;
};

/// Scenario section of a config file:
///
///   { "channel":  { "preset": "LOS" | "NLOS", "alpha": 4, "m": 1, "mu": 1 },
///     "geometry": { "d": 0, "theta_deg": 0 },
///     "link":     { "r": 20 },
///     "layout":   { "lanes_x": [0], "lanes_y": [0], "lambda_x": 0.01, "lambda_y": 0.01 },
///     "p": 0.5,
///     "threshold_db": 0 }
///
/// Explicit channel fields override the preset. Unknown keys raise
/// ConfigError naming the full key path.
RawScenario raw_scenario_from_json(const json& j);
Scenario scenario_from_json(const json& j);
json scenario_to_json(const Scenario& scenario);

MonteCarloSettings mc_settings_from_json(const json& j);
json mc_settings_to_json(const MonteCarloSettings& mc);

LaplaceEvalConfig analytic_config_from_json(const json& j);
json analytic_config_to_json(const LaplaceEvalConfig& cfg);

/// Single-scenario run: { "scenario": {...}, "monte_carlo": {...},
/// "analytic": {...}, "engine": "analytic" | "mc" | "both" }.
struct PointConfig {
  Scenario scenario;
  MonteCarloSettings mc;
  LaplaceEvalConfig analytic;
  Engine engine = Engine::Analytic;
};

PointConfig point_config_from_json(const json& j);

/// Reads and parses a JSON file; ConfigError on I/O or syntax failure.
json load_json_file(const std::string& path);

/// Throws ConfigError when `j` has a key outside `allowed`.
void require_known_keys(const json& j, const std::string& where,
                        std::initializer_list<const char*> allowed);

}  // namespace xroads
