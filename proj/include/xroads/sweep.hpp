#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "xroads/config.hpp"

namespace xroads {

enum class SweepAxis { Density, DistanceD, Lanes, ThresholdDb, AlohaP };

SweepAxis parse_sweep_axis(const std::string& name);
const char* sweep_axis_name(SweepAxis axis);

/// A labelled JSON merge patch applied to the base scenario.
struct Variant {
  std::string label;
  json overrides = json::object();
};

/// Sweep config:
///
///   { "scenario": {...base...}, "monte_carlo": {...}, "analytic": {...},
///     "sweep": { "axis": "density", "values": [...],
///                "engines": ["analytic", "montecarlo"],
///                "lane_spacing": 3.5,
///                "variants": [ { "label": "LOS", "overrides": {...} } ] } }
///
/// Axis semantics: density sets lambda_x and lambda_y; distance_d sets
/// geometry.d; lanes sets n lanes at 0, spacing, ... on the X road and, unless
/// the variant is a highway (empty lanes_y), on the Y road; threshold_db and
/// aloha_p set the threshold and p.
struct SweepSpec {
  std::string name = "sweep";
  json base = json::object();
  SweepAxis axis = SweepAxis::Density;
  std::vector<double> values;
  bool analytic = true;
  bool montecarlo = true;
  double lane_spacing = kDefaultLaneSpacing;
  std::vector<Variant> variants;
  MonteCarloSettings mc;
  LaplaceEvalConfig analytic_cfg;
};

/// Parses and validates the spec, including every (variant, value) scenario.
SweepSpec sweep_spec_from_json(const json& j);
json sweep_spec_to_json(const SweepSpec& spec);

/// Scenario JSON of one sweep point: base, then variant patch, then axis value.
json point_scenario_json(const SweepSpec& spec, const Variant& variant, double value);

struct SweepRow {
  std::string variant;
  std::string axis;
  double value = 0.0;
  std::optional<double> outage_analytic;
  std::optional<double> throughput_analytic;
  std::optional<double> outage_mc;
  std::optional<double> mc_stderr;
  std::optional<double> ci_low;
  std::optional<double> ci_high;
  std::optional<std::uint64_t> trials;
  // Not part of the CSV; reported in the metadata file.
  std::optional<double> half_length;
  std::optional<double> truncation_bias_bound;
  std::uint64_t excluded_interferers = 0;
  std::string error;
};

/// One row per (variant, value), variants outer, values inner. Points are
/// evaluated concurrently on `workers` threads; row order and content do not
/// depend on the worker count. A point that throws keeps its row with
/// `error` set and empty result fields.
std::vector<SweepRow> run_sweep(const SweepSpec& spec, unsigned workers = 1);

inline constexpr const char* kCsvHeader =
    "variant,axis,value,outage_analytic,throughput_analytic,outage_mc,mc_stderr,ci_low,ci_high,"
    "trials";

/// Shortest decimal text that parses back to exactly `v`.
std::string format_double(double v);

void write_csv(std::ostream& out, const std::vector<SweepRow>& rows);

json sweep_metadata(const SweepSpec& spec, const std::vector<SweepRow>& rows,
                    const std::string& command);

// ---------------------------------------------------------------------------
// Engine cross-check

struct VerifySpec {
  json base = json::object();
  std::vector<Variant> points;
  MonteCarloSettings mc;
  LaplaceEvalConfig analytic_cfg;
};

/// { "scenario": {...}, "monte_carlo": {...}, "analytic": {...},
///   "points": [ { "label": ..., "overrides": {...} } ] }
VerifySpec verify_spec_from_json(const json& j);

struct VerifyRow {
  std::string label;
  double analytic = 0.0;
  double mc = 0.0;
  double mc_stderr = 0.0;
  double tolerance = 0.0;
  double diff = 0.0;
  std::uint64_t trials = 0;
  double half_length = 0.0;
  bool wide_ci = false;  // 3 sigma exceeds the 0.01 floor
  bool pass = false;
  std::string error;
};

struct VerifyReport {
  std::vector<VerifyRow> rows;
  bool pass = false;
};

/// Tolerance of one comparison: max(0.01, 3 * Monte-Carlo standard error).
double agreement_tolerance(double mc_stderr);

VerifyReport compare_engines(const VerifySpec& spec, unsigned workers = 1);

void print_verify_report(std::ostream& out, const VerifyReport& report);

}  // namespace xroads
