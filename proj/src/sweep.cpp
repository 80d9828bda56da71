#include "xroads/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <thread>

#include "xroads/errors.hpp"

#ifndef XROADS_VERSION
#define XROADS_VERSION "unknown"
#endif

namespace xroads {

namespace {

template <class Fn>
void parallel_for(std::size_t count, unsigned workers, Fn&& fn) {
  workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(count)));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) fn(i);
    });
  }
}

std::vector<Variant> variants_from_json(const json& arr, const std::string& where) {
  if (!arr.is_array()) throw ConfigError(where + ": expected an array");
  std::vector<Variant> out;
  for (std::size_t i = 0; i < arr.size(); ++i) {
    const std::string w = where + "[" + std::to_string(i) + "]";
    const json& v = arr[i];
    if (!v.is_object()) throw ConfigError(w + ": expected an object");
    require_known_keys(v, w, {"label", "overrides"});
    if (!v.contains("label") || !v.at("label").is_string())
      throw ConfigError(w + ".label: expected a string");
    Variant var{v.at("label").get<std::string>(), json::object()};
    if (v.contains("overrides")) {
      if (!v.at("overrides").is_object()) throw ConfigError(w + ".overrides: expected an object");
      var.overrides = v.at("overrides");
    }
    out.push_back(std::move(var));
  }
  return out;
}

json variants_to_json(const std::vector<Variant>& variants) {
  json arr = json::array();
  for (const auto& v : variants) arr.push_back({{"label", v.label}, {"overrides", v.overrides}});
  return arr;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string opt_field(const std::optional<double>& v) { return v ? format_double(*v) : ""; }

}  // namespace

SweepAxis parse_sweep_axis(const std::string& name) {
  if (name == "density") return SweepAxis::Density;
  if (name == "distance_d") return SweepAxis::DistanceD;
  if (name == "lanes") return SweepAxis::Lanes;
  if (name == "threshold_db") return SweepAxis::ThresholdDb;
  if (name == "aloha_p") return SweepAxis::AlohaP;
  throw ConfigError("sweep.axis: unknown axis '" + name +
                    "' (density, distance_d, lanes, threshold_db, aloha_p)");
}

const char* sweep_axis_name(SweepAxis axis) {
  switch (axis) {
    case SweepAxis::Density: return "density";
    case SweepAxis::DistanceD: return "distance_d";
    case SweepAxis::Lanes: return "lanes";
    case SweepAxis::ThresholdDb: return "threshold_db";
    case SweepAxis::AlohaP: return "aloha_p";
  }
  return "?";
}

json point_scenario_json(const SweepSpec& spec, const Variant& variant, double value) {
  json j = spec.base;
  j.merge_patch(variant.overrides);
  switch (spec.axis) {
    case SweepAxis::Density:
      j["layout"]["lambda_x"] = value;
      j["layout"]["lambda_y"] = value;
      break;
    case SweepAxis::DistanceD:
      j["geometry"]["d"] = value;
      break;
    case SweepAxis::Lanes: {
      const auto offsets = RoadLayout::lane_offsets(static_cast<std::size_t>(value), spec.lane_spacing);
      json& layout = j["layout"];
      const bool highway = layout.contains("lanes_y") && layout["lanes_y"].is_array() &&
                           layout["lanes_y"].empty();
      layout["lanes_x"] = offsets;
      if (!highway) layout["lanes_y"] = offsets;
      break;
    }
    case SweepAxis::ThresholdDb:
      j["threshold_db"] = value;
      break;
    case SweepAxis::AlohaP:
      j["p"] = value;
      break;
  }
  return j;
}

SweepSpec sweep_spec_from_json(const json& j) {
  if (!j.is_object()) throw ConfigError("config: expected an object");
  require_known_keys(j, "", {"name", "scenario", "monte_carlo", "analytic", "sweep"});
  for (const char* section : {"scenario", "sweep"})
    if (!j.contains(section)) throw ConfigError(std::string(section) + ": missing section");

  SweepSpec spec;
  if (j.contains("name")) {
    if (!j.at("name").is_string()) throw ConfigError("name: expected a string");
    spec.name = j.at("name").get<std::string>();
  }
  spec.base = j.at("scenario");
  if (!spec.base.is_object()) throw ConfigError("scenario: expected an object");
  if (j.contains("monte_carlo")) spec.mc = mc_settings_from_json(j.at("monte_carlo"));
  if (j.contains("analytic")) spec.analytic_cfg = analytic_config_from_json(j.at("analytic"));

  const json& sw = j.at("sweep");
  if (!sw.is_object()) throw ConfigError("sweep: expected an object");
  require_known_keys(sw, "sweep", {"axis", "values", "engines", "lane_spacing", "variants"});
  if (!sw.contains("axis") || !sw.at("axis").is_string())
    throw ConfigError("sweep.axis: expected a string");
  spec.axis = parse_sweep_axis(sw.at("axis").get<std::string>());

  if (!sw.contains("values") || !sw.at("values").is_array())
    throw ConfigError("sweep.values: expected an array of numbers");
  for (const auto& v : sw.at("values")) {
    if (!v.is_number()) throw ConfigError("sweep.values: expected an array of numbers");
    spec.values.push_back(v.get<double>());
  }
  if (spec.values.empty()) throw ConfigError("sweep.values: must not be empty");
  for (std::size_t i = 1; i < spec.values.size(); ++i)
    if (!(spec.values[i] > spec.values[i - 1]))
      throw ConfigError("sweep.values: must be strictly increasing");
  if (spec.axis == SweepAxis::Lanes)
    for (double v : spec.values)
      if (v < 1.0 || v != std::floor(v))
        throw ConfigError("sweep.values: lane counts must be positive integers");

  if (sw.contains("engines")) {
    const json& e = sw.at("engines");
    if (!e.is_array() || e.empty()) throw ConfigError("sweep.engines: expected a non-empty array");
    spec.analytic = spec.montecarlo = false;
    for (const auto& name : e) {
      if (!name.is_string()) throw ConfigError("sweep.engines: expected strings");
      const Engine eng = parse_engine(name.get<std::string>());
      spec.analytic = spec.analytic || uses_analytic(eng);
      spec.montecarlo = spec.montecarlo || uses_montecarlo(eng);
    }
  }
  if (sw.contains("lane_spacing")) {
    if (!sw.at("lane_spacing").is_number()) throw ConfigError("sweep.lane_spacing: expected a number");
    spec.lane_spacing = sw.at("lane_spacing").get<double>();
    if (!(spec.lane_spacing >= 0.0)) throw ConfigError("sweep.lane_spacing: must be >= 0");
  }
  if (sw.contains("variants"))
    spec.variants = variants_from_json(sw.at("variants"), "sweep.variants");
  if (spec.variants.empty()) spec.variants.push_back({"base", json::object()});

  for (const auto& var : spec.variants)
    for (double v : spec.values) {
      try {
        (void)scenario_from_json(point_scenario_json(spec, var, v));
      } catch (const ConfigError& e) {
        throw ConfigError("variant '" + var.label + "': " + e.what());
      } catch (const ValidationError& e) {
        std::vector<std::string> issues;
        for (const auto& issue : e.issues())
          issues.push_back("variant '" + var.label + "', " + sweep_axis_name(spec.axis) + "=" +
                           format_double(v) + ": " + issue);
        throw ValidationError(std::move(issues));
      }
    }
  return spec;
}

json sweep_spec_to_json(const SweepSpec& spec) {
  json engines = json::array();
  if (spec.analytic) engines.push_back("analytic");
  if (spec.montecarlo) engines.push_back("montecarlo");
  return json{{"name", spec.name},
              {"scenario", spec.base},
              {"monte_carlo", mc_settings_to_json(spec.mc)},
              {"analytic", analytic_config_to_json(spec.analytic_cfg)},
              {"sweep",
               {{"axis", sweep_axis_name(spec.axis)},
                {"values", spec.values},
                {"engines", engines},
                {"lane_spacing", spec.lane_spacing},
                {"variants", variants_to_json(spec.variants)}}}};
}

std::vector<SweepRow> run_sweep(const SweepSpec& spec, unsigned workers) {
  const std::size_t nv = spec.values.size();
  std::vector<SweepRow> rows(spec.variants.size() * nv);

  parallel_for(rows.size(), workers, [&](std::size_t idx) {
    const Variant& var = spec.variants[idx / nv];
    const double value = spec.values[idx % nv];
    SweepRow& row = rows[idx];
    row.variant = var.label;
    row.axis = sweep_axis_name(spec.axis);
    row.value = value;
    try {
      const Scenario s = scenario_from_json(point_scenario_json(spec, var, value));
      if (spec.analytic) {
        const auto a = outage_probability(s, spec.analytic_cfg);
        row.outage_analytic = a.outage_prob;
        row.throughput_analytic = a.throughput;
      }
      if (spec.montecarlo) {
        const SimConfig sim = spec.mc.resolve(s);
        const auto est = estimate(s, sim, 1);
        row.outage_mc = est.p_hat;
        row.mc_stderr = est.std_error;
        row.ci_low = est.ci_low;
        row.ci_high = est.ci_high;
        row.trials = est.trials;
        row.half_length = sim.half_length;
        row.truncation_bias_bound = truncation_bias_bound(s, sim.half_length);
        row.excluded_interferers = est.excluded_interferers;
      }
    } catch (const std::exception& e) {
      row.outage_analytic.reset();
      row.throughput_analytic.reset();
      row.outage_mc.reset();
      row.mc_stderr.reset();
      row.ci_low.reset();
      row.ci_high.reset();
      row.trials.reset();
      row.error = e.what();
    }
  });
  return rows;
}

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

void write_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
  out << kCsvHeader << '\n';
  for (const auto& r : rows) {
    out << csv_field(r.variant) << ',' << r.axis << ',' << format_double(r.value) << ','
        << opt_field(r.outage_analytic) << ',' << opt_field(r.throughput_analytic) << ','
        << opt_field(r.outage_mc) << ',' << opt_field(r.mc_stderr) << ',' << opt_field(r.ci_low)
        << ',' << opt_field(r.ci_high) << ',' << (r.trials ? std::to_string(*r.trials) : "")
        << '\n';
  }
}

json sweep_metadata(const SweepSpec& spec, const std::vector<SweepRow>& rows,
                    const std::string& command) {
  json row_meta = json::array();
  bool failed = false;
  for (const auto& r : rows) {
    json m{{"variant", r.variant}, {"value", r.value}};
    if (r.half_length) m["half_length"] = *r.half_length;
    if (r.truncation_bias_bound) m["truncation_bias_bound"] = *r.truncation_bias_bound;
    if (r.excluded_interferers) m["excluded_interferers"] = r.excluded_interferers;
    if (!r.error.empty()) {
      m["error"] = r.error;
      failed = true;
    }
    row_meta.push_back(std::move(m));
  }
  return json{{"tool", "xroads"},
              {"version", XROADS_VERSION},
              {"command", command},
              {"seed", spec.mc.seed},
              {"trials", spec.mc.trials},
              {"config", sweep_spec_to_json(spec)},
              {"failed", failed},
              {"rows", row_meta}};
}

// ---------------------------------------------------------------------------

VerifySpec verify_spec_from_json(const json& j) {
  if (!j.is_object()) throw ConfigError("config: expected an object");
  require_known_keys(j, "", {"name", "scenario", "monte_carlo", "analytic", "points"});
  for (const char* section : {"scenario", "points"})
    if (!j.contains(section)) throw ConfigError(std::string(section) + ": missing section");
  VerifySpec spec;
  spec.base = j.at("scenario");
  if (!spec.base.is_object()) throw ConfigError("scenario: expected an object");
  if (j.contains("monte_carlo")) spec.mc = mc_settings_from_json(j.at("monte_carlo"));
  if (j.contains("analytic")) spec.analytic_cfg = analytic_config_from_json(j.at("analytic"));
  spec.points = variants_from_json(j.at("points"), "points");
  if (spec.points.empty()) throw ConfigError("points: must not be empty");
  for (const auto& pt : spec.points) {
    json s = spec.base;
    s.merge_patch(pt.overrides);
    try {
      (void)scenario_from_json(s);
    } catch (const ConfigError& e) {
      throw ConfigError("point '" + pt.label + "': " + e.what());
    }
  }
  return spec;
}

double agreement_tolerance(double mc_stderr) { return std::max(0.01, 3.0 * mc_stderr); }

VerifyReport compare_engines(const VerifySpec& spec, unsigned workers) {
  VerifyReport report;
  report.rows.resize(spec.points.size());
  parallel_for(spec.points.size(), workers, [&](std::size_t i) {
    const Variant& pt = spec.points[i];
    VerifyRow& row = report.rows[i];
    row.label = pt.label;
    try {
      json sj = spec.base;
      sj.merge_patch(pt.overrides);
      const Scenario s = scenario_from_json(sj);
      row.analytic = outage_probability(s, spec.analytic_cfg).outage_prob;
      const SimConfig sim = spec.mc.resolve(s);
      const auto est = estimate(s, sim, 1);
      row.mc = est.p_hat;
      row.mc_stderr = est.std_error;
      row.trials = est.trials;
      row.half_length = sim.half_length;
      row.tolerance = agreement_tolerance(est.std_error);
      row.wide_ci = row.tolerance > 0.01;
      row.diff = std::abs(row.analytic - row.mc);
      row.pass = row.diff <= row.tolerance;
    } catch (const std::exception& e) {
      row.error = e.what();
      row.pass = false;
    }
  });
  report.pass = std::all_of(report.rows.begin(), report.rows.end(),
                            [](const VerifyRow& r) { return r.pass; });
  return report;
}

void print_verify_report(std::ostream& out, const VerifyReport& report) {
  out << std::left << std::setw(28) << "point" << std::right << std::setw(11) << "analytic"
      << std::setw(11) << "mc" << std::setw(11) << "stderr" << std::setw(11) << "|diff|"
      << std::setw(11) << "tol" << "  result\n";
  out << std::fixed << std::setprecision(6);
  for (const auto& r : report.rows) {
    out << std::left << std::setw(28) << r.label << std::right;
    if (!r.error.empty()) {
      out << "  ERROR: " << r.error << '\n';
      continue;
    }
    out << std::setw(11) << r.analytic << std::setw(11) << r.mc << std::setw(11) << r.mc_stderr
        << std::setw(11) << r.diff << std::setw(11) << r.tolerance << "  "
        << (r.pass ? "pass" : "FAIL") << (r.wide_ci ? " (wide CI)" : "") << '\n';
  }
  out.unsetf(std::ios::floatfield);
  out << "overall: " << (report.pass ? "PASS" : "FAIL") << '\n';
}

}  // namespace xroads
