// xroads: outage and throughput near a road intersection, analytic and
// Monte-Carlo.
//
//   xroads point   --config scenario.json [--engine both]
//   xroads sweep   --config sweep.json --out rows.csv
//   xroads verify  [--config verify.json]
//   xroads preset  fig2|fig3|fig4 [--out fig2.csv]
//
// Exit codes: 0 ok, 2 config error, 3 numeric error (or a failed sweep
// row), 4 verification failure.

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>

#include "CLI11.hpp"

#include "xroads/config.hpp"
#include "xroads/errors.hpp"
#include "xroads/presets.hpp"
#include "xroads/sweep.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitNumeric = 3;
constexpr int kExitVerify = 4;

struct Options {
  std::string config;
  std::string out;
  std::optional<std::uint64_t> seed;
  std::optional<std::uint64_t> trials;
  unsigned workers = 0;
  std::optional<std::string> engine;
  std::string preset;
};

unsigned worker_count(const Options& o) {
  if (o.workers > 0) return o.workers;
  return std::max(1u, std::thread::hardware_concurrency());
}

void apply_overrides(const Options& o, xroads::MonteCarloSettings& mc) {
  if (o.seed) mc.seed = *o.seed;
  if (o.trials) {
    if (*o.trials < 1) throw xroads::ConfigError("--trials: must be >= 1");
    mc.trials = *o.trials;
  }
}

std::filesystem::path metadata_path(const std::string& csv) {
  std::filesystem::path p(csv);
  p.replace_extension(".meta.json");
  return p;
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw xroads::ConfigError(path.string() + ": cannot open for writing");
  out << text;
  if (!out) throw xroads::ConfigError(path.string() + ": write failed");
}

std::string fixed6(double v) {
  std::ostringstream s;
  s << std::fixed << std::setprecision(6) << v;
  return s.str();
}

int run_point(const Options& o, const std::string& command) {
  if (o.config.empty()) throw xroads::ConfigError("--config: required for point");
  auto pc = xroads::point_config_from_json(xroads::load_json_file(o.config));
  apply_overrides(o, pc.mc);
  if (o.engine) pc.engine = xroads::parse_engine(*o.engine);
  const auto& s = pc.scenario;

  xroads::SweepRow row;
  row.variant = "point";
  row.axis = "none";

  std::cout << "scenario     alpha=" << s.channel.alpha << " m=" << s.channel.m
            << " mu=" << s.channel.mu << " d=" << s.geometry.d << " r=" << s.link.r
            << " lambda_x=" << s.layout.lambda_x << " lambda_y=" << s.layout.lambda_y
            << " p=" << s.p << " threshold=" << s.theta_threshold << '\n';

  if (xroads::uses_analytic(pc.engine)) {
    const auto a = xroads::outage_probability(s, pc.analytic);
    row.outage_analytic = a.outage_prob;
    row.throughput_analytic = a.throughput;
    std::cout << "analytic     outage " << fixed6(a.outage_prob) << "  throughput "
              << fixed6(a.throughput) << " bit/s/Hz\n";
  }
  if (xroads::uses_montecarlo(pc.engine)) {
    const auto sim = pc.mc.resolve(s);
    const auto est = xroads::estimate(s, sim, worker_count(o));
    row.outage_mc = est.p_hat;
    row.mc_stderr = est.std_error;
    row.ci_low = est.ci_low;
    row.ci_high = est.ci_high;
    row.trials = est.trials;
    std::cout << "monte-carlo  outage " << fixed6(est.p_hat) << "  throughput "
              << fixed6(est.throughput) << " bit/s/Hz\n"
              << "             stderr " << fixed6(est.std_error) << "  "
              << std::lround(100 * sim.confidence) << "% CI [" << fixed6(est.ci_low) << ", "
              << fixed6(est.ci_high) << "]" << (est.wilson_interval ? " (Wilson)" : "") << '\n'
              << "             trials " << est.trials << "  seed " << est.seed << "  half_length "
              << sim.half_length << " m  truncation bias <= "
              << xroads::truncation_bias_bound(s, sim.half_length) << '\n';
    if (est.excluded_interferers > 0)
      std::cerr << "warning: " << est.excluded_interferers
                << " interferer(s) fell exactly on the destination and were excluded\n";
  }
  if (row.outage_analytic && row.outage_mc) {
    const double tol = xroads::agreement_tolerance(*row.mc_stderr);
    std::cout << "agreement    |diff| " << fixed6(std::abs(*row.outage_analytic - *row.outage_mc))
              << "  tolerance " << fixed6(tol) << '\n';
  }

  if (!o.out.empty()) {
    std::ostringstream csv;
    xroads::write_csv(csv, {row});
    write_text_file(o.out, csv.str());
    (void)command;
  }
  return kExitOk;
}

int run_sweep_spec(xroads::SweepSpec spec, const Options& o, const std::string& command) {
  apply_overrides(o, spec.mc);
  if (o.engine) {
    const auto e = xroads::parse_engine(*o.engine);
    spec.analytic = xroads::uses_analytic(e);
    spec.montecarlo = xroads::uses_montecarlo(e);
  }
  const auto rows = xroads::run_sweep(spec, worker_count(o));

  std::ostringstream csv;
  xroads::write_csv(csv, rows);
  if (o.out.empty()) {
    std::cout << csv.str();
  } else {
    write_text_file(o.out, csv.str());
    write_text_file(metadata_path(o.out),
                    xroads::sweep_metadata(spec, rows, command).dump(2) + "\n");
    std::cerr << "wrote " << rows.size() << " rows to " << o.out << '\n';
  }

  int failed = 0;
  for (const auto& r : rows) {
    if (r.error.empty()) continue;
    ++failed;
    std::cerr << "error: variant '" << r.variant << "', " << r.axis << "="
              << xroads::format_double(r.value) << ": " << r.error << '\n';
  }
  return failed > 0 ? kExitNumeric : kExitOk;
}

int run_verify(const Options& o) {
  const xroads::json j = o.config.empty()
                             ? xroads::json::parse(*xroads::presets::find("verify"))
                             : xroads::load_json_file(o.config);
  auto spec = xroads::verify_spec_from_json(j);
  apply_overrides(o, spec.mc);
  const auto report = xroads::compare_engines(spec, worker_count(o));
  xroads::print_verify_report(std::cout, report);
  for (const auto& r : report.rows)
    if (!r.error.empty()) return kExitNumeric;
  return report.pass ? kExitOk : kExitVerify;
}

std::string join_args(int argc, char** argv) {
  std::string out = "xroads";
  for (int i = 1; i < argc; ++i) out += std::string(" ") + argv[i];
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Outage probability and throughput of a link near a road intersection"};
  app.require_subcommand(1);
  app.set_version_flag("--version", XROADS_VERSION);

  Options o;
  auto add_common = [&o](CLI::App* sub, bool with_out, bool with_engine) {
    sub->add_option("--seed", o.seed, "Master seed of the Monte-Carlo streams");
    sub->add_option("--trials", o.trials, "Monte-Carlo realizations per point");
    sub->add_option("--workers", o.workers, "Worker threads (default: all cores)");
    if (with_out) sub->add_option("--out", o.out, "CSV output path (default: stdout)");
    if (with_engine)
      sub->add_option("--engine", o.engine, "analytic, mc or both")
          ->check(CLI::IsMember({"analytic", "mc", "montecarlo", "both"}));
  };

  auto* point = app.add_subcommand("point", "Evaluate one scenario");
  point->add_option("--config", o.config, "Scenario config (JSON)")->required();
  add_common(point, true, true);

  auto* sweep = app.add_subcommand("sweep", "Run a parameter sweep and write CSV rows");
  sweep->add_option("--config", o.config, "Sweep config (JSON)")->required();
  add_common(sweep, true, true);

  auto* verify = app.add_subcommand("verify", "Cross-check the analytic and Monte-Carlo engines");
  verify->add_option("--config", o.config, "Verification grid (default: built-in 12 points)");
  add_common(verify, false, false);

  auto* preset = app.add_subcommand("preset", "Run a built-in figure sweep");
  preset->add_option("name", o.preset, "fig2, fig3 or fig4")
      ->required()
      ->check(CLI::IsMember({"fig2", "fig3", "fig4"}));
  add_common(preset, true, true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  const std::string command = join_args(argc, argv);
  try {
    if (*point) return run_point(o, command);
    if (*sweep)
      return run_sweep_spec(xroads::sweep_spec_from_json(xroads::load_json_file(o.config)), o,
                            command);
    if (*verify) return run_verify(o);
    if (*preset)
      return run_sweep_spec(
          xroads::sweep_spec_from_json(xroads::json::parse(*xroads::presets::find(o.preset))), o,
          command);
  } catch (const xroads::ValidationError& e) {
    for (const auto& issue : e.issues()) std::cerr << "config error: " << issue << '\n';
    return kExitConfig;
  } catch (const xroads::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const xroads::NumericError& e) {
    std::cerr << "numeric error: " << e.what() << " (achieved tolerance " << e.achieved_tolerance()
              << ")\n";
    return kExitNumeric;
  } catch (const xroads::Error& e) {
    std::cerr << "numeric error: " << e.what() << '\n';
    return kExitNumeric;
  } catch (const xroads::json::exception& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  }
  return kExitOk;
}
