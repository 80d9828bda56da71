#include "xroads/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <thread>

#include <boost/math/distributions/normal.hpp>
#include <boost/math/tools/toms748_solve.hpp>

#include "xroads/analytic.hpp"
#include "xroads/errors.hpp"

namespace xroads {

namespace {

double inverse_path_loss(double dist2, double alpha) {
  if (alpha == 2.0) return 1.0 / dist2;
  if (alpha == 4.0) return 1.0 / (dist2 * dist2);
  return std::pow(dist2, -0.5 * alpha);
}

struct Tally {
  std::uint64_t outages = 0;
  std::uint64_t excluded = 0;
};

Tally run_trials(const Scenario& scenario, const SimConfig& sim, std::uint64_t begin,
                 std::uint64_t end) {
  Tally t;
  for (std::uint64_t i = begin; i < end; ++i) {
    const TrialRng rng(sim.master_seed, i);
    const auto interference = sample_aggregate_interference(scenario, sim, rng);
    auto signal = rng.stream(streams::kSignalFade);
    t.outages += outage_given_interference(interference.total(), scenario, signal) ? 1 : 0;
    t.excluded += interference.excluded;
  }
  return t;
}

}  // namespace

void check_config(const SimConfig& sim) {
  if (sim.trials < 1) throw DomainError("trials must be >= 1");
  if (!(sim.half_length > 0.0) || !std::isfinite(sim.half_length))
    throw DomainError("half_length must be positive");
  if (!(sim.confidence > 0.0 && sim.confidence < 1.0))
    throw DomainError("confidence must lie in (0, 1)");
}

ProportionInterval proportion_interval(std::uint64_t events, std::uint64_t trials,
                                       double confidence) {
  const double n = static_cast<double>(trials);
  const double p = static_cast<double>(events) / n;
  const double z =
      boost::math::quantile(boost::math::normal_distribution<double>(), 0.5 * (1.0 + confidence));

  ProportionInterval ci;
  if (std::min(events, trials - events) < 10) {
    const double z2n = z * z / n;
    const double centre = (p + 0.5 * z2n) / (1.0 + z2n);
    const double half = z * std::sqrt(p * (1.0 - p) / n + 0.25 * z2n / n) / (1.0 + z2n);
    ci = {centre - half, centre + half, true};
  } else {
    const double half = z * std::sqrt(p * (1.0 - p) / n);
    ci = {p - half, p + half, false};
  }
  ci.low = std::clamp(std::min(ci.low, p), 0.0, 1.0);
  ci.high = std::clamp(std::max(ci.high, p), 0.0, 1.0);
  return ci;
}

std::vector<double> sample_interferers(const Lane& lane, const Scenario& scenario,
                                       const SimConfig& sim, CounterRng& positions) {
  std::vector<double> out;
  const double lambda = scenario.intensity(lane);
  if (lambda <= 0.0) return out;
  const double rate = 2.0 * lambda;
  double t = 0.0;
  for (;;) {
    t += positions.exponential() / rate;
    if (t > sim.half_length) break;
    out.push_back(positions.coin() ? t : -t);
  }
  return out;
}

double lane_interference(const Lane& lane, std::span<const double> positions,
                         const Scenario& scenario, CounterRng& marks,
                         std::uint64_t& excluded) {
  const Point2 dest = destination_position(scenario.geometry);
  const double h = perpendicular_distance(dest, lane.axis, lane.offset);
  const double c = along_lane_coordinate(dest, lane.axis);
  const double h2 = h * h;
  const double alpha = scenario.channel.alpha;

  double sum = 0.0;
  for (double t : positions) {
    if (!(marks.uniform_open() < scenario.p)) continue;
    const double fade = marks.exponential();
    const double dt = t - c;
    const double dist2 = h2 + dt * dt;
    if (dist2 == 0.0) {
      ++excluded;
      continue;
    }
    sum += fade * inverse_path_loss(dist2, alpha);
  }
  return sum;
}

InterferenceSample sample_aggregate_interference(const Scenario& scenario, const SimConfig& sim,
                                                 const TrialRng& rng) {
  InterferenceSample out;
  const auto lanes = scenario.layout.lanes();
  std::vector<double> positions;
  for (std::size_t i = 0; i < lanes.size(); ++i) {
    const Lane& lane = lanes[i];
    if (scenario.intensity(lane) <= 0.0 || scenario.p <= 0.0) continue;
    auto pos_stream = rng.stream(streams::lane_positions(i));
    auto mark_stream = rng.stream(streams::lane_marks(i));
    positions = sample_interferers(lane, scenario, sim, pos_stream);
    const double value = lane_interference(lane, positions, scenario, mark_stream, out.excluded);
    (lane.axis == Axis::X ? out.x : out.y) += value;
  }
  return out;
}

bool outage_given_interference(double interference, const Scenario& scenario,
                               CounterRng& signal) {
  if (interference <= 0.0) return false;
  const auto& ch = scenario.channel;
  // Gamma(m, mu/m) with integer m is a scaled sum of m unit exponentials.
  double gain = 0.0;
  for (int i = 0; i < ch.m; ++i) gain += signal.exponential();
  gain *= ch.mu / ch.m;
  return gain * scenario.link.path_loss(ch.alpha) < scenario.theta_threshold * interference;
}

bool sample_outage_event(const Scenario& scenario, const SimConfig& sim, const TrialRng& rng) {
  const auto interference = sample_aggregate_interference(scenario, sim, rng);
  auto signal = rng.stream(streams::kSignalFade);
  return outage_given_interference(interference.total(), scenario, signal);
}

OutageEstimate estimate(const Scenario& scenario, const SimConfig& sim, unsigned workers) {
  check_config(sim);
  workers = std::max(1u, workers);
  const std::uint64_t n = sim.trials;
  workers = static_cast<unsigned>(std::min<std::uint64_t>(workers, n));

  std::vector<Tally> tallies(workers);
  if (workers == 1) {
    tallies[0] = run_trials(scenario, sim, 0, n);
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
      const std::uint64_t begin = n * w / workers;
      const std::uint64_t end = n * (w + 1) / workers;
      pool.emplace_back([&, w, begin, end] { tallies[w] = run_trials(scenario, sim, begin, end); });
    }
  }

  Tally total;
  for (const auto& t : tallies) {
    total.outages += t.outages;
    total.excluded += t.excluded;
  }

  OutageEstimate est;
  est.trials = n;
  est.seed = sim.master_seed;
  est.p_hat = static_cast<double>(total.outages) / static_cast<double>(n);
  est.std_error = std::sqrt(est.p_hat * (1.0 - est.p_hat) / static_cast<double>(n));
  const auto ci = proportion_interval(total.outages, n, sim.confidence);
  est.ci_low = ci.low;
  est.ci_high = ci.high;
  est.wilson_interval = ci.wilson;
  est.throughput = (1.0 - est.p_hat) * std::log2(1.0 + scenario.theta_threshold);
  est.excluded_interferers = total.excluded;
  return est;
}

double truncation_bias_bound(const Scenario& scenario, double half_length) {
  const double alpha = scenario.channel.alpha;
  const double G = laplace_argument(scenario);
  const Point2 dest = destination_position(scenario.geometry);
  double bound = 0.0;
  for (const auto& lane : scenario.layout.lanes()) {
    const double pl = scenario.p * scenario.intensity(lane);
    if (pl <= 0.0) continue;
    const double gap = half_length - std::abs(along_lane_coordinate(dest, lane.axis));
    if (gap <= 0.0) return std::numeric_limits<double>::infinity();
    bound += 2.0 * pl * G * std::pow(gap, 1.0 - alpha) / (alpha - 1.0);
  }
  return bound;
}

double half_length_for_bias(const Scenario& scenario, double max_bias) {
  if (!(max_bias > 0.0)) throw DomainError("max_bias must be positive");
  const double alpha = scenario.channel.alpha;
  const double G = laplace_argument(scenario);
  const Point2 dest = destination_position(scenario.geometry);

  const auto lanes = scenario.layout.lanes();
  std::size_t active = 0;
  for (const auto& lane : lanes)
    if (scenario.intensity(lane) > 0.0 && scenario.p > 0.0) ++active;
  if (active == 0) return 1.0;

  // Splitting the budget evenly gives a window that is always large enough;
  // one lane carrying the whole budget gives one that is never too large.
  const double per_lane = max_bias / static_cast<double>(active);
  double lo = 0.0, hi = 0.0;
  for (const auto& lane : lanes) {
    const double pl = scenario.p * scenario.intensity(lane);
    if (pl <= 0.0) continue;
    const double c = std::abs(along_lane_coordinate(dest, lane.axis));
    auto reach = [&](double budget) {
      return std::pow(2.0 * pl * G / ((alpha - 1.0) * budget), 1.0 / (alpha - 1.0));
    };
    lo = std::max(lo, c + reach(max_bias));
    hi = std::max(hi, c + reach(per_lane));
  }
  auto excess = [&](double h) { return truncation_bias_bound(scenario, h) - max_bias; };
  if (hi - lo <= 1e-12 * hi || excess(hi) >= 0.0) return hi;
  if (excess(lo) <= 0.0) return lo;
  boost::uintmax_t iters = 100;
  const auto [a, b] = boost::math::tools::toms748_solve(
      excess, lo, hi, boost::math::tools::eps_tolerance<double>(48), iters);
  return b;
}

}  // namespace xroads
