#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "xroads/model.hpp"
#include "xroads/rng.hpp"

namespace xroads {

struct SimConfig {
  std::uint64_t trials = 50'000;
  double half_length = 1000.0;  // road half-extent, meters
  std::uint64_t master_seed = 0;
  double confidence = 0.95;
};

/// Throws DomainError unless trials >= 1, half_length > 0 and
/// confidence in (0, 1).
void check_config(const SimConfig& sim);

struct ProportionInterval {
  double low = 0.0;
  double high = 1.0;
  bool wilson = false;
};

/// Normal-approximation interval for `events` out of `trials`, clipped to
/// [0, 1]; the Wilson score interval is used instead when fewer than 10
/// events or non-events were observed.
ProportionInterval proportion_interval(std::uint64_t events, std::uint64_t trials,
                                       double confidence);

struct OutageEstimate {
  double p_hat = 0.0;
  double std_error = 0.0;  // sqrt(p_hat (1 - p_hat) / trials)
  double ci_low = 0.0;
  double ci_high = 0.0;
  std::uint64_t trials = 0;
  std::uint64_t seed = 0;
  double throughput = 0.0;  // (1 - p_hat) log2(1 + Theta)
  bool wilson_interval = false;
  /// Interferers that landed exactly on the destination and were dropped.
  std::uint64_t excluded_interferers = 0;
};

struct InterferenceSample {
  double x = 0.0;  // aggregate over all lanes parallel to X
  double y = 0.0;
  std::uint64_t excluded = 0;

  double total() const noexcept { return x + y; }
};

namespace streams {
inline constexpr std::uint32_t kSignalFade = 0;
inline constexpr std::uint32_t lane_positions(std::size_t lane_index) {
  return static_cast<std::uint32_t>(1 + 2 * lane_index);
}
inline constexpr std::uint32_t lane_marks(std::size_t lane_index) {
  return static_cast<std::uint32_t>(2 + 2 * lane_index);
}
}  // namespace streams

/// Along-lane coordinates of one realization of the lane's Poisson field on
/// [-half_length, half_length].
///
/// Points are generated outward from the intersection with exponential
/// spacings of rate 2 lambda in |t| and a fair sign, which has the same law
/// as a Poisson(2 lambda half_length) count of uniform points. Under a fixed
/// stream the realization for a shorter road is a prefix of the one for a
/// longer road.
std::vector<double> sample_interferers(const Lane& lane, const Scenario& scenario,
                                       const SimConfig& sim, CounterRng& positions);

/// Aloha-thinned, Rayleigh-faded interference from `positions` on `lane`.
/// Marks (access decision, then fade if transmitting) are drawn from `marks`
/// in the order of `positions`. Interferers exactly at the destination are
/// skipped and counted in `excluded`.
double lane_interference(const Lane& lane, std::span<const double> positions,
                         const Scenario& scenario, CounterRng& marks,
                         std::uint64_t& excluded);

InterferenceSample sample_aggregate_interference(const Scenario& scenario, const SimConfig& sim,
                                                 const TrialRng& rng);

/// Draws the Nakagami power gain |h_SD|^2 ~ Gamma(m, mu/m) and reports
/// SIR < Theta. Zero interference is never an outage.
bool outage_given_interference(double interference, const Scenario& scenario,
                               CounterRng& signal);

bool sample_outage_event(const Scenario& scenario, const SimConfig& sim, const TrialRng& rng);

/// Outage estimate over `sim.trials` realizations split across `workers`
/// threads. Trial i always uses TrialRng(master_seed, i), so the result does
/// not depend on the worker count.
OutageEstimate estimate(const Scenario& scenario, const SimConfig& sim, unsigned workers = 1);

/// Upper bound on |outage(infinite roads) - outage(roads cut at
/// +-half_length)|; infinity when the destination's foot point on some active
/// lane lies outside the simulated segment.
double truncation_bias_bound(const Scenario& scenario, double half_length);

/// Road half-length beyond which the interference omitted by truncating the
/// infinite roads shifts the outage probability by at most `max_bias`.
/// Bound: for a lane whose foot point is at c, the omitted part changes
/// P(success) by at most G E[I_out] <= 2 p lambda G (H - |c|)^(1-alpha) / (alpha - 1).
double half_length_for_bias(const Scenario& scenario, double max_bias);

}  // namespace xroads
