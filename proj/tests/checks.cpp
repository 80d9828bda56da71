#include "checks.hpp"

#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <vector>

#include "support.hpp"
#include "xroads/analytic.hpp"
#include "xroads/montecarlo.hpp"

namespace xroads::checks {

namespace {

using test::deg;
using test::make_scenario;
using test::rel_err;

// Tracks the largest error seen and the case that produced it.
struct Worst {
  double value = 0.0;
  std::string where;
  int failures = 0;

  void see(double err, double limit, const std::string& label) {
    if (where.empty() || err > value) {
      value = err;
      where = label;
    }
    if (!(err <= limit)) ++failures;
  }

  Outcome outcome(const char* what, int cases) const {
    std::ostringstream os;
    os << cases << " cases, " << failures << " failed, worst " << what << " " << value;
    if (!where.empty()) os << " at " << where;
    return {failures == 0, os.str()};
  }
};

std::string label(const char* fmt, double a, double b, double c = 0, double d = 0) {
  char buf[160];
  std::snprintf(buf, sizeof buf, fmt, a, b, c, d);
  return buf;
}

// A lane at perpendicular distance h from D, with D at its foot point.
Scenario lane_scenario(double alpha, double h, double p, double lambda) {
  RawScenario raw;
  raw.alpha = alpha;
  raw.m = 1;
  raw.d = h;
  raw.theta = std::numbers::pi / 2;
  raw.lambda_x = lambda;
  raw.lambda_y = 0;
  raw.p = p;
  return validate_scenario(raw);
}

constexpr Lane kLaneX{Axis::X, 0.0};

double log_uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::exp(std::uniform_real_distribution<double>(std::log(lo), std::log(hi))(rng));
}

Outcome closed_form_check(double alpha, int draws, std::uint64_t seed,
                          double (*closed)(double, const Lane&, const Scenario&)) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> h_dist(0.0, 200.0);
  std::uniform_real_distribution<double> p_dist(0.05, 1.0);
  Worst worst;
  for (int i = 0; i < draws; ++i) {
    const double s = log_uniform(rng, 1e-2, 1e7);
    const double h = h_dist(rng);
    const double p = p_dist(rng);
    const double lambda = log_uniform(rng, 1e-4, 1e-1);
    const Scenario sc = lane_scenario(alpha, h, p, lambda);
    const double err = rel_err(closed(s, kLaneX, sc), laplace_numeric(s, kLaneX, sc));
    worst.see(err, 1e-8, label("s=%.4g h=%.4g p=%.3g lambda=%.3g", s, h, p, lambda));
  }
  return worst.outcome("rel err", draws);
}

double fd_derivative(int order, double s, double step, const std::function<double(double)>& f) {
  static constexpr double d1[] = {1.0 / 280, -4.0 / 105, 1.0 / 5, -4.0 / 5, 0.0,
                                  4.0 / 5,   -1.0 / 5,   4.0 / 105, -1.0 / 280};
  static constexpr double d2[] = {-1.0 / 560, 8.0 / 315, -1.0 / 5, 8.0 / 5, -205.0 / 72,
                                  8.0 / 5,    -1.0 / 5,  8.0 / 315, -1.0 / 560};
  const double* w = order == 1 ? d1 : d2;
  double acc = 0.0;
  for (int j = -4; j <= 4; ++j)
    if (w[j + 4] != 0.0) acc += w[j + 4] * f(s + j * step);
  return acc / std::pow(step, order);
}

std::vector<Scenario> reference_scenarios() {
  std::vector<Scenario> out;
  for (const auto& ch : {ChannelParams::los(), ChannelParams::nlos(), ChannelParams{3.0, 2, 1.5}})
    for (double d : {0.0, 50.0, 300.0})
      for (double theta : {0.0, deg(30), deg(90)})
        out.push_back(make_scenario(ch, d, theta, 0.01, 0.005));
  return out;
}

std::string describe(const Scenario& s) {
  std::ostringstream os;
  os << "alpha=" << s.channel.alpha << " m=" << s.channel.m << " d=" << s.geometry.d
     << " theta=" << s.geometry.theta << " lx=" << s.layout.lambda_x
     << " ly=" << s.layout.lambda_y << " p=" << s.p << " Th=" << s.theta_threshold
     << " r=" << s.link.r;
  return os.str();
}

bool same_estimate(const OutageEstimate& a, const OutageEstimate& b) {
  return a.p_hat == b.p_hat && a.std_error == b.std_error && a.ci_low == b.ci_low &&
         a.ci_high == b.ci_high && a.trials == b.trials &&
         a.excluded_interferers == b.excluded_interferers;
}

}  // namespace

Outcome closed_form_alpha4(int draws) {
  return closed_form_check(4.0, draws, 0xA4, &laplace_closed_alpha4);
}

Outcome closed_form_alpha2(int draws) {
  return closed_form_check(2.0, draws, 0xA2, &laplace_closed_alpha2);
}

Outcome derivative_finite_difference(int points) {
  std::mt19937_64 rng(50);
  std::uniform_real_distribution<double> h_dist(0.0, 50.0);
  const double alphas[] = {2.0, 3.0, 4.0};
  LaplaceEvalConfig tight;
  tight.rel_tol = 1e-13;
  Worst worst;
  for (int i = 0; i < points; ++i) {
    const double alpha = alphas[i % 3];
    const double h = h_dist(rng);
    const double s = log_uniform(rng, 0.1, 100.0) * std::pow(std::max(h, 1.0), alpha);
    const double lambda = log_uniform(rng, 2e-3, 5e-2);
    const Scenario sc = lane_scenario(alpha, h, 0.5, lambda);
    const auto f = [&](double x) { return laplace_numeric(x, kLaneX, sc, tight); };
    const double step = 0.05 * s;
    for (int n = 1; n <= 2; ++n) {
      const double bell = laplace_derivative(n, s, kLaneX, sc);
      const double fd = fd_derivative(n, s, step, f);
      worst.see(rel_err(bell, fd), 1e-4,
                label("n=%.0f alpha=%.0f h=%.4g s=%.4g", n, alpha, h, s));
    }
  }
  return worst.outcome("rel err", 2 * points);
}

Outcome complete_monotonicity(int points) {
  const int side = static_cast<int>(std::lround(std::sqrt(points)));
  int failures = 0;
  int cases = 0;
  std::string first;
  for (double alpha : {2.0, 3.0, 4.0})
    for (int i = 0; i < side; ++i)
      for (int j = 0; j < side; ++j) {
        const double s = std::pow(10.0, -2.0 + 8.0 * i / (side - 1));
        const double h = 100.0 * j / (side - 1);
        const Scenario sc = lane_scenario(alpha, h, 0.5, 0.01);
        for (int n = 0; n <= 4; ++n) {
          ++cases;
          const double v = laplace_derivative(n, s, kLaneX, sc);
          if (!((n % 2 == 0 ? v : -v) >= 0.0)) {
            if (failures++ == 0) first = label("n=%.0f alpha=%.0f s=%.4g h=%.4g", n, alpha, s, h);
          }
        }
      }
  return {failures == 0, std::to_string(cases) + " cases, " + std::to_string(failures) +
                             " sign violations" + (first.empty() ? "" : " first at " + first)};
}

Outcome laplace_basic_properties() {
  int failures = 0;
  int cases = 0;
  std::string first;
  auto fail = [&](const std::string& what) {
    if (failures++ == 0) first = what;
  };
  for (double alpha : {2.0, 3.0, 4.0})
    for (double h : {0.0, 3.5, 40.0, 400.0}) {
      const Scenario sc = lane_scenario(alpha, h, 0.7, 0.02);
      ++cases;
      if (laplace_numeric(0.0, kLaneX, sc) != 1.0) fail(label("L(0) alpha=%.0f h=%.4g", alpha, h));
      double prev = 1.0;
      for (int i = 0; i <= 40; ++i) {
        const double s = std::pow(10.0, -3.0 + 0.25 * i);
        const double L = laplace_numeric(s, kLaneX, sc);
        ++cases;
        if (!(L > 0.0 && L <= 1.0)) fail(label("range alpha=%.0f h=%.4g s=%.4g", alpha, h, s));
        if (!(L <= prev)) fail(label("monotone alpha=%.0f h=%.4g s=%.4g", alpha, h, s));
        prev = L;
      }
      Scenario empty = sc;
      empty.layout.lambda_x = 0.0;
      Scenario silent = sc;
      silent.p = 0.0;
      cases += 2;
      if (laplace_numeric(1e4, kLaneX, empty) != 1.0) fail(label("lambda=0 alpha=%.0f", alpha, 0));
      if (laplace_numeric(1e4, kLaneX, silent) != 1.0) fail(label("p=0 alpha=%.0f", alpha, 0));
    }
  return {failures == 0, std::to_string(cases) + " cases, " + std::to_string(failures) +
                             " failed" + (first.empty() ? "" : ", first " + first)};
}

Outcome m1_product_reduction() {
  Worst worst;
  int cases = 0;
  for (double alpha : {2.0, 3.0, 4.0})
    for (double d : {0.0, 25.0, 400.0})
      for (double theta : {0.0, deg(20), deg(60)}) {
        const Scenario sc = make_scenario({alpha, 1, 1.0}, d, theta, 0.01, 0.004, 0.6, 2.0);
        const double G = laplace_argument(sc);
        const double product = laplace_numeric(G, {Axis::X, 0.0}, sc) *
                               laplace_numeric(G, {Axis::Y, 0.0}, sc);
        worst.see(rel_err(success_probability(sc), product), 1e-12, describe(sc));
        ++cases;
      }
  return worst.outcome("rel err", cases);
}

Outcome road_swap_symmetry() {
  Worst worst;
  int cases = 0;
  for (const auto& ch : {ChannelParams::los(), ChannelParams::nlos(), ChannelParams{3.0, 2, 1.0}})
    for (double t : {deg(45), deg(60), deg(80), deg(90)}) {
      Scenario a = make_scenario(ch, 40.0, t, 0.01, 0.02);
      a.layout.lanes_x = {0.0, 3.5};
      a.layout.lanes_y = {0.0};
      Scenario b = make_scenario(ch, 40.0, std::numbers::pi / 2 - t, 0.02, 0.01);
      b.layout.lanes_x = {0.0};
      b.layout.lanes_y = {0.0, 3.5};
      const double oa = outage_probability(a).outage_prob;
      const double ob = outage_probability(b).outage_prob;
      worst.see(std::abs(oa - ob), 1e-12, describe(a));
      // Equal intensities: the pure angle reflection is a symmetry too.
      const Scenario c = make_scenario(ch, 40.0, t, 0.01, 0.01);
      const Scenario e = make_scenario(ch, 40.0, std::numbers::pi / 2 - t, 0.01, 0.01);
      worst.see(std::abs(outage_probability(c).outage_prob - outage_probability(e).outage_prob),
                1e-12, describe(c));
      cases += 2;
    }
  return worst.outcome("abs diff", cases);
}

Outcome multilane_additivity() {
  Worst worst;
  int cases = 0;
  for (const auto& ch : {ChannelParams::los(), ChannelParams::nlos(), ChannelParams{3.0, 4, 1.0}})
    for (double d : {0.0, 60.0})
      for (double theta : {0.0, deg(35)}) {
        Scenario two = make_scenario(ch, d, theta, 0.006, 0.009);
        two.layout.lanes_x = {0.0, 0.0};
        two.layout.lanes_y = {0.0, 0.0};
        const Scenario one = make_scenario(ch, d, theta, 0.012, 0.018);
        worst.see(rel_err(success_probability(two), success_probability(one)), 1e-10,
                  describe(one));
        ++cases;
      }
  return worst.outcome("rel err", cases);
}

Outcome outage_monotonicity() {
  struct Axis5 {
    const char* name;
    std::function<void(Scenario&, double)> set;
    double values[5];
  };
  const Axis5 axes[] = {
      {"lambda_x", [](Scenario& s, double v) { s.layout.lambda_x = v; }, {0, 0.002, 0.005, 0.01, 0.03}},
      {"lambda_y", [](Scenario& s, double v) { s.layout.lambda_y = v; }, {0, 0.002, 0.005, 0.01, 0.03}},
      {"p", [](Scenario& s, double v) { s.p = v; }, {0.05, 0.2, 0.4, 0.7, 1.0}},
      {"Theta", [](Scenario& s, double v) { s.theta_threshold = v; }, {0.1, 0.5, 1.0, 3.0, 10.0}},
      {"r", [](Scenario& s, double v) { s.link.r = v; }, {5, 10, 20, 40, 80}},
  };
  int failures = 0;
  int cases = 0;
  std::string first;
  for (const auto& ch : {ChannelParams::los(), ChannelParams::nlos()})
    for (const auto& ax : axes) {
      double prev = -1.0;
      for (double v : ax.values) {
        Scenario s = make_scenario(ch, 50.0, deg(30), 0.01, 0.01);
        ax.set(s, v);
        const double o = outage_probability(s).outage_prob;
        ++cases;
        if (!(o >= prev) && failures++ == 0)
          first = std::string(ax.name) + " alpha=" + std::to_string(ch.alpha) + " at " +
                  std::to_string(v);
        prev = o;
      }
    }
  return {failures == 0, std::to_string(cases) + " points on 10 axes, " +
                             std::to_string(failures) + " decreases" +
                             (first.empty() ? "" : ", first " + first)};
}

Outcome highway_dominance() {
  Worst worst;
  int cases = 0;
  for (const auto& ch : {ChannelParams::los(), ChannelParams::nlos()})
    for (double d : {0.0, 100.0, 1000.0})
      for (double theta : {0.0, deg(45), deg(90)}) {
        const Scenario inter = make_scenario(ch, d, theta, 0.01, 0.01);
        Scenario zero_y = inter;
        zero_y.layout.lambda_y = 0.0;
        const double oi = outage_probability(inter).outage_prob;
        // Both spellings of the highway layout.
        for (const Scenario& hw : {zero_y, test::with_highway(inter)}) {
          const double excess = outage_probability(hw).outage_prob - oi;
          worst.see(std::max(excess, 0.0), 0.0, describe(inter));
          ++cases;
        }
      }
  return worst.outcome("excess", cases);
}

Outcome far_field_limit() {
  Worst worst;
  int cases = 0;
  for (const auto& ch : {ChannelParams::los(), ChannelParams::nlos()})
    for (double lambda : {0.005, 0.01, 0.02}) {
      const Scenario inter = make_scenario(ch, 1e4, 0.0, lambda, lambda);
      const double gap = outage_probability(inter).outage_prob -
                         outage_probability(test::with_highway(inter)).outage_prob;
      worst.see(std::abs(gap), 1e-3, describe(inter));
      ++cases;
    }
  return worst.outcome("gap", cases);
}

Outcome outage_bookkeeping() {
  int failures = 0;
  int cases = 0;
  for (const Scenario& s : reference_scenarios()) {
    const auto r = outage_probability(s);
    ++cases;
    if (r.outage_prob != 1.0 - r.success_prob) ++failures;
    if (r.throughput != r.success_prob * std::log2(1.0 + s.theta_threshold)) ++failures;
    if (!(r.outage_prob >= 0.0 && r.outage_prob <= 1.0)) ++failures;
    if (static_cast<int>(r.per_term.size()) != s.channel.m) ++failures;
    Scenario empty = s;
    empty.layout.lambda_x = empty.layout.lambda_y = 0.0;
    const auto e = outage_probability(empty);
    if (e.outage_prob != 0.0 || e.throughput != std::log2(1.0 + s.theta_threshold)) ++failures;
    Scenario huge = s;
    huge.theta_threshold = 1e9;
    if (!(outage_probability(huge).outage_prob >= 1.0 - 1e-3)) ++failures;
  }
  return {failures == 0, std::to_string(cases) + " scenarios, " + std::to_string(failures) +
                             " violations"};
}

Outcome mc_determinism() {
  int failures = 0;
  int cases = 0;
  for (const auto& ch : {ChannelParams::los(), ChannelParams::nlos()}) {
    const Scenario s = make_scenario(ch, 30.0, deg(20), 0.01, 0.01);
    SimConfig sim;
    sim.trials = 20'000;
    sim.master_seed = 7;
    const auto ref = estimate(s, sim, 1);
    for (unsigned w : {2u, 3u, 5u}) {
      ++cases;
      if (!same_estimate(ref, estimate(s, sim, w))) ++failures;
    }
  }
  return {failures == 0, std::to_string(cases) + " worker counts compared, " +
                             std::to_string(failures) + " mismatches"};
}

Outcome mc_empty_field() {
  int failures = 0;
  SimConfig sim;
  sim.trials = 20'000;
  for (const auto& ch : {ChannelParams::los(), ChannelParams::nlos()}) {
    const Scenario none = make_scenario(ch, 0.0, 0.0, 0.0, 0.0);
    const Scenario silent = make_scenario(ch, 0.0, 0.0, 0.05, 0.05, 0.0);
    for (const Scenario& s : {none, silent}) {
      const auto e = estimate(s, sim);
      if (e.p_hat != 0.0 || e.ci_low != 0.0 || !(e.ci_high > 0.0)) ++failures;
      const auto I = sample_aggregate_interference(s, sim, TrialRng(3, 9));
      if (I.x != 0.0 || I.y != 0.0) ++failures;
    }
  }
  return {failures == 0, std::to_string(failures) + " violations over 4 empty-field scenarios"};
}

Outcome mc_thinning_equivalence() {
  Worst worst;
  int cases = 0;
  for (const auto& ch : {ChannelParams::los(), ChannelParams::nlos()}) {
    const double lambda = 0.02;
    const double p = 0.4;
    const Scenario thinned = make_scenario(ch, 0.0, 0.0, lambda, lambda, p);
    const Scenario direct = make_scenario(ch, 0.0, 0.0, p * lambda, p * lambda, 1.0);
    SimConfig sim;
    sim.trials = 50'000;
    sim.half_length = 1000.0;
    sim.master_seed = 101;
    const auto a = estimate(thinned, sim);
    sim.master_seed = 202;
    const auto b = estimate(direct, sim);
    const double pooled = 0.5 * (a.p_hat + b.p_hat);
    const double se = std::sqrt(pooled * (1 - pooled) * 2.0 / static_cast<double>(sim.trials));
    const double z = std::abs(a.p_hat - b.p_hat) / se;
    worst.see(z, 2.5758, describe(thinned));  // two-sided 1% critical value
    ++cases;
  }
  return worst.outcome("|z|", cases);
}

Outcome mc_truncation_sanity() {
  Worst worst;
  int cases = 0;
  for (double d : {0.0, 200.0})
    for (double lambda : {0.005, 0.02}) {
      const Scenario s = make_scenario(ChannelParams::nlos(), d, 0.0, lambda, lambda);
      SimConfig sim;
      sim.trials = 50'000;
      sim.master_seed = 5;
      sim.half_length = 1000.0;
      const auto near = estimate(s, sim);
      sim.half_length = 4000.0;
      const auto far = estimate(s, sim);
      const double se = std::max(near.std_error, far.std_error);
      worst.see(std::abs(near.p_hat - far.p_hat) / se, 2.0, describe(s));
      ++cases;
    }
  return worst.outcome("|diff|/stderr", cases);
}

}  // namespace xroads::checks
