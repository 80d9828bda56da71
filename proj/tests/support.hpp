#pragma once

#include <cmath>
#include <numbers>

#include "xroads/model.hpp"

namespace xroads::test {

inline double deg(double degrees) { return std::numbers::pi / 2 * (degrees / 90.0); }

inline double rel_err(double got, double want) {
  if (want == 0.0) return std::abs(got);
  return std::abs(got - want) / std::abs(want);
}

// Intersection scenario with one lane per road.
inline Scenario make_scenario(ChannelParams ch, double d, double theta, double lambda_x,
                              double lambda_y, double p = 0.5, double threshold = 1.0,
                              double r = 20.0) {
  RawScenario raw;
  raw.alpha = ch.alpha;
  raw.m = ch.m;
  raw.mu = ch.mu;
  raw.d = d;
  raw.theta = theta;
  raw.r = r;
  raw.lambda_x = lambda_x;
  raw.lambda_y = lambda_y;
  raw.p = p;
  raw.theta_threshold = threshold;
  return validate_scenario(raw);
}

inline Scenario with_highway(Scenario s) {
  s.layout.lanes_y.clear();
  return s;
}

}  // namespace xroads::test
