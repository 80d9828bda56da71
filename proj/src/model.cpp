#include "xroads/model.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <string>

#include "xroads/errors.hpp"

namespace xroads {

namespace {

std::string join_issues(const std::vector<std::string>& issues) {
  std::string out = "invalid scenario:";
  for (const auto& issue : issues) {
    out += "\n  ";
    out += issue;
  }
  return out;
}

std::string fmt_value(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

}  // namespace

ValidationError::ValidationError(std::vector<std::string> issues)
    : Error(join_issues(issues)), issues_(std::move(issues)) {}

double LinkSpec::path_loss(double alpha) const { return std::pow(r, -alpha); }

const char* axis_name(Axis axis) noexcept { return axis == Axis::X ? "X" : "Y"; }

std::vector<double> RoadLayout::lane_offsets(std::size_t count, double spacing) {
  std::vector<double> offsets(count);
  for (std::size_t i = 0; i < count; ++i) offsets[i] = spacing * static_cast<double>(i);
  return offsets;
}

RoadLayout RoadLayout::intersection(double lambda_x, double lambda_y) {
  return RoadLayout{{0.0}, {0.0}, lambda_x, lambda_y};
}

RoadLayout RoadLayout::highway(double lambda_x) {
  return RoadLayout{{0.0}, {}, lambda_x, 0.0};
}

bool RoadLayout::is_highway() const noexcept {
  return lanes_y.empty() || lambda_y == 0.0;
}

double RoadLayout::intensity(Axis axis) const noexcept {
  return axis == Axis::X ? lambda_x : lambda_y;
}

const std::vector<double>& RoadLayout::offsets(Axis axis) const noexcept {
  return axis == Axis::X ? lanes_x : lanes_y;
}

std::vector<Lane> RoadLayout::lanes() const {
  std::vector<Lane> out;
  out.reserve(lanes_x.size() + lanes_y.size());
  for (double w : lanes_x) out.push_back({Axis::X, w});
  for (double w : lanes_y) out.push_back({Axis::Y, w});
  return out;
}

RawScenario to_raw(const Scenario& s) {
  RawScenario raw;
  raw.alpha = s.channel.alpha;
  raw.m = static_cast<double>(s.channel.m);
  raw.mu = s.channel.mu;
  raw.d = s.geometry.d;
  raw.theta = s.geometry.theta;
  raw.r = s.link.r;
  raw.lanes_x = s.layout.lanes_x;
  raw.lanes_y = s.layout.lanes_y;
  raw.lambda_x = s.layout.lambda_x;
  raw.lambda_y = s.layout.lambda_y;
  raw.p = s.p;
  raw.theta_threshold = s.theta_threshold;
  return raw;
}

Scenario validate_scenario(const RawScenario& raw) {
  std::vector<std::string> issues;
  auto fail = [&](const char* field, const std::string& what, double value) {
    issues.push_back(std::string(field) + ": " + what + " (" + fmt_value(value) + ")");
  };

  if (!std::isfinite(raw.alpha) || raw.alpha <= 1.0)
    fail("channel.alpha", "path-loss exponent must exceed 1", raw.alpha);
  if (!std::isfinite(raw.m) || raw.m != std::floor(raw.m))
    fail("channel.m", "non-integer Nakagami m", raw.m);
  else if (raw.m < 1.0 || raw.m > 9.0)
    fail("channel.m", "Nakagami m must lie in [1, 9]", raw.m);
  if (!std::isfinite(raw.mu) || raw.mu <= 0.0)
    fail("channel.mu", "mean fading power must be positive", raw.mu);

  if (!std::isfinite(raw.d) || raw.d < 0.0)
    fail("geometry.d", "negative distance to intersection", raw.d);
  if (!std::isfinite(raw.theta) || raw.theta < 0.0 || raw.theta > std::numbers::pi / 2)
    fail("geometry.theta", "angle outside [0, pi/2]", raw.theta);

  if (!std::isfinite(raw.r) || raw.r <= 0.0)
    fail("link.r", "link distance must be positive", raw.r);

  for (double w : raw.lanes_x)
    if (!std::isfinite(w)) fail("layout.lanes_x", "non-finite lane offset", w);
  for (double w : raw.lanes_y)
    if (!std::isfinite(w)) fail("layout.lanes_y", "non-finite lane offset", w);
  if (!std::isfinite(raw.lambda_x) || raw.lambda_x < 0.0)
    fail("layout.lambda_x", "negative intensity", raw.lambda_x);
  if (!std::isfinite(raw.lambda_y) || raw.lambda_y < 0.0)
    fail("layout.lambda_y", "negative intensity", raw.lambda_y);

  if (!(raw.p >= 0.0 && raw.p <= 1.0))
    fail("p", "Aloha probability out of range", raw.p);
  if (!std::isfinite(raw.theta_threshold) || raw.theta_threshold <= 0.0)
    fail("theta_threshold", "SIR threshold must be positive", raw.theta_threshold);

  if (!issues.empty()) throw ValidationError(std::move(issues));

  Scenario s;
  s.channel = {raw.alpha, static_cast<int>(raw.m), raw.mu};
  s.geometry = {raw.d, raw.theta};
  s.link = {raw.r};
  s.layout = {raw.lanes_x, raw.lanes_y, raw.lambda_x, raw.lambda_y};
  s.p = raw.p;
  s.theta_threshold = raw.theta_threshold;
  return s;
}

Point2 destination_position(const DestinationGeometry& g) {
  // Above pi/4 evaluate through the complementary angle, which is exact in
  // that range, so that theta and pi/2 - theta give mirrored positions.
  constexpr double kHalfPi = std::numbers::pi / 2;
  if (g.theta == kHalfPi / 2) {
    const double c = g.d * std::numbers::sqrt2 / 2;
    return {c, c};
  }
  if (g.theta > kHalfPi / 2) {
    const double phi = kHalfPi - g.theta;
    return {g.d * std::sin(phi), g.d * std::cos(phi)};
  }
  return {g.d * std::cos(g.theta), g.d * std::sin(g.theta)};
}

double perpendicular_distance(Point2 dest, Axis road, double lane_offset) {
  return road == Axis::X ? std::abs(dest.y - lane_offset) : std::abs(dest.x - lane_offset);
}

double along_lane_coordinate(Point2 dest, Axis road) {
  return road == Axis::X ? dest.x : dest.y;
}

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

}  // namespace xroads
