#pragma once

#include <cstddef>
#include <vector>

namespace xroads {

inline constexpr double kDefaultLaneSpacing = 3.5;  // meters

/// Path-loss and fading environment of a link.
///
/// `alpha` is the path-loss exponent, `m` the Nakagami parameter of the
/// source-destination link and `mu` the mean of its power fading gain.
struct ChannelParams {
  double alpha = 4.0;
  int m = 1;
  double mu = 1.0;

  /// Suburban line-of-sight preset: alpha 2, m 3, mu 1.
  static ChannelParams los() { return {2.0, 3, 1.0}; }
  /// Urban non-line-of-sight preset: alpha 4, m 1, mu 1.
  static ChannelParams nlos() { return {4.0, 1, 1.0}; }

  bool operator==(const ChannelParams&) const = default;
};

/// Destination placement relative to the intersection: distance `d` (m) and
/// angle `theta` (rad, in [0, pi/2]) measured from the X road.
struct DestinationGeometry {
  double d = 0.0;
  double theta = 0.0;

  bool operator==(const DestinationGeometry&) const = default;
};

/// Source-destination separation. Only the deterministic path loss
/// r^-alpha enters the model; the source position itself is not tracked.
struct LinkSpec {
  double r = 20.0;

  double path_loss(double alpha) const;

  bool operator==(const LinkSpec&) const = default;
};

struct Point2 {
  double x = 0.0;
  double y = 0.0;

  bool operator==(const Point2&) const = default;
};

enum class Axis { X, Y };

const char* axis_name(Axis axis) noexcept;

/// A single lane running parallel to `axis` at perpendicular `offset`.
/// Lanes parallel to X are the lines y = offset; lanes parallel to Y are
/// x = offset.
struct Lane {
  Axis axis = Axis::X;
  double offset = 0.0;

  bool operator==(const Lane&) const = default;
};

/// Lanes on both roads and the per-lane interferer intensity of each road.
/// `lanes_y` empty (or `lambda_y` zero) is the highway layout.
struct RoadLayout {
  std::vector<double> lanes_x{0.0};
  std::vector<double> lanes_y{0.0};
  double lambda_x = 0.0;
  double lambda_y = 0.0;

  /// `count` lanes at offsets 0, spacing, 2*spacing, ...
  static std::vector<double> lane_offsets(std::size_t count,
                                          double spacing = kDefaultLaneSpacing);

  static RoadLayout intersection(double lambda_x, double lambda_y);
  static RoadLayout highway(double lambda_x);

  bool is_highway() const noexcept;
  double intensity(Axis axis) const noexcept;
  const std::vector<double>& offsets(Axis axis) const noexcept;
  /// All lanes, X lanes first, in declaration order.
  std::vector<Lane> lanes() const;

  bool operator==(const RoadLayout&) const = default;
};

/// A validated experiment description. Obtain one through validate_scenario;
/// treat it as immutable afterwards.
struct Scenario {
  ChannelParams channel;
  DestinationGeometry geometry;
  LinkSpec link;
  RoadLayout layout;
  double p = 1.0;                // Aloha access probability
  double theta_threshold = 1.0;  // linear SIR threshold

  /// Interferer intensity of the road a lane belongs to.
  double intensity(const Lane& lane) const noexcept {
    return layout.intensity(lane.axis);
  }

  bool operator==(const Scenario&) const = default;
};

/// Unvalidated counterpart of Scenario. `m` is carried as a real number so
/// that non-integer input can be diagnosed rather than silently truncated.
struct RawScenario {
  double alpha = 4.0;
  double m = 1.0;
  double mu = 1.0;
  double d = 0.0;
  double theta = 0.0;
  double r = 20.0;
  std::vector<double> lanes_x{0.0};
  std::vector<double> lanes_y{0.0};
  double lambda_x = 0.0;
  double lambda_y = 0.0;
  double p = 1.0;
  double theta_threshold = 1.0;
};

RawScenario to_raw(const Scenario& scenario);

/// Checks every invariant and returns the typed scenario, or throws
/// ValidationError listing all violations at once.
Scenario validate_scenario(const RawScenario& raw);

Point2 destination_position(const DestinationGeometry& g);

/// Distance from `dest` to the centre line of a lane parallel to `road` at
/// perpendicular offset `lane_offset`.
double perpendicular_distance(Point2 dest, Axis road, double lane_offset);

/// Coordinate of `dest` measured along a lane parallel to `road`.
double along_lane_coordinate(Point2 dest, Axis road);

double db_to_linear(double db);

}  // namespace xroads
