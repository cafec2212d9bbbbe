#ifndef SOFTDS_MOTION_SCRIPT_HPP
#define SOFTDS_MOTION_SCRIPT_HPP

#include <softds/geometry.hpp>

#include <cstddef>
#include <vector>

namespace softds {

struct Waypoint {
  double t = 0.0;
  Vector center;
  double orientation = 0.0;
};

/// Piecewise-linear pose trajectory for one obstacle. Velocities are the
/// per-segment finite differences; before the first and after the last
/// waypoint the obstacle rests at the end pose.
struct MotionScript {
  std::size_t obstacle = 0;
  std::vector<Waypoint> waypoints;
};

struct ObstaclePose {
  Vector center;
  double orientation = 0.0;
  Vector linear_velocity;
  double angular_velocity = 0.0;
};

void validate(const MotionScript& script, int dim);

ObstaclePose pose_at(const MotionScript& script, double t);

/// Places `base` at `pose`: the reference point moves rigidly with the
/// obstacle frame and the velocities are taken from the pose.
Obstacle posed(const Obstacle& base, const ObstaclePose& pose);

}  // namespace softds

#endif  // SOFTDS_MOTION_SCRIPT_HPP
