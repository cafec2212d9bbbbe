#include <softds/motion_script.hpp>

#include <string>

namespace softds {

void validate(const MotionScript& script, int dim) {
  if (script.waypoints.empty()) throw DomainError("motion_scripts.waypoints: at least one waypoint required");
  for (std::size_t i = 0; i < script.waypoints.size(); ++i) {
    const auto& wp = script.waypoints[i];
    const std::string path = "motion_scripts.waypoints[" + std::to_string(i) + "]";
    if (wp.center.size() != dim) throw DomainError(path + ".center: dimension mismatch");
    if (i > 0 && !(wp.t > script.waypoints[i - 1].t)) {
      throw DomainError(path + ".t: waypoint times must be strictly increasing");
    }
    if (dim != 2 && wp.orientation != 0.0) throw DomainError(path + ".orientation_rad: planar only");
  }
}

ObstaclePose pose_at(const MotionScript& script, double t) {
  const auto& wps = script.waypoints;
  const auto d = wps.front().center.size();
  ObstaclePose pose;
  pose.linear_velocity = Vector::Zero(d);
  if (t < wps.front().t) {
    pose.center = wps.front().center;
    pose.orientation = wps.front().orientation;
    return pose;
  }
  for (std::size_t i = 0; i + 1 < wps.size(); ++i) {
    const Waypoint& a = wps[i];
    const Waypoint& b = wps[i + 1];
    if (t >= a.t && t < b.t) {
      const double span = b.t - a.t;
      const double s = (t - a.t) / span;
      const Vector delta = b.center - a.center;
      pose.center = a.center + s * delta;
      pose.orientation = a.orientation + s * (b.orientation - a.orientation);
      pose.linear_velocity = delta / span;
      pose.angular_velocity = (b.orientation - a.orientation) / span;
      return pose;
    }
  }
  pose.center = wps.back().center;
  pose.orientation = wps.back().orientation;
  return pose;
}

Obstacle posed(const Obstacle& base, const ObstaclePose& pose) {
  Obstacle out = base;
  out.linear_velocity = pose.linear_velocity;
  out.angular_velocity = pose.angular_velocity;
  if (pose.center == base.center && pose.orientation == base.orientation) return out;
  const Vector local_ref = to_obstacle_frame(base, base.reference_point);
  out.center = pose.center;
  out.orientation = pose.orientation;
  out.reference_point = out.center + rotation(out) * local_ref;
  return out;
}

}  // namespace softds
