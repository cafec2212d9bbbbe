#include <softds/strategy.hpp>

#include <cmath>
#include <numbers>
#include <string>

namespace softds {
namespace {

constexpr double kMinFollowSpeed = 1e-12;

bool inside_gate(const StrategyConfig& cfg, const Vector& x) {
  return cfg.gate_radius > 0.0 && cfg.gate_center.size() == x.size() && (x - cfg.gate_center).norm() < cfg.gate_radius;
}

double pair_scale(double gk_n, double gk_p) {
  const double s = 2.0 / (gk_n + gk_p);
  return s * s;
}

// Shrinks the inward normal component of `delta` for every obstacle by
// (1 - lambda_r), so a correction cannot push through a hard boundary.
Vector guard_hard_cores(std::span<const Obstacle> obstacles, const Vector& x, Vector delta) {
  for (const Obstacle& obs : obstacles) {
    const Vector scaled = to_obstacle_frame(obs, x).cwiseQuotient(obs.safety_factor);
    if (scaled.isZero(0.0)) continue;
    const double g = std::max(detail::local_gamma(obs.hard_semi_axes, obs.exponent, scaled), 1.0 + kGammaClampMargin);
    const Vector grad = rotation(obs) * detail::local_gamma_gradient(obs.hard_semi_axes, obs.exponent, scaled)
                                            .cwiseQuotient(obs.safety_factor);
    const Vector normal = grad.normalized();
    const double inward = delta.dot(normal);
    if (inward < 0.0) {
      const double lambda_r = 1.0 - 1.0 / g;
      delta -= (1.0 - lambda_r) * inward * normal;
    }
  }
  return delta;
}

}  // namespace

void validate(const StrategyConfig& cfg, std::size_t n_obstacles) {
  if (!(cfg.c >= 0.0) || !std::isfinite(cfg.c)) throw DomainError("strategy.c: must be >= 0");
  if (cfg.theta2.kind == Theta2Policy::Kind::Fixed &&
      !(cfg.theta2.angle > -std::numbers::pi && cfg.theta2.angle <= std::numbers::pi)) {
    throw DomainError("strategy.theta2_policy: fixed angle must lie in (-pi, pi]");
  }
  if (cfg.sgn_zero_value != 1.0 && cfg.sgn_zero_value != -1.0) {
    throw DomainError("strategy.sgn_zero_value: must be +1 or -1");
  }
  for (std::size_t i = 0; i < cfg.intersection_pairs.size(); ++i) {
    const auto [a, b] = cfg.intersection_pairs[i];
    if (a >= n_obstacles || b >= n_obstacles || a == b) {
      throw DomainError("strategy.intersection_pairs[" + std::to_string(i) + "]: invalid obstacle indices");
    }
  }
}

double sign_factor(double theta2, double theta1, double zero_value) {
  const double c = std::cos(theta2 - theta1);
  if (c > 0.0) return 1.0;
  if (c < 0.0) return -1.0;
  return zero_value;
}

Theta2 resolve_theta2(const Theta2Policy& policy, const Vector& velocity) {
  if (policy.kind == Theta2Policy::Kind::Fixed) return {policy.angle, false};
  if (velocity.size() < 2 || velocity.norm() <= kMinFollowSpeed) return {0.0, true};
  return {std::atan2(velocity(1), velocity(0)), false};
}

Matrix rotation2d(double angle) {
  Matrix rot(2, 2);
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  rot << c, -s, s, c;
  return rot;
}

Vector soft_region_adjustment(std::span<const Obstacle> obstacles, const Vector& x, const Vector& v,
                              const StrategyConfig& cfg, double theta2) {
  Vector out = v;
  if (cfg.c == 0.0 || inside_gate(cfg, x)) return out;
  const Matrix rot = rotation2d(theta2);
  for (const Obstacle& obs : obstacles) {
    if (obs.is_rigid()) continue;
    const double gk = gamma_soft(obs, x);
    const double s = sign_factor(theta2, obs.orientation, cfg.sgn_zero_value);
    out += s * cfg.c / (gk * gk) * (rot * reference_direction(obs, x));
  }
  return out;
}

Vector soft_region_adjustment(std::span<const Obstacle> obstacles, const Vector& x, const Vector& v,
                              const StrategyConfig& cfg) {
  return soft_region_adjustment(obstacles, x, v, cfg, resolve_theta2(cfg.theta2, v).angle);
}

Vector intersection_adjustment(std::span<const Obstacle> obstacles, const Vector& x, const Vector& v,
                               const StrategyConfig& cfg, double theta2) {
  Vector out = v;
  if (cfg.c == 0.0) return out;
  const Matrix rot = rotation2d(theta2);
  for (const auto& [n, p] : cfg.intersection_pairs) {
    const Obstacle& a = obstacles[n];
    const Obstacle& b = obstacles[p];
    if (!in_intersection(a, b, x)) continue;
    const Vector tangent = tangent_basis(gamma_gradient(a, x)).col(0);
    const double alignment = reference_direction(a, x).dot(tangent);
    const double s = sign_factor(theta2, a.orientation, cfg.sgn_zero_value);
    out -= s * alignment * cfg.c * pair_scale(gamma_soft(a, x), gamma_soft(b, x)) * (rot * tangent);
  }
  return out;
}

Vector intersection_adjustment(std::span<const Obstacle> obstacles, const Vector& x, const Vector& v,
                               const StrategyConfig& cfg) {
  return intersection_adjustment(obstacles, x, v, cfg, resolve_theta2(cfg.theta2, v).angle);
}

VelocityBreakdown velocity_breakdown(const Scene& scene, const Vector& x) {
  const StrategyConfig& cfg = scene.strategy;
  VelocityBreakdown out;
  out.nominal = evaluate(scene.ds, x);
  out.modulated = combine_multi(scene.obstacles, out.nominal, x, cfg.blend);
  out.soft = out.modulated;
  out.total = out.modulated;
  if (cfg.c == 0.0 || scene.obstacles.empty()) return out;
  if (x.size() != 2) throw DomainError("adaptive strategy terms require a planar workspace");

  out.theta2 = resolve_theta2(cfg.theta2, out.modulated);
  out.attractor_gated = inside_gate(cfg, x);
  if (!out.attractor_gated) {
    for (const Obstacle& obs : scene.obstacles) {
      if (obs.is_rigid()) continue;
      const double gk = gamma_soft(obs, x);
      out.correction_bound += cfg.c / (gk * gk);
      ++out.active_soft_terms;
    }
  }
  for (const auto& [n, p] : cfg.intersection_pairs) {
    if (!in_intersection(scene.obstacles[n], scene.obstacles[p], x)) continue;
    out.correction_bound +=
        cfg.c * pair_scale(gamma_soft(scene.obstacles[n], x), gamma_soft(scene.obstacles[p], x));
    ++out.active_pairs;
  }
  if (out.active_soft_terms == 0 && out.active_pairs == 0) return out;

  out.soft = soft_region_adjustment(scene.obstacles, x, out.modulated, cfg, out.theta2.angle);
  const Vector adjusted = intersection_adjustment(scene.obstacles, x, out.soft, cfg, out.theta2.angle);
  Vector delta = adjusted - out.modulated;
  if (cfg.hard_core_guard) delta = guard_hard_cores(scene.obstacles, x, std::move(delta));
  out.total = out.modulated + delta;
  return out;
}

Vector total_velocity(const Scene& scene, const Vector& x) { return velocity_breakdown(scene, x).total; }

std::vector<ObstaclePair> discover_intersection_pairs(std::span<const Obstacle> obstacles) {
  std::vector<ObstaclePair> pairs;
  for (std::size_t i = 0; i < obstacles.size(); ++i) {
    for (std::size_t j = i + 1; j < obstacles.size(); ++j) {
      if (obstacles[i].is_rigid() || obstacles[j].is_rigid()) continue;
      if (soft_shells_overlap(obstacles[i], obstacles[j])) pairs.emplace_back(i, j);
    }
  }
  return pairs;
}

double auto_modulation_factor(const DynamicalSystem& ds, const Vector& lo, const Vector& hi) {
  const auto d = lo.size();
  const int per_axis = d <= 2 ? 41 : (d == 3 ? 11 : 5);
  long total = 1;
  for (Eigen::Index i = 0; i < d; ++i) total *= per_axis;
  double max_speed = 0.0;
  Vector x(d);
  for (long idx = 0; idx < total; ++idx) {
    long rem = idx;
    for (Eigen::Index i = 0; i < d; ++i) {
      const double t = static_cast<double>(rem % per_axis) / (per_axis - 1);
      rem /= per_axis;
      x(i) = lo(i) + t * (hi(i) - lo(i));
    }
    max_speed = std::max(max_speed, evaluate(ds, x).norm());
  }
  return 0.05 * max_speed;
}

}  // namespace softds
