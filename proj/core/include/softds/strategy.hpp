#ifndef SOFTDS_STRATEGY_HPP
#define SOFTDS_STRATEGY_HPP

#include <softds/dynamics.hpp>
#include <softds/geometry.hpp>
#include <softds/modulation.hpp>

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

namespace softds {

/// How the rotation angle θ2 of the adaptive strategy is chosen.
struct Theta2Policy {
  enum class Kind { FollowVelocity, Fixed };
  Kind kind = Kind::FollowVelocity;
  double angle = 0.0;  // used when kind == Fixed, in (-pi, pi]

  static Theta2Policy follow_velocity() { return {}; }
  static Theta2Policy fixed(double a) { return {Kind::Fixed, a}; }
};

using ObstaclePair = std::pair<std::size_t, std::size_t>;

struct StrategyConfig {
  double c = 0.0;  // modulation factor, velocity units
  Theta2Policy theta2;
  double sgn_zero_value = 1.0;

  /// Resolved intersecting pairs; the slowdown term only visits these.
  std::vector<ObstaclePair> intersection_pairs;

  /// Soft-region terms vanish inside this ball (radius 0 disables the gate).
  Vector gate_center;
  double gate_radius = 0.0;

  /// Remove the part of the strategy correction that points into a hard
  /// core, scaled by (1 - lambda_r) of that core.
  bool hard_core_guard = true;

  BlendRule blend = BlendRule::GammaProduct;
};

void validate(const StrategyConfig& cfg, std::size_t n_obstacles);

/// Everything total_velocity needs at one instant.
struct Scene {
  DynamicalSystem ds;
  std::vector<Obstacle> obstacles;
  StrategyConfig strategy;
};

/// sgn(cos(θ2 - θ1)), with `zero_value` returned when the cosine is 0.
double sign_factor(double theta2, double theta1, double zero_value = 1.0);

struct Theta2 {
  double angle = 0.0;
  bool fallback = false;  // FollowVelocity with a vanishing velocity
};

Theta2 resolve_theta2(const Theta2Policy& policy, const Vector& velocity);

/// Planar counter-clockwise rotation.
Matrix rotation2d(double angle);

/// v + sum_n S(θ2, θ1^n) R(θ2) r^n c / (Γ_k^n)^2 over non-rigid obstacles,
/// skipped inside the attractor gate.
Vector soft_region_adjustment(std::span<const Obstacle> obstacles, const Vector& x, const Vector& v,
                              const StrategyConfig& cfg, double theta2);
Vector soft_region_adjustment(std::span<const Obstacle> obstacles, const Vector& x, const Vector& v,
                              const StrategyConfig& cfg);

/// v - sum over configured pairs (n, p) with x in their intersection of
/// S(θ2, θ1^n) (r^n · e_1^n) R(θ2) e_1^n c (2 / (Γ_k^n + Γ_k^p))^2.
Vector intersection_adjustment(std::span<const Obstacle> obstacles, const Vector& x, const Vector& v,
                               const StrategyConfig& cfg, double theta2);
Vector intersection_adjustment(std::span<const Obstacle> obstacles, const Vector& x, const Vector& v,
                               const StrategyConfig& cfg);

/// Intermediate values of the velocity pipeline at one point.
struct VelocityBreakdown {
  Vector nominal;    // f(x)
  Vector modulated;  // after combine_multi
  Vector soft;       // after the soft-region term
  Vector total;      // after the intersection term and the hard-core guard
  Theta2 theta2;
  bool attractor_gated = false;
  std::size_t active_soft_terms = 0;
  std::size_t active_pairs = 0;
  /// sum_n c/(Γ_k^n)^2 + sum_pairs c (2/(Γ_k^n + Γ_k^p))^2 over active terms;
  /// |total - modulated| never exceeds it.
  double correction_bound = 0.0;
};

VelocityBreakdown velocity_breakdown(const Scene& scene, const Vector& x);

/// f(x) -> combine_multi -> soft-region term -> intersection term.
Vector total_velocity(const Scene& scene, const Vector& x);

/// Pairs of obstacles whose soft shells overlap.
std::vector<ObstaclePair> discover_intersection_pairs(std::span<const Obstacle> obstacles);

/// 5% of the largest nominal speed over a grid spanning [lo, hi].
double auto_modulation_factor(const DynamicalSystem& ds, const Vector& lo, const Vector& hi);

}  // namespace softds

#endif  // SOFTDS_STRATEGY_HPP
