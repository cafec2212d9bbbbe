#ifndef SOFTDS_MODULATION_HPP
#define SOFTDS_MODULATION_HPP

#include <softds/geometry.hpp>

#include <span>
#include <string_view>
#include <utility>
#include <vector>

namespace softds {

/// Modulation quantities at one query point for one obstacle.
struct ModulationResult {
  Matrix basis;        // E = [r, e_1 .. e_{d-1}]
  Matrix eigenvalues;  // D = diag(lambda_r, lambda_e ...)
  Matrix modulation;   // M = E D E^{-1}
  double lambda_r = 0.0;
  Vector lambda_e;
  double gamma_used = 0.0;  // after safety scaling and clamping
};

/// Γ is clamped to at least 1 + kGammaClampMargin before the eigenvalue law.
inline constexpr double kGammaClampMargin = 1e-9;
/// Points with (safety-scaled) Γ below 1 - kInteriorTolerance are rejected.
inline constexpr double kInteriorTolerance = 1e-6;
/// |det E| below this is reported as a singular basis.
inline constexpr double kSingularBasisTolerance = 1e-12;

/// How per-obstacle modulated velocities are merged.
enum class BlendRule {
  GammaProduct,  // w_n ∝ prod_{m != n} (Γ^m - 1)
  Nearest,       // one-hot on the smallest Γ
};

std::string_view to_string(BlendRule rule);
BlendRule blend_rule_from_string(std::string_view name);

/// lambda_r = 1 - 1/Γ, lambda_e = 1 + 1/Γ. Requires Γ >= 1.
std::pair<double, double> eigenvalue_pair(double gamma);

/// E = [r(x), tangent_basis(∇Γ(x))] without safety scaling.
Matrix basis_matrix(const Obstacle& obs, const Vector& x);

/// Full modulation at x, evaluated on the safety-inflated obstacle: the
/// obstacle-frame coordinates are divided element-wise by η before Γ is
/// computed, and the tangent basis is orthogonal to the world-frame gradient
/// of that inflated level set.
ModulationResult modulation_matrix(const Obstacle& obs, const Vector& x);

Vector modulate_static(const Obstacle& obs, const Vector& f, const Vector& x);

/// Velocity of the material point of the obstacle at x:
/// v_lin + ω × (x - center). Planar cross product for d = 2.
Vector obstacle_point_velocity(const Obstacle& obs, const Vector& x);

/// M (f - v) + v with v the obstacle point velocity. Identical to
/// modulate_static for a static obstacle.
Vector modulate_moving(const Obstacle& obs, const Vector& f, const Vector& x);

/// Normalized blend weights from the clamped Γ values of each obstacle.
std::vector<double> blend_weights(std::span<const double> gammas, BlendRule rule);

/// Weighted combination of per-obstacle modulate_moving results. Throws
/// InteriorError carrying the obstacle index when x is inside any core.
Vector combine_multi(std::span<const Obstacle> obstacles, const Vector& f, const Vector& x,
                     BlendRule rule = BlendRule::GammaProduct);

}  // namespace softds

#endif  // SOFTDS_MODULATION_HPP
