#ifndef SOFTDS_GEOMETRY_HPP
#define SOFTDS_GEOMETRY_HPP

#include <softds/types.hpp>

#include <string_view>

namespace softds {

/// Deformable ellipsoidal obstacle: a rigid core with semi-axes
/// `hard_semi_axes` wrapped in a traversable shell that is the core scaled
/// uniformly by `soft_ratio` (= b/a).
///
/// Orientation and angular velocity are planar quantities; for d != 2 both
/// must be zero.
struct Obstacle {
  Vector center;
  Vector hard_semi_axes;
  double soft_ratio = 1.0;
  double orientation = 0.0;
  int exponent = 1;
  Vector reference_point;  // world frame
  Vector safety_factor;    // per-axis, obstacle frame
  Vector linear_velocity;
  double angular_velocity = 0.0;

  int dim() const { return static_cast<int>(center.size()); }

  /// k = exp(b/a - 1). Γ_k uses ln(k) + 1, which is `soft_ratio` itself.
  double stiffness() const;

  bool is_rigid() const { return soft_ratio == 1.0; }
  bool is_moving() const;
};

/// Builds an obstacle with defaults filled in: reference point at the
/// center, unit safety factors, zero velocity. Validates the result.
Obstacle make_obstacle(Vector center, Vector hard_semi_axes,
                       double soft_ratio = 1.0, double orientation = 0.0,
                       int exponent = 1);

/// Throws DomainError naming the offending field when an invariant fails.
void validate(const Obstacle& obs);

/// Copy of `obs` whose soft shell corresponds to stiffness k (k >= 1).
Obstacle with_stiffness(const Obstacle& obs, double k);

enum class RegionLabel { Exterior, SoftRegion, SoftBoundary, HardBoundary, HardInterior };

std::string_view to_string(RegionLabel label);

/// k = exp(b/a - 1); exactly 1 for b == a.
double stiffness_coefficient(double a, double b);

/// Rotation from obstacle frame to world frame (identity for d != 2).
Matrix rotation(const Obstacle& obs);

/// R^T (x - center).
Vector to_obstacle_frame(const Obstacle& obs, const Vector& x);

/// Hard-core level set: 1 on the surface, < 1 inside, > 1 outside.
double gamma(const Obstacle& obs, const Vector& x);

/// Soft-shell level set Γ / soft_ratio^{2p}.
double gamma_soft(const Obstacle& obs, const Vector& x);

/// World-frame gradient of Γ. Throws DegeneratePointError at the center.
Vector gamma_gradient(const Obstacle& obs, const Vector& x);

/// (x - x_ref) / |x - x_ref|. Throws DegeneratePointError at x_ref.
Vector reference_direction(const Obstacle& obs, const Vector& x);

/// d x (d-1) matrix whose columns are an orthonormal basis of the
/// hyperplane orthogonal to `normal`. In 2-D the single column is the
/// normal rotated by +90 degrees; otherwise the trailing columns of the
/// Householder reflector taking the normal to a coordinate axis.
Matrix tangent_basis(const Vector& normal);

RegionLabel classify_region(const Obstacle& obs, const Vector& x, double tol = 1e-9);

/// Γ^a > 1, Γ^b > 1, 0 < Γ_k^a <= 1 and 0 < Γ_k^b <= 1.
bool in_intersection(const Obstacle& a, const Obstacle& b, const Vector& x);

/// True when the soft shells of `a` and `b` overlap (planar obstacles only).
bool soft_shells_overlap(const Obstacle& a, const Obstacle& b);

namespace detail {

// Level set of an axis-aligned ellipsoid centered at the origin.
double local_gamma(const Vector& axes, int p, const Vector& local);
Vector local_gamma_gradient(const Vector& axes, int p, const Vector& local);

}  // namespace detail

}  // namespace softds

#endif  // SOFTDS_GEOMETRY_HPP
