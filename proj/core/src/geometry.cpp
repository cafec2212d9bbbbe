#include <softds/geometry.hpp>

#include <cmath>
#include <numbers>
#include <string>

namespace softds {
namespace {

double int_power(double base, int p) {
  double out = 1.0;
  for (int i = 0; i < p; ++i) out *= base;
  return out;
}

void require(bool ok, const std::string& msg) {
  if (!ok) throw DomainError(msg);
}

}  // namespace

namespace detail {

double local_gamma(const Vector& axes, int p, const Vector& local) {
  double sum = 0.0;
  for (Eigen::Index i = 0; i < local.size(); ++i) {
    const double q = local(i) / axes(i);
    sum += int_power(q * q, p);
  }
  return sum;
}

Vector local_gamma_gradient(const Vector& axes, int p, const Vector& local) {
  Vector grad(local.size());
  for (Eigen::Index i = 0; i < local.size(); ++i) {
    const double q = local(i) / axes(i);
    // d/dx (x/a)^{2p} = 2p (x/a)^{2p-1} / a
    grad(i) = 2.0 * p * int_power(q * q, p - 1) * q / axes(i);
  }
  return grad;
}

}  // namespace detail

double Obstacle::stiffness() const { return std::exp(soft_ratio - 1.0); }

bool Obstacle::is_moving() const {
  return angular_velocity != 0.0 ||
         (linear_velocity.size() > 0 && !linear_velocity.isZero(0.0));
}

Obstacle make_obstacle(Vector center, Vector hard_semi_axes, double soft_ratio,
                       double orientation, int exponent) {
  Obstacle obs;
  const auto d = center.size();
  obs.reference_point = center;
  obs.center = std::move(center);
  obs.hard_semi_axes = std::move(hard_semi_axes);
  obs.soft_ratio = soft_ratio;
  obs.orientation = orientation;
  obs.exponent = exponent;
  obs.safety_factor = Vector::Ones(d);
  obs.linear_velocity = Vector::Zero(d);
  validate(obs);
  return obs;
}

void validate(const Obstacle& obs) {
  const auto d = obs.center.size();
  require(d >= 2, "center: dimension must be at least 2");
  require(obs.hard_semi_axes.size() == d, "hard_semi_axes: dimension mismatch");
  require((obs.hard_semi_axes.array() > 0.0).all(), "hard_semi_axes: all entries must be > 0");
  require(std::isfinite(obs.soft_ratio) && obs.soft_ratio >= 1.0, "soft_ratio: must be >= 1");
  require(obs.exponent >= 1, "exponent: must be a positive integer");
  require(obs.safety_factor.size() == d, "safety_factor: dimension mismatch");
  require((obs.safety_factor.array() >= 1.0).all(), "safety_factor: all entries must be >= 1");
  require(obs.linear_velocity.size() == d, "linear_velocity: dimension mismatch");
  require(obs.reference_point.size() == d, "reference_point: dimension mismatch");
  if (d != 2) {
    require(obs.orientation == 0.0, "orientation_rad: only planar obstacles may be rotated");
    require(obs.angular_velocity == 0.0, "angular_velocity: only supported for planar obstacles");
  }
  require(gamma(obs, obs.reference_point) < 1.0,
          "reference_point: must lie strictly inside the hard core");
}

Obstacle with_stiffness(const Obstacle& obs, double k) {
  if (!(k >= 1.0)) throw DomainError("stiffness k must be >= 1, got " + std::to_string(k));
  Obstacle out = obs;
  out.soft_ratio = std::log(k) + 1.0;
  return out;
}

std::string_view to_string(RegionLabel label) {
  switch (label) {
    case RegionLabel::Exterior: return "exterior";
    case RegionLabel::SoftRegion: return "soft_region";
    case RegionLabel::SoftBoundary: return "soft_boundary";
    case RegionLabel::HardBoundary: return "hard_boundary";
    case RegionLabel::HardInterior: return "hard_interior";
  }
  return "unknown";
}

double stiffness_coefficient(double a, double b) {
  if (!(a > 0.0)) throw DomainError("stiffness_coefficient: hard extent a must be > 0");
  if (!(b >= a)) throw DomainError("stiffness_coefficient: soft extent b must be >= a");
  if (b == a) return 1.0;
  return std::exp(b / a - 1.0);
}

Matrix rotation(const Obstacle& obs) {
  const auto d = obs.center.size();
  Matrix rot = Matrix::Identity(d, d);
  if (d == 2) {
    const double c = std::cos(obs.orientation);
    const double s = std::sin(obs.orientation);
    rot << c, -s, s, c;
  }
  return rot;
}

Vector to_obstacle_frame(const Obstacle& obs, const Vector& x) {
  if (obs.center.size() == 2) {
    // Inline R^T (x - c) for the common planar case.
    const double c = std::cos(obs.orientation);
    const double s = std::sin(obs.orientation);
    const double dx = x(0) - obs.center(0);
    const double dy = x(1) - obs.center(1);
    Vector out(2);
    out << c * dx + s * dy, -s * dx + c * dy;
    return out;
  }
  return x - obs.center;
}

double gamma(const Obstacle& obs, const Vector& x) {
  return detail::local_gamma(obs.hard_semi_axes, obs.exponent, to_obstacle_frame(obs, x));
}

double gamma_soft(const Obstacle& obs, const Vector& x) {
  return gamma(obs, x) / int_power(obs.soft_ratio * obs.soft_ratio, obs.exponent);
}

Vector gamma_gradient(const Obstacle& obs, const Vector& x) {
  const Vector local = to_obstacle_frame(obs, x);
  if (local.isZero(0.0)) throw DegeneratePointError("gamma_gradient: query point is the obstacle center");
  return rotation(obs) * detail::local_gamma_gradient(obs.hard_semi_axes, obs.exponent, local);
}

Vector reference_direction(const Obstacle& obs, const Vector& x) {
  const Vector diff = x - obs.reference_point;
  const double norm = diff.norm();
  if (norm == 0.0) throw DegeneratePointError("reference_direction: query point is the reference point");
  return diff / norm;
}

Matrix tangent_basis(const Vector& normal) {
  const auto d = normal.size();
  const double norm = normal.norm();
  if (d < 2 || norm == 0.0) throw DegeneratePointError("tangent_basis: normal must be a nonzero vector");
  const Vector n = normal / norm;
  if (d == 2) {
    Matrix out(2, 1);
    out << -n(1), n(0);
    return out;
  }
  // H = I - 2 v v^T / (v^T v) with v = n + sign(n_0) e_0 maps n onto -sign(n_0) e_0;
  // its remaining columns are orthonormal and orthogonal to n.
  Vector v = n;
  v(0) += (n(0) >= 0.0 ? 1.0 : -1.0);
  const Matrix householder = Matrix::Identity(d, d) - 2.0 * v * v.transpose() / v.squaredNorm();
  return householder.rightCols(d - 1);
}

RegionLabel classify_region(const Obstacle& obs, const Vector& x, double tol) {
  if (!(tol > 0.0)) throw DomainError("classify_region: tolerance must be > 0");
  const double g = gamma(obs, x);
  if (g < 1.0 - tol) return RegionLabel::HardInterior;
  if (g <= 1.0 + tol) return RegionLabel::HardBoundary;
  const double gk = gamma_soft(obs, x);
  if (gk < 1.0 - tol) return RegionLabel::SoftRegion;
  if (gk <= 1.0 + tol) return RegionLabel::SoftBoundary;
  return RegionLabel::Exterior;
}

bool in_intersection(const Obstacle& a, const Obstacle& b, const Vector& x) {
  const double ga = gamma(a, x);
  const double gb = gamma(b, x);
  if (!(ga > 1.0 && gb > 1.0)) return false;
  const double ka = gamma_soft(a, x);
  const double kb = gamma_soft(b, x);
  return ka > 0.0 && ka <= 1.0 && kb > 0.0 && kb <= 1.0;
}

bool soft_shells_overlap(const Obstacle& a, const Obstacle& b) {
  if (a.dim() != 2 || b.dim() != 2) return false;
  if (gamma_soft(a, b.center) <= 1.0 || gamma_soft(b, a.center) <= 1.0) return true;
  // Sample each soft boundary and test membership in the other shell.
  constexpr int kSamples = 720;
  const auto boundary_hits = [](const Obstacle& from, const Obstacle& into) {
    const Matrix rot = rotation(from);
    const double p = static_cast<double>(from.exponent);
    for (int i = 0; i < kSamples; ++i) {
      const double t = 2.0 * std::numbers::pi * i / kSamples;
      const double c = std::cos(t);
      const double s = std::sin(t);
      // Superellipse boundary: sign(c)|c|^{1/p}, sign(s)|s|^{1/p}.
      Vector local(2);
      local << std::copysign(std::pow(std::abs(c), 1.0 / p), c) * from.hard_semi_axes(0) * from.soft_ratio,
          std::copysign(std::pow(std::abs(s), 1.0 / p), s) * from.hard_semi_axes(1) * from.soft_ratio;
      if (gamma_soft(into, from.center + rot * local) <= 1.0) return true;
    }
    return false;
  };
  return boundary_hits(a, b) || boundary_hits(b, a);
}

}  // namespace softds
