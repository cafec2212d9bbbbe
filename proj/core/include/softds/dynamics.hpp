#ifndef SOFTDS_DYNAMICS_HPP
#define SOFTDS_DYNAMICS_HPP

#include <softds/types.hpp>

#include <string>
#include <variant>
#include <vector>

namespace softds {

/// f(x) = A (x - x*).
struct LinearDS {
  Matrix gain;
  Vector attractor;
};

/// One linear system of an LPV mixture with its Gaussian scheduling component.
struct LpvComponent {
  double prior = 0.0;
  Vector mean;
  Matrix covariance;
  Matrix gain;    // A_k
  Vector offset;  // b_k
};

/// f(x) = sum_k γ_k(x) (A_k x + b_k), with γ_k the GMM posterior weights.
struct LpvDS {
  std::vector<LpvComponent> components;
  Matrix lyapunov;  // P
  Vector attractor;
};

using DynamicalSystem = std::variant<LinearDS, LpvDS>;

int dim(const DynamicalSystem& ds);
const Vector& attractor(const DynamicalSystem& ds);

/// Structural checks performed at load time: dimensions, Hurwitz gain for
/// linear systems, priors on the simplex, SPD covariances and SPD P.
/// Stability of the mixture itself is reported by validate_stability.
void validate(const LinearDS& ds);
void validate(const LpvDS& ds);

/// Replaces every b_k by -A_k x* so that f(x*) = 0 exactly.
void reproject_offsets(LpvDS& ds);

Vector eval_linear(const LinearDS& ds, const Vector& x);

/// Posterior responsibilities computed in log space. When every component's
/// log-density falls below kLogDensityFloor the weights collapse to one-hot
/// on the component nearest in Mahalanobis distance.
std::vector<double> mixing_weights(const LpvDS& ds, const Vector& x);

inline constexpr double kLogDensityFloor = -700.0;

Vector eval_lpv(const LpvDS& ds, const Vector& x);

Vector evaluate(const DynamicalSystem& ds, const Vector& x);

/// (x - x*)^T P (x - x*).
double lyapunov_value(const Matrix& P, const Vector& x, const Vector& attractor);

struct StabilityCheck {
  std::string name;     // e.g. "component[1].lyapunov_decrease"
  bool passed = false;
  double value = 0.0;   // the eigenvalue or residual that decided the check
  std::string detail;
};

struct StabilityReport {
  bool passed = false;
  std::vector<StabilityCheck> checks;

  /// Indices of components whose A_k^T P + P A_k is not negative-definite.
  std::vector<int> failing_components;
};

inline constexpr double kNegDefTolerance = 1e-8;
inline constexpr double kConsistencyTolerance = 1e-6;

/// P-QLF check: P > 0, A_k^T P + P A_k < -tol for every k, A_k x* + b_k = 0.
StabilityReport validate_stability(const LpvDS& ds);

/// Linear systems: max Re(eig(A)) < -tol.
StabilityReport validate_stability(const LinearDS& ds);

StabilityReport validate_stability(const DynamicalSystem& ds);

}  // namespace softds

#endif  // SOFTDS_DYNAMICS_HPP
