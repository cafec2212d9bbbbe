#ifndef SOFTDS_TYPES_HPP
#define SOFTDS_TYPES_HPP

#include <Eigen/Dense>

#include <cstddef>
#include <stdexcept>
#include <string>

namespace softds {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Raised when an argument lies outside the domain of a formula (e.g. b < a
/// for the stiffness coefficient, Γ < 1 for the eigenvalue law).
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised at points where a direction is undefined (obstacle center,
/// reference point, zero normal).
class DegeneratePointError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// The reference direction is (numerically) parallel to the tangent plane.
class SingularBasisError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A query point lies inside a (safety-scaled) hard core.
class InteriorError : public std::runtime_error {
 public:
  InteriorError(const std::string& what, std::size_t obstacle, double gamma)
      : std::runtime_error(what), obstacle_(obstacle), gamma_(gamma) {}

  std::size_t obstacle() const noexcept { return obstacle_; }
  double gamma() const noexcept { return gamma_; }

 private:
  std::size_t obstacle_;
  double gamma_;
};

}  // namespace softds

#endif  // SOFTDS_TYPES_HPP
