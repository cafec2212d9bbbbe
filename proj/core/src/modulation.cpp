#include <softds/modulation.hpp>

#include <algorithm>
#include <cmath>
#include <string>

namespace softds {
namespace {

Matrix assemble_basis(const Vector& ref_dir, const Vector& normal) {
  const auto d = ref_dir.size();
  Matrix basis(d, d);
  basis.col(0) = ref_dir;
  basis.rightCols(d - 1) = tangent_basis(normal);
  if (std::abs(basis.determinant()) < kSingularBasisTolerance) {
    throw SingularBasisError("basis_matrix: reference direction is parallel to the tangent plane");
  }
  return basis;
}

}  // namespace

std::string_view to_string(BlendRule rule) {
  switch (rule) {
    case BlendRule::GammaProduct: return "gamma_product";
    case BlendRule::Nearest: return "nearest";
  }
  return "unknown";
}

BlendRule blend_rule_from_string(std::string_view name) {
  if (name == "gamma_product") return BlendRule::GammaProduct;
  if (name == "nearest") return BlendRule::Nearest;
  throw DomainError("unknown blend rule '" + std::string(name) + "'");
}

std::pair<double, double> eigenvalue_pair(double gamma) {
  if (!(gamma >= 1.0)) throw DomainError("eigenvalue_pair: Γ must be >= 1, got " + std::to_string(gamma));
  const double inv = 1.0 / gamma;
  return {1.0 - inv, 1.0 + inv};
}

Matrix basis_matrix(const Obstacle& obs, const Vector& x) {
  return assemble_basis(reference_direction(obs, x), gamma_gradient(obs, x));
}

ModulationResult modulation_matrix(const Obstacle& obs, const Vector& x) {
  const auto d = x.size();
  const Vector scaled = to_obstacle_frame(obs, x).cwiseQuotient(obs.safety_factor);
  const double g = detail::local_gamma(obs.hard_semi_axes, obs.exponent, scaled);
  if (g < 1.0 - kInteriorTolerance) {
    throw InteriorError("modulation_matrix: point inside the hard core (Γ = " + std::to_string(g) + ")", 0, g);
  }

  ModulationResult out;
  out.gamma_used = std::max(g, 1.0 + kGammaClampMargin);
  const auto [lambda_r, lambda_e] = eigenvalue_pair(out.gamma_used);
  out.lambda_r = lambda_r;
  out.lambda_e = Vector::Constant(d - 1, lambda_e);

  // Chain rule through x -> R^T (x - c) / η.
  const Vector local_grad =
      detail::local_gamma_gradient(obs.hard_semi_axes, obs.exponent, scaled).cwiseQuotient(obs.safety_factor);
  out.basis = assemble_basis(reference_direction(obs, x), rotation(obs) * local_grad);

  Vector diag(d);
  diag(0) = lambda_r;
  diag.tail(d - 1) = out.lambda_e;
  out.eigenvalues = diag.asDiagonal();
  out.modulation = out.basis * out.eigenvalues * out.basis.inverse();
  return out;
}

Vector modulate_static(const Obstacle& obs, const Vector& f, const Vector& x) {
  return modulation_matrix(obs, x).modulation * f;
}

Vector obstacle_point_velocity(const Obstacle& obs, const Vector& x) {
  Vector v = obs.linear_velocity;
  if (obs.angular_velocity != 0.0 && x.size() == 2) {
    const Vector rel = x - obs.center;
    v(0) -= obs.angular_velocity * rel(1);
    v(1) += obs.angular_velocity * rel(0);
  }
  return v;
}

Vector modulate_moving(const Obstacle& obs, const Vector& f, const Vector& x) {
  if (!obs.is_moving()) return modulate_static(obs, f, x);
  const Vector v = obstacle_point_velocity(obs, x);
  return modulation_matrix(obs, x).modulation * (f - v) + v;
}

std::vector<double> blend_weights(std::span<const double> gammas, BlendRule rule) {
  const auto n = gammas.size();
  std::vector<double> w(n, 0.0);
  if (n == 0) return w;
  if (n == 1) {
    w[0] = 1.0;
    return w;
  }
  if (rule == BlendRule::Nearest) {
    w[std::distance(gammas.begin(), std::min_element(gammas.begin(), gammas.end()))] = 1.0;
    return w;
  }
  // Obstacles touched at Γ <= 1 take all the weight (the product formula
  // zeroes every other term).
  const auto touching = std::count_if(gammas.begin(), gammas.end(), [](double g) { return g <= 1.0; });
  if (touching > 0) {
    for (std::size_t i = 0; i < n; ++i) w[i] = gammas[i] <= 1.0 ? 1.0 / static_cast<double>(touching) : 0.0;
    return w;
  }
  // prod_{m != n}(Γ^m - 1) normalized equals (1/(Γ^n - 1)) normalized while
  // every Γ^m > 1.
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    w[i] = 1.0 / (gammas[i] - 1.0);
    total += w[i];
  }
  for (auto& v : w) v /= total;
  return w;
}

Vector combine_multi(std::span<const Obstacle> obstacles, const Vector& f, const Vector& x, BlendRule rule) {
  if (obstacles.empty()) return f;
  std::vector<double> gammas;
  std::vector<Vector> velocities;
  gammas.reserve(obstacles.size());
  velocities.reserve(obstacles.size());
  for (std::size_t i = 0; i < obstacles.size(); ++i) {
    const Obstacle& obs = obstacles[i];
    try {
      const ModulationResult mod = modulation_matrix(obs, x);
      if (obs.is_moving()) {
        const Vector v = obstacle_point_velocity(obs, x);
        velocities.push_back(mod.modulation * (f - v) + v);
      } else {
        velocities.push_back(mod.modulation * f);
      }
      gammas.push_back(mod.gamma_used);
    } catch (const InteriorError& e) {
      throw InteriorError("obstacle " + std::to_string(i) + ": " + e.what(), i, e.gamma());
    }
  }
  if (obstacles.size() == 1) return velocities.front();
  const auto w = blend_weights(gammas, rule);
  Vector out = Vector::Zero(x.size());
  for (std::size_t i = 0; i < w.size(); ++i) out += w[i] * velocities[i];
  return out;
}

}  // namespace softds
