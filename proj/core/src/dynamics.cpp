#include <softds/dynamics.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace softds {
namespace {

void require(bool ok, const std::string& msg) {
  if (!ok) throw DomainError(msg);
}

bool is_symmetric(const Matrix& m, double tol = 1e-9) {
  return m.rows() == m.cols() && (m - m.transpose()).cwiseAbs().maxCoeff() <= tol * std::max(1.0, m.cwiseAbs().maxCoeff());
}

double min_symmetric_eigenvalue(const Matrix& m) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(0.5 * (m + m.transpose()), Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

double max_symmetric_eigenvalue(const Matrix& m) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(0.5 * (m + m.transpose()), Eigen::EigenvaluesOnly);
  return solver.eigenvalues().maxCoeff();
}

double max_real_eigenvalue(const Matrix& m) {
  Eigen::EigenSolver<Matrix> solver(m, false);
  return solver.eigenvalues().real().maxCoeff();
}

std::string fmt_double(double v) {
  std::ostringstream os;
  os.precision(10);
  os << v;
  return os.str();
}

}  // namespace

int dim(const DynamicalSystem& ds) { return static_cast<int>(attractor(ds).size()); }

const Vector& attractor(const DynamicalSystem& ds) {
  return std::visit([](const auto& sys) -> const Vector& { return sys.attractor; }, ds);
}

void validate(const LinearDS& ds) {
  const auto d = ds.attractor.size();
  require(d >= 1, "attractor: must be non-empty");
  require(ds.gain.rows() == d && ds.gain.cols() == d, "gain_matrix: must be d x d");
  require(max_real_eigenvalue(ds.gain) < 0.0, "gain_matrix: eigenvalues must have negative real parts");
}

void validate(const LpvDS& ds) {
  const auto d = ds.attractor.size();
  require(d >= 1, "attractor: must be non-empty");
  require(!ds.components.empty(), "components: at least one component required");
  require(ds.lyapunov.rows() == d && ds.lyapunov.cols() == d, "P: must be d x d");
  require(is_symmetric(ds.lyapunov), "P: must be symmetric");
  double prior_sum = 0.0;
  for (std::size_t k = 0; k < ds.components.size(); ++k) {
    const auto& c = ds.components[k];
    const std::string path = "components[" + std::to_string(k) + "]";
    require(c.prior >= 0.0, path + ".prior: must be >= 0");
    require(c.mean.size() == d, path + ".mean: dimension mismatch");
    require(c.covariance.rows() == d && c.covariance.cols() == d, path + ".covariance: must be d x d");
    require(is_symmetric(c.covariance), path + ".covariance: must be symmetric");
    require(min_symmetric_eigenvalue(c.covariance) > 0.0, path + ".covariance: must be positive-definite");
    require(c.gain.rows() == d && c.gain.cols() == d, path + ".A: must be d x d");
    require(c.offset.size() == d, path + ".b: dimension mismatch");
    prior_sum += c.prior;
  }
  require(std::abs(prior_sum - 1.0) <= 1e-9, "components: priors must sum to 1");
}

void reproject_offsets(LpvDS& ds) {
  for (auto& c : ds.components) c.offset = -c.gain * ds.attractor;
}

Vector eval_linear(const LinearDS& ds, const Vector& x) { return ds.gain * (x - ds.attractor); }

std::vector<double> mixing_weights(const LpvDS& ds, const Vector& x) {
  const auto n = ds.components.size();
  const auto d = static_cast<double>(x.size());
  std::vector<double> log_w(n);
  std::vector<double> mahalanobis(n);
  for (std::size_t k = 0; k < n; ++k) {
    const auto& c = ds.components[k];
    const Eigen::LLT<Matrix> llt(c.covariance);
    const Vector z = llt.matrixL().solve(x - c.mean);
    const double log_det = 2.0 * llt.matrixL().toDenseMatrix().diagonal().array().log().sum();
    mahalanobis[k] = z.squaredNorm();
    const double log_prior = c.prior > 0.0 ? std::log(c.prior) : -std::numeric_limits<double>::infinity();
    log_w[k] = log_prior - 0.5 * (mahalanobis[k] + log_det + d * std::log(2.0 * std::numbers::pi));
  }
  const double max_log = *std::max_element(log_w.begin(), log_w.end());
  std::vector<double> w(n, 0.0);
  if (!(max_log >= kLogDensityFloor)) {
    // Far field: one-hot on the nearest component with nonzero prior.
    std::size_t best = n;
    for (std::size_t k = 0; k < n; ++k) {
      if (ds.components[k].prior <= 0.0) continue;
      if (best == n || mahalanobis[k] < mahalanobis[best]) best = k;
    }
    w[best == n ? 0 : best] = 1.0;
    return w;
  }
  double total = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    w[k] = std::exp(log_w[k] - max_log);
    total += w[k];
  }
  for (auto& v : w) v /= total;
  return w;
}

Vector eval_lpv(const LpvDS& ds, const Vector& x) {
  if (x == ds.attractor) return Vector::Zero(x.size());
  const auto w = mixing_weights(ds, x);
  Vector out = Vector::Zero(x.size());
  for (std::size_t k = 0; k < w.size(); ++k) {
    if (w[k] == 0.0) continue;
    const auto& c = ds.components[k];
    out += w[k] * (c.gain * x + c.offset);
  }
  return out;
}

Vector evaluate(const DynamicalSystem& ds, const Vector& x) {
  if (const auto* lin = std::get_if<LinearDS>(&ds)) return eval_linear(*lin, x);
  return eval_lpv(std::get<LpvDS>(ds), x);
}

double lyapunov_value(const Matrix& P, const Vector& x, const Vector& attractor) {
  const Vector e = x - attractor;
  return e.dot(P * e);
}

StabilityReport validate_stability(const LpvDS& ds) {
  StabilityReport report;
  const double p_min = min_symmetric_eigenvalue(ds.lyapunov);
  report.checks.push_back({"P.positive_definite", p_min > 0.0 && is_symmetric(ds.lyapunov), p_min,
                           "min eigenvalue of P = " + fmt_double(p_min)});
  for (std::size_t k = 0; k < ds.components.size(); ++k) {
    const auto& c = ds.components[k];
    const Matrix sym = c.gain.transpose() * ds.lyapunov + ds.lyapunov * c.gain;
    const double lam = max_symmetric_eigenvalue(sym);
    const bool ok = lam < -kNegDefTolerance;
    report.checks.push_back({"component[" + std::to_string(k) + "].lyapunov_decrease", ok, lam,
                             "max eigenvalue of A^T P + P A = " + fmt_double(lam)});
    if (!ok) report.failing_components.push_back(static_cast<int>(k));
    const double residual = (c.gain * ds.attractor + c.offset).norm();
    report.checks.push_back({"component[" + std::to_string(k) + "].equilibrium", residual <= kConsistencyTolerance,
                             residual, "|A x* + b| = " + fmt_double(residual)});
  }
  report.passed = std::all_of(report.checks.begin(), report.checks.end(), [](const auto& c) { return c.passed; });
  return report;
}

StabilityReport validate_stability(const LinearDS& ds) {
  StabilityReport report;
  const double lam = max_real_eigenvalue(ds.gain);
  const bool ok = lam < -kNegDefTolerance;
  report.checks.push_back({"gain.hurwitz", ok, lam, "max real eigenvalue of A = " + fmt_double(lam)});
  if (!ok) report.failing_components.push_back(0);
  report.passed = ok;
  return report;
}

StabilityReport validate_stability(const DynamicalSystem& ds) {
  return std::visit([](const auto& sys) { return validate_stability(sys); }, ds);
}

}  // namespace softds
