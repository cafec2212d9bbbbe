#include "test_support.hpp"

#include <gtest/gtest.h>

#include <numbers>

using namespace softds;
using softds::test::vec;

namespace {

constexpr double kPi = std::numbers::pi;

Obstacle unit_circle(double k = 1.0) {
  return with_stiffness(make_obstacle(vec(0, 0), vec(1, 1)), k);
}

}  // namespace

TEST(Stiffness, TableOneCottonLayer) {
  EXPECT_NEAR(stiffness_coefficient(4.0, 6.0), std::exp(0.5), 1e-15);
  EXPECT_NEAR(stiffness_coefficient(4.0, 6.0), 1.64872, 1e-5);
}

TEST(Stiffness, EqualExtentsAreExactlyRigid) {
  EXPECT_EQ(stiffness_coefficient(5.0, 5.0), 1.0);
  EXPECT_TRUE(make_obstacle(vec(0, 0), vec(5, 5), 1.0).is_rigid());
}

TEST(Stiffness, RejectsSoftSmallerThanHard) {
  EXPECT_THROW(stiffness_coefficient(2.0, 0.0), DomainError);
  EXPECT_THROW(stiffness_coefficient(0.0, 1.0), DomainError);
}

TEST(Stiffness, WithStiffnessRoundTrips) {
  const Obstacle o = unit_circle(std::exp(0.5));
  EXPECT_DOUBLE_EQ(o.soft_ratio, 1.5);
  EXPECT_NEAR(o.stiffness(), std::exp(0.5), 1e-15);
  EXPECT_THROW(with_stiffness(o, 0.9), DomainError);
}

TEST(ObstacleValidation, NamesTheOffendingField) {
  Obstacle o = unit_circle();
  o.soft_ratio = 0.9;
  try {
    validate(o);
    FAIL() << "expected a domain error";
  } catch (const DomainError& e) {
    EXPECT_NE(std::string(e.what()).find("soft_ratio"), std::string::npos);
  }
  o = unit_circle();
  o.reference_point = vec(1.5, 0);
  EXPECT_THROW(validate(o), DomainError);
  o = unit_circle();
  o.safety_factor = vec(0.5, 1.0);
  EXPECT_THROW(validate(o), DomainError);
  o = unit_circle();
  o.exponent = 0;
  EXPECT_THROW(validate(o), DomainError);
}

TEST(Gamma, UnitCircle) { EXPECT_DOUBLE_EQ(gamma(unit_circle(), vec(2, 0)), 4.0); }

TEST(Gamma, EllipseBoundaryPoint) {
  EXPECT_DOUBLE_EQ(gamma(make_obstacle(vec(0, 0), vec(2, 1)), vec(2, 0)), 1.0);
}

TEST(Gamma, RotatedEllipseMatchesIndependentRotation) {
  const Obstacle o = make_obstacle(vec(0, 0), vec(2, 1), 1.0, kPi / 2);
  EXPECT_NEAR(gamma(o, vec(1, 0)), 1.0, 1e-12);
  // Oracle: undo the frame rotation by hand.
  const Eigen::Vector2d local = test::rot(-kPi / 2) * Eigen::Vector2d(1, 0);
  EXPECT_NEAR(gamma(o, vec(1, 0)), std::pow(local(0) / 2, 2) + std::pow(local(1) / 1, 2), 1e-12);
}

TEST(GammaSoft, SoftBoundaryAndRigidCase) {
  EXPECT_NEAR(gamma_soft(unit_circle(std::exp(0.5)), vec(1.5, 0)), 1.0, 1e-12);
  EXPECT_NEAR(gamma_soft(unit_circle(std::exp(0.5)), vec(3, 0)), 4.0, 1e-12);
  const Obstacle rigid = make_obstacle(vec(0.3, -1), vec(2, 0.5), 1.0, 0.4);
  for (double t = 0.0; t < 6.0; t += 0.37) {
    const Vector x = vec(3 * std::cos(t), 2 * std::sin(t));
    EXPECT_EQ(gamma_soft(rigid, x), gamma(rigid, x));
  }
}

TEST(GammaSoft, ScalingIdentity) {
  test::ExteriorSampler sampler(3, -5, 5);
  for (int p : {1, 2}) {
    for (double k : {1.0, 1.3, std::exp(0.5), 5.0}) {
      Obstacle o = with_stiffness(make_obstacle(vec(0.5, 0.2), vec(1.2, 0.7), 1.0, 0.8, p), k);
      for (int i = 0; i < 50; ++i) {
        const Vector x = vec(sampler.uniform(), sampler.uniform());
        const double lhs = gamma_soft(o, x) * std::pow(std::log(k) + 1.0, 2 * p);
        EXPECT_NEAR(lhs, gamma(o, x), 1e-12 * std::max(1.0, gamma(o, x)));
      }
    }
  }
}

TEST(Gamma, MonotoneAlongRays) {
  const Obstacle o = make_obstacle(vec(1, -1), vec(1.5, 0.5), 1.0, 1.1, 2);
  for (double a = 0.0; a < 2 * kPi; a += 0.1) {
    const Vector u = vec(std::cos(a), std::sin(a));
    double prev = 0.0;
    for (double s = 0.05; s < 6.0; s += 0.05) {
      const double g = gamma(o, o.center + s * u);
      EXPECT_LT(prev, g);
      prev = g;
    }
  }
}

TEST(Gamma, BoundaryExactness) {
  const double k = std::exp(0.7);
  const Obstacle o = with_stiffness(make_obstacle(vec(-0.4, 2), vec(2, 0.8), 1.0, -0.6), k);
  const Eigen::Matrix2d R = test::rot(-0.6);
  const double s = std::log(k) + 1.0;
  for (int i = 0; i < 1000; ++i) {
    const double t = 2 * kPi * i / 1000.0;
    const Eigen::Vector2d local(2 * std::cos(t), 0.8 * std::sin(t));
    const Vector hard = o.center + Vector(R * local);
    const Vector soft = o.center + Vector(R * (s * local));
    EXPECT_NEAR(gamma(o, hard), 1.0, 1e-9);
    EXPECT_NEAR(gamma_soft(o, soft), 1.0, 1e-9);
  }
}

TEST(Gamma, FrameInvariance) {
  const Obstacle base = make_obstacle(vec(1, 2), vec(1.5, 0.5), 1.0, 0.2);
  for (double a : {0.3, -1.2, 2.5}) {
    Obstacle turned = base;
    turned.orientation += a;
    for (double t = 0.0; t < 6.0; t += 0.5) {
      const Eigen::Vector2d offset(2 * std::cos(t), 1.3 * std::sin(t));
      const Vector x = base.center + Vector(offset);
      const Vector y = base.center + Vector(test::rot(a) * offset);
      EXPECT_NEAR(gamma(base, x), gamma(turned, y), 1e-12 * gamma(base, x));
    }
  }
}

TEST(GammaGradient, AxisExamples) {
  EXPECT_TRUE(gamma_gradient(unit_circle(), vec(2, 0)).isApprox(vec(4, 0), 1e-15));
  EXPECT_TRUE(gamma_gradient(unit_circle(), vec(0, 3)).isApprox(vec(0, 6), 1e-15));
  EXPECT_THROW(gamma_gradient(unit_circle(), vec(0, 0)), DegeneratePointError);
}

TEST(GammaGradient, MatchesFiniteDifferences) {
  test::ExteriorSampler sampler(5, -4, 4);
  for (int p : {1, 2}) {
    for (double theta : {0.0, kPi / 4, -1.3}) {
      const std::vector<Obstacle> obs{make_obstacle(vec(0.2, -0.1), vec(2, 1), 1.0, theta, p)};
      for (int i = 0; i < 100; ++i) {
        const Vector x = sampler.draw(obs);
        const Vector fd = test::numeric_gradient([&](const Vector& y) { return gamma(obs[0], y); }, x);
        const Vector an = gamma_gradient(obs[0], x);
        EXPECT_LE((an - fd).norm(), 1e-5 * an.norm()) << "p=" << p << " theta=" << theta;
      }
    }
  }
}

TEST(ReferenceDirection, Examples) {
  Obstacle o = unit_circle();
  EXPECT_TRUE(reference_direction(o, vec(3, 0)).isApprox(vec(1, 0)));
  EXPECT_NEAR((reference_direction(o, vec(1, 1)) - vec(std::sqrt(0.5), std::sqrt(0.5))).norm(), 0.0, 1e-15);
  o = make_obstacle(vec(1, 1), vec(1, 1));
  EXPECT_TRUE(reference_direction(o, vec(1, 2)).isApprox(vec(0, 1)));
  EXPECT_THROW(reference_direction(o, vec(1, 1)), DegeneratePointError);
}

TEST(TangentBasis, PlanarConvention) {
  EXPECT_TRUE(tangent_basis(vec(1, 0)).isApprox(Matrix(vec(0, 1))));
  EXPECT_TRUE(tangent_basis(vec(0, 2)).isApprox(Matrix(vec(-1, 0))));
  EXPECT_THROW(tangent_basis(vec(0, 0)), DegeneratePointError);
}

TEST(TangentBasis, ThreeDimensionalIsOrthonormal) {
  std::mt19937 rng(9);
  std::normal_distribution<double> n(0.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    const Vector normal = trial == 0 ? Vector{{0.0, 0.0, 1.0}} : Vector{{n(rng), n(rng), n(rng)}};
    const Matrix E = tangent_basis(normal);
    ASSERT_EQ(E.rows(), 3);
    ASSERT_EQ(E.cols(), 2);
    EXPECT_TRUE((E.transpose() * E).isApprox(Matrix::Identity(2, 2), 1e-12));
    EXPECT_LE((E.transpose() * normal).norm(), 1e-12 * normal.norm());
  }
  EXPECT_EQ(tangent_basis(Vector{{0.0, 0.0, 1.0}}), tangent_basis(Vector{{0.0, 0.0, 1.0}}));
}

TEST(TangentBasis, OrthogonalToGammaGradient) {
  const std::vector<Obstacle> obs{make_obstacle(vec(0, 0), vec(2, 0.5), 1.0, 0.9, 2)};
  test::ExteriorSampler sampler(21, -4, 4);
  for (int i = 0; i < 200; ++i) {
    const Vector x = sampler.draw(obs);
    const Vector g = gamma_gradient(obs[0], x);
    const Matrix E = tangent_basis(g);
    EXPECT_LE(std::abs(E.col(0).dot(g)), 1e-12 * g.norm());
    EXPECT_NEAR(E.col(0).norm(), 1.0, 1e-12);
  }
}

TEST(Regions, Classification) {
  const Obstacle o = unit_circle(std::exp(0.5));
  EXPECT_EQ(classify_region(o, vec(1.2, 0)), RegionLabel::SoftRegion);
  EXPECT_EQ(classify_region(o, vec(5, 0)), RegionLabel::Exterior);
  EXPECT_EQ(classify_region(o, vec(0.5, 0)), RegionLabel::HardInterior);
  EXPECT_EQ(classify_region(o, vec(1, 0)), RegionLabel::HardBoundary);
  EXPECT_EQ(classify_region(o, vec(1.5, 0)), RegionLabel::SoftBoundary);
  EXPECT_THROW(classify_region(o, vec(1, 0), 0.0), DomainError);
}

TEST(Regions, RigidObstacleHasNoSoftRegion) {
  const Obstacle o = unit_circle();
  for (double r = 1.001; r < 3.0; r += 0.01) EXPECT_NE(classify_region(o, vec(r, 0)), RegionLabel::SoftRegion);
}

TEST(Regions, LabelsAgreeWithGammaValues) {
  const Obstacle o = with_stiffness(make_obstacle(vec(0, 0), vec(1.5, 0.6), 1.0, 0.4), std::exp(0.8));
  test::ExteriorSampler sampler(2, -4, 4);
  for (int i = 0; i < 2000; ++i) {
    const Vector x = vec(sampler.uniform(), sampler.uniform());
    const double g = gamma(o, x), gk = gamma_soft(o, x);
    const RegionLabel l = classify_region(o, x);
    if (g < 1 - 1e-9) EXPECT_EQ(l, RegionLabel::HardInterior);
    if (g > 1 + 1e-9 && gk < 1 - 1e-9) EXPECT_EQ(l, RegionLabel::SoftRegion);
    if (gk > 1 + 1e-9) EXPECT_EQ(l, RegionLabel::Exterior);
  }
}

TEST(Regions, LabelNames) {
  EXPECT_EQ(to_string(RegionLabel::SoftRegion), "soft_region");
  EXPECT_EQ(to_string(RegionLabel::HardInterior), "hard_interior");
}

TEST(Intersection, TwoUnitCircles) {
  const Obstacle a = with_stiffness(make_obstacle(vec(-1, 0), vec(1, 1)), std::exp(0.5));
  const Obstacle b = with_stiffness(make_obstacle(vec(1, 0), vec(1, 1)), std::exp(0.5));
  const Vector x = vec(0, 0.3);
  // Oracle values evaluated directly.
  EXPECT_NEAR(gamma(a, x), 1.09, 1e-12);
  EXPECT_NEAR(gamma_soft(b, x), 1.09 / 2.25, 1e-12);
  EXPECT_TRUE(in_intersection(a, b, x));
  EXPECT_FALSE(in_intersection(a, b, vec(4, 0)));
  EXPECT_FALSE(in_intersection(a, b, vec(1, 0)));
  EXPECT_TRUE(soft_shells_overlap(a, b));
  const Obstacle far = with_stiffness(make_obstacle(vec(6, 0), vec(1, 1)), std::exp(0.5));
  EXPECT_FALSE(soft_shells_overlap(a, far));
}
