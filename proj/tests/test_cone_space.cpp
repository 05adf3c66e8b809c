#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "coneiter/cone_space.hpp"

using namespace coneiter;

TEST(ConeSpace, ScalarSqrtScalarizesToRoot) {
  const auto s = builtin_scalar_p(0.5);
  EXPECT_DOUBLE_EQ(scalarize(s, Vector{4.0}, Vector{0.0}), 2.0);
  EXPECT_DOUBLE_EQ(s.cone_norm(Vector{0.25}).components[0], 0.5);
}

TEST(ConeSpace, ScalarizeSelfIsZero) {
  const auto s1 = builtin_scalar_p(0.3);
  const auto s2 = builtin_r2_matrix({{{1.0, 2.0}, {3.0, 4.0}}});
  EXPECT_EQ(scalarize(s1, Vector{-3.7}, Vector{-3.7}), 0.0);
  EXPECT_EQ(scalarize(s2, Vector{1.5, -2.0}, Vector{1.5, -2.0}), 0.0);
}

TEST(ConeSpace, R2IdentityScalarization) {
  const auto s = builtin_r2_matrix({{{1.0, 0.0}, {0.0, 1.0}}});
  EXPECT_NEAR(scalarize(s, Vector{3.0, 4.0}, Vector{0.0, 0.0}), 5.0 * std::sqrt(2.0), 1e-12);
  EXPECT_NEAR(scalarize(s, Vector{3.0, 4.0}, Vector{0.0, 0.0}), 7.0710678, 1e-7);
}

TEST(ConeSpace, R2ConeNormComponents) {
  const auto zero = builtin_r2_matrix({{{0.0, 0.0}, {0.0, 0.0}}});
  auto d = zero.cone_norm(Vector{1.0, 0.0});
  EXPECT_DOUBLE_EQ(d.components[0], 1.0);
  EXPECT_DOUBLE_EQ(d.components[1], 0.0);

  const auto id = builtin_r2_matrix({{{1.0, 0.0}, {0.0, 1.0}}});
  d = id.cone_norm(Vector{1.0, 1.0});
  EXPECT_DOUBLE_EQ(d.components[0], std::sqrt(2.0));
  EXPECT_DOUBLE_EQ(d.components[1], std::sqrt(2.0));

  const auto diag = builtin_r2_matrix({{{2.0, 0.0}, {0.0, 1.0}}});
  d = diag.cone_norm(Vector{1.0, 1.0});
  EXPECT_DOUBLE_EQ(d.components[0], std::sqrt(2.0));
  EXPECT_DOUBLE_EQ(d.components[1], std::sqrt(5.0));
}

TEST(ConeSpace, PEqualsOneIsAbsoluteValue) {
  const auto s = builtin_scalar_p(1.0);
  EXPECT_DOUBLE_EQ(s.cone_norm(Vector{-2.5}).components[0], 2.5);
  EXPECT_EQ(s.b(), 1.0);
  EXPECT_EQ(s.kappa(), 1.0);
}

TEST(ConeSpace, SqrtSubadditiveGivesBOne) {
  const auto s = builtin_scalar_p(0.5);
  const double lhs = s.cone_norm(Vector{2.0}).components[0];
  EXPECT_NEAR(lhs, 1.41421, 1e-5);
  EXPECT_LE(lhs, s.cone_norm(Vector{1.0}).components[0] + s.cone_norm(Vector{1.0}).components[0]);
}

TEST(ConeSpace, RejectsBadParameters) {
  EXPECT_THROW(builtin_scalar_p(0.0), ParameterError);
  EXPECT_THROW(builtin_scalar_p(1.5), ParameterError);
  EXPECT_THROW(builtin_r2_matrix({{{NAN, 0.0}, {0.0, 1.0}}}), ParameterError);
  auto norm = [](const Vector& x) { return ConeValue{{std::abs(x[0])}}; };
  EXPECT_THROW(ConeBpSpace(1, norm, 0.5, 1.0, 1.0), ParameterError);
  EXPECT_THROW(ConeBpSpace(1, norm, 1.0, 1.0, 0.9), ParameterError);
}

TEST(ConeSpace, DimensionMismatchIsStructural) {
  const auto s = builtin_r2_matrix({{{1.0, 0.0}, {0.0, 1.0}}});
  EXPECT_THROW(scalarize(s, Vector{1.0, 2.0}, Vector{1.0}), StructuralError);
  EXPECT_THROW(scalarize(s, Vector{1.0}, Vector{1.0}), StructuralError);
}

TEST(ConeSpace, ScalarizationIsPHomogeneous) {
  // Delta(tau x, 0) = tau^p Delta(x, 0), not tau Delta(x, 0).
  const auto s = builtin_scalar_p(0.5);
  EXPECT_NEAR(s.magnitude(4.0 * Vector{9.0}), 2.0 * s.magnitude(Vector{9.0}), 1e-12);
}

TEST(ConeSpace, SpecStringsParse) {
  EXPECT_EQ(parse_space_spec("scalar_p:0.5").p(), 0.5);
  EXPECT_EQ(parse_space_spec("r2_matrix:2,0,0,1").dim(), 2u);
  EXPECT_THROW(parse_space_spec("hilbert"), StructuralError);
  EXPECT_THROW(parse_space_spec("r2_matrix:1,2"), StructuralError);
}

TEST(ConeSpace, DescriptorRoundTrip) {
  const auto s = builtin_r2_matrix({{{2.0, 1.0}, {0.0, 3.0}}});
  const auto t = space_from_descriptor(s.descriptor());
  const Vector x{0.3, -1.7};
  EXPECT_EQ(s.magnitude(x), t.magnitude(x));
}

TEST(Axioms, BuiltinsPass) {
  for (double p : {0.3, 0.5, 1.0}) {
    const auto rep = check_axioms(builtin_scalar_p(p), 10000, 42);
    EXPECT_TRUE(rep.passed()) << to_json(rep).dump();
    EXPECT_EQ(rep.axioms.size(), 4u);
    EXPECT_EQ(rep.axiom("iii").samples, 10000);
  }
  const auto rep = check_axioms(builtin_r2_matrix({{{1.0, -2.0}, {0.5, 3.0}}}), 10000, 43);
  EXPECT_TRUE(rep.passed()) << to_json(rep).dump();
}

TEST(Axioms, BrokenNormCounterexampleAtZero) {
  auto broken = [](const Vector& x) { return ConeValue{{std::abs(x[0]) - 1.0}}; };
  const ConeBpSpace s(1, broken, 1.0, 1.0, 1.0);
  const auto rep = check_axioms(s, 200, 1);
  const auto& ax = rep.axiom("i");
  ASSERT_GT(ax.failures, 0);
  ASSERT_TRUE(ax.worst.has_value());
  EXPECT_EQ(ax.worst->inputs["x"], nlohmann::json::array({0.0}));
  EXPECT_DOUBLE_EQ(ax.worst->violation, 1.0);
  EXPECT_FALSE(rep.passed());
}

TEST(Axioms, TriangleViolationWithTooSmallB) {
  // |x|^2 is not subadditive; it needs b = 2.
  auto sq = [](const Vector& x) { return ConeValue{{x[0] * x[0]}}; };
  const ConeBpSpace s(1, sq, 1.0, 1.0, 1.0);
  const auto rep = check_axioms(s, 500, 3);
  EXPECT_GT(rep.axiom("iii").failures, 0);
  EXPECT_GT(rep.axiom("iv").failures, 0);  // homogeneity degree 2, not p = 1
}

TEST(Axioms, ReportJsonShape) {
  const auto j = to_json(check_axioms(builtin_scalar_p(0.5), 10, 0));
  ASSERT_EQ(j.size(), 4u);
  EXPECT_EQ(j[0]["axiom"], "i");
  EXPECT_EQ(j[2]["samples"], 10);
  EXPECT_TRUE(j[3]["worst"].is_null());
}

TEST(Axioms, DeterministicForSeed) {
  auto sq = [](const Vector& x) { return ConeValue{{x[0] * x[0]}}; };
  const ConeBpSpace s(1, sq, 1.0, 1.0, 1.0);
  EXPECT_EQ(to_json(check_axioms(s, 300, 9)), to_json(check_axioms(s, 300, 9)));
}

// Property: triangle and homogeneity hold for sampled points in every builtin.
TEST(ConeSpaceProperty, TriangleHomogeneityTranslation) {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> u(-10.0, 10.0), tau(0.0, 5.0), pd(0.05, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    const ConeBpSpace s = trial % 2 ? builtin_scalar_p(pd(rng))
                                    : builtin_r2_matrix({{{u(rng), u(rng)}, {u(rng), u(rng)}}});
    for (int k = 0; k < 200; ++k) {
      Vector x(s.dim()), y(s.dim()), z(s.dim());
      for (std::size_t i = 0; i < s.dim(); ++i) {
        x[i] = u(rng);
        y[i] = u(rng);
        z[i] = u(rng);
      }
      const double t = tau(rng);
      EXPECT_LE(s.magnitude(x + y), s.kappa_b() * (s.magnitude(x) + s.magnitude(y)) + 1e-9);
      const auto dtx = s.cone_norm(t * x);
      const auto scaled = std::pow(t, s.p()) * s.cone_norm(x);
      double diff = 0.0;
      for (std::size_t i = 0; i < dtx.dim(); ++i)
        diff += (dtx.components[i] - scaled.components[i]) * (dtx.components[i] - scaled.components[i]);
      EXPECT_LE(std::sqrt(diff), 1e-9 * (1.0 + s.magnitude(x)));
      const double d0 = s.scalarize(x, y);
      EXPECT_NEAR(s.scalarize(x + z, y + z), d0, 1e-12 * std::max(1.0, d0) * 100);
    }
  }
}

// Property: the Euclidean norm is monotone on R_+^k (normality with kappa = 1).
TEST(ConeSpaceProperty, MonotoneAmbientNorm) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 10.0);
  for (int k = 0; k < 1000; ++k) {
    ConeValue a{{u(rng), u(rng), u(rng)}};
    ConeValue b{{a.components[0] + u(rng), a.components[1] + u(rng), a.components[2]}};
    ASSERT_TRUE(a.leq(b));
    EXPECT_LE(a.norm(), b.norm());
  }
}

TEST(VectorOps, BasicAlgebra) {
  const Vector a{1.0, 2.0}, b{3.0, -1.0};
  EXPECT_EQ(a + b, (Vector{4.0, 1.0}));
  EXPECT_EQ(1.0 * a, a);
  EXPECT_EQ(0.0 * a, Vector::zero(2));
  EXPECT_TRUE(approx_equal((a + b) + a, a + (b + a)));
  EXPECT_THROW(a + Vector{1.0}, StructuralError);
}
