#include <random>

#include <gtest/gtest.h>

#include "coneiter/operators.hpp"

using namespace coneiter;

TEST(Saturating, Values) {
  const auto T = builtin_saturating();
  EXPECT_EQ(T(Vector{0.0})[0], 0.0);
  EXPECT_DOUBLE_EQ(T(Vector{1.0})[0], 0.5);
  EXPECT_NEAR(T(Vector{0.4})[0], 0.2857142857, 1e-10);
  EXPECT_EQ(T.declared_class, OperatorClass::QuasiNonexpansive);
  EXPECT_THROW(builtin_saturating(builtin_r2_matrix({{{1, 0}, {0, 1}}})), ParameterError);
}

TEST(Linear, Values) {
  EXPECT_DOUBLE_EQ(builtin_linear(0.8)(Vector{1.0})[0], 0.8);
  EXPECT_DOUBLE_EQ(builtin_linear(1.0)(Vector{-3.25})[0], -3.25);
  const auto T2 = builtin_linear(0.8, builtin_r2_matrix({{{1, 0}, {0, 1}}}));
  const auto y = T2(Vector{1.0, 2.0});
  EXPECT_DOUBLE_EQ(y[0], 0.8);
  EXPECT_DOUBLE_EQ(y[1], 1.6);
  ASSERT_TRUE(builtin_linear(0.8).weak_consts.has_value());
  EXPECT_DOUBLE_EQ(builtin_linear(0.8).weak_consts->s, 0.8);
}

TEST(ProbeQne, SaturatingAndLinearPass) {
  const auto sat = builtin_saturating();
  EXPECT_TRUE(probe_quasi_nonexpansive(sat, *sat.witness, 10000, 1).passed());
  const auto lin = builtin_linear(0.8);
  EXPECT_TRUE(probe_quasi_nonexpansive(lin, {{Vector{0.0}}}, 10000, 2).passed());
}

TEST(ProbeQne, ExpansionReported) {
  const auto twice = builtin_linear(2.0);
  const auto rep = probe_quasi_nonexpansive(twice, {{Vector{0.0}}}, 500, 3);
  EXPECT_EQ(rep.violation_count, 500);
  EXPECT_EQ(rep.violations.size(), ProbeReport::kRetained);
  for (std::size_t i = 1; i < rep.violations.size(); ++i) EXPECT_GE(rep.violations[i - 1].gap, rep.violations[i].gap);
}

TEST(ProbeQne, BadWitnessReported) {
  const auto sat = builtin_saturating();
  const auto rep = probe_quasi_nonexpansive(sat, {{Vector{1.0}}}, 10, 0);
  ASSERT_FALSE(rep.passed());
  bool found = false;
  for (const auto& v : rep.violations) found = found || v.kind == "fixed_point";
  EXPECT_TRUE(found);
  EXPECT_THROW(probe_quasi_nonexpansive(sat, {}, 10, 0), ParameterError);
}

TEST(ProbeWeak, LinearWithDeclaredConstants) {
  EXPECT_TRUE(probe_weak_contraction(builtin_linear(0.8), {1, 0, 0, 0.8}, 10000, 4).passed());
  const auto rep = probe_weak_contraction(builtin_linear(0.8), {1, 0, 0, 0.5}, 1000, 4);
  EXPECT_EQ(rep.violation_count, 1000);
  EXPECT_THROW(probe_weak_contraction(builtin_linear(0.8), {0, 0, 0, 1}, 10, 0), ParameterError);
}

TEST(ProbeWeak, DegeneratePairHoldsWithEquality) {
  // x = y with b_w = c_w = 0: a * 0 <= s * 0.
  const auto T = builtin_linear(0.8);
  const WeakContractionConsts k{1, 0, 0, 0.8};
  const Vector x{3.0};
  const double lhs = k.a * T.space.scalarize(T(x), T(x));
  const double rhs = k.s * T.space.scalarize(x, x);
  EXPECT_EQ(lhs, 0.0);
  EXPECT_EQ(rhs, 0.0);
}

TEST(ProbeCompat, IdentityPairPasses) {
  const auto space = builtin_scalar_p(1.0);
  const auto pair = make_builtin_pair(builtin_identity(space), builtin_linear(0.8, space));
  EXPECT_DOUBLE_EQ(pair.consts.r, 0.8);
  EXPECT_TRUE(probe_compat(pair, 2000, 5).passed());
}

TEST(ProbeCompat, EqualLinearPairViolates) {
  const auto space = builtin_r2_matrix({{{2, 0}, {0, 1}}});
  const auto pair = parse_pair_spec("S=T=linear:0.8", space);
  const auto rep = probe_compat(pair, 1000, 6);
  EXPECT_FALSE(rep.passed());
  for (const auto& v : rep.violations) {
    EXPECT_EQ(v.kind, "inequality");
    // Delta(Tx,Ty) vs 0.8 Delta(Sx,Sy) with S = T: lhs = rhs / 0.8.
    EXPECT_NEAR(v.lhs * 0.8, v.rhs, 1e-9);
  }
}

TEST(ProbeCompat, BrokenInverseReported) {
  const auto space = builtin_scalar_p(1.0);
  auto pair = make_builtin_pair(builtin_identity(space), builtin_linear(0.8, space));
  pair.solve_S = [](const Vector& y) { return 2.0 * y; };
  const auto rep = probe_compat(pair, 50, 0);
  ASSERT_FALSE(rep.passed());
  EXPECT_EQ(rep.violations.front().kind, "right_inverse");
}

TEST(ProbeCompat, SameXYHolds) {
  const auto space = builtin_scalar_p(1.0);
  const auto pair = make_builtin_pair(builtin_identity(space), builtin_linear(0.8, space));
  const Vector x{2.0};
  EXPECT_EQ(space.scalarize(pair.T(x), pair.T(x)), 0.0);
  EXPECT_EQ(space.scalarize(pair.S(x), pair.S(x)), 0.0);
}

TEST(Probes, DeterministicAndMergeable) {
  const auto twice = builtin_linear(2.0);
  const auto a = probe_quasi_nonexpansive(twice, {{Vector{0.0}}}, 100, 11);
  const auto b = probe_quasi_nonexpansive(twice, {{Vector{0.0}}}, 100, 11);
  EXPECT_EQ(to_json(a), to_json(b));
  auto merged = a;
  merged.merge(probe_quasi_nonexpansive(twice, {{Vector{0.0}}}, 100, 12));
  EXPECT_EQ(merged.samples, 200);
  EXPECT_EQ(merged.violation_count, 200);
  EXPECT_LE(merged.violations.size(), ProbeReport::kRetained);
}

TEST(Parsing, OperatorAndPairSpecs) {
  const auto s = builtin_scalar_p(1.0);
  EXPECT_EQ(parse_operator_spec("linear:0.25", s)(Vector{4.0})[0], 1.0);
  EXPECT_THROW(parse_operator_spec("linear", s), StructuralError);
  EXPECT_THROW(parse_operator_spec("rotate", s), StructuralError);
  const auto p = parse_pair_spec("S=identity,T=linear:0.8", s);
  EXPECT_EQ(p.S(Vector{3.0})[0], 3.0);
  EXPECT_THROW(parse_pair_spec("S=identity", s), StructuralError);
}

// Properties of the saturating map: strict shrinkage and monotonicity.
TEST(SaturatingProperty, ShrinksAndMonotone) {
  const auto T = builtin_saturating();
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> u(-50.0, 50.0);
  for (int k = 0; k < 5000; ++k) {
    double a = u(rng), b = u(rng);
    if (a == 0.0) continue;
    EXPECT_LT(std::abs(T(Vector{a})[0]), std::abs(a));
    if (a > b) std::swap(a, b);
    EXPECT_LE(T(Vector{a})[0], T(Vector{b})[0]);
  }
}

// Delta(Tx, Ty) = q^p Delta(x, y) for the linear map on the scalar p-space.
TEST(LinearProperty, ScalesDistanceByQToThePowerP) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-10.0, 10.0);
  for (double p : {0.3, 0.5, 1.0}) {
    const auto s = builtin_scalar_p(p);
    const auto T = builtin_linear(0.8, s);
    for (int k = 0; k < 500; ++k) {
      const Vector x{u(rng)}, y{u(rng)};
      const double d = s.scalarize(x, y);
      EXPECT_NEAR(s.scalarize(T(x), T(y)), std::pow(0.8, p) * d, 1e-12 * std::max(1.0, d) * 10);
    }
    EXPECT_TRUE(probe_weak_contraction(T, *T.weak_consts, 2000, 8).passed());
  }
}
