#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "copolyap/poly.hpp"
#include "test_helpers.hpp"

namespace copolyap {
namespace {

using testing::make_poly;
using testing::vec;

TEST(PolyEval, QuadraticAtOnes) { EXPECT_DOUBLE_EQ(testing::ex5_h()(vec({1, 1})), 3.0); }

TEST(PolyEval, ZeroPolynomial) {
  const Poly z(2, 3);
  EXPECT_EQ(z(vec({2.5, -1})), 0.0);
  EXPECT_EQ(eval(z, vec({0, 0})), 0.0);
}

TEST(PolyEval, CubicExpansion) { EXPECT_DOUBLE_EQ(testing::ex6_h()(vec({1, 2})), 14.0); }

TEST(PolyEval, DimensionMismatchThrows) { EXPECT_THROW(testing::ex5_h()(vec({1, 2, 3})), DimensionError); }

TEST(PolyStructure, NoStoredZeros) {
  Poly p = make_poly(2, {{{1, 1}, 2.0}});
  p.add_term(Monomial({1, 1}), -2.0);
  EXPECT_TRUE(p.is_zero());
  EXPECT_EQ(p.size(), 0u);
}

TEST(PolyStructure, GrlexOrderDescending) {
  const auto monos = monomials_of_degree(2, 2);
  ASSERT_EQ(monos.size(), 3u);
  EXPECT_EQ(monos[0].exponents, (std::vector<int>{2, 0}));
  EXPECT_EQ(monos[1].exponents, (std::vector<int>{1, 1}));
  EXPECT_EQ(monos[2].exponents, (std::vector<int>{0, 2}));
  EXPECT_EQ(monomials_of_degree(3, 2).size(), 6u);
  EXPECT_EQ(monomials_of_degree(3, 4).size(), 15u);
}

TEST(PolyGradient, Quadratic) {
  const auto g = gradient(testing::ex5_h());
  ASSERT_EQ(g.size(), 2u);
  EXPECT_TRUE(approx_equal(g[0], make_poly(2, {{{1, 0}, 2.0}, {{0, 1}, 1.0}})));
  EXPECT_TRUE(approx_equal(g[1], make_poly(2, {{{1, 0}, 1.0}, {{0, 1}, 2.0}})));
}

TEST(PolyGradient, ConstantGivesZero) {
  for (const Poly& gj : gradient(Poly::constant(2, 4.0))) EXPECT_TRUE(gj.is_zero());
}

TEST(PolyGradient, SingleTermPowerRule) {
  const auto g = gradient(make_poly(2, {{{3, 0}, 1.0}}));
  EXPECT_TRUE(approx_equal(g[0], make_poly(2, {{{2, 0}, 3.0}})));
  EXPECT_TRUE(g[1].is_zero());
}

TEST(PolyGradient, MatchesFiniteDifferences) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 2 + trial % 3;
    const Poly p = testing::random_homogeneous(rng, n, 1 + trial % 5);
    const Vector x = testing::random_vector(rng, n, -1, 1);
    Vector v = testing::random_vector(rng, n, -1, 1);
    v.normalize();
    const auto g = gradient(p);
    double analytic = 0.0;
    for (int j = 0; j < n; ++j) analytic += g[j](x) * v[j];
    const double h = 1e-6;
    const double fd = (p(x + h * v) - p(x - h * v)) / (2 * h);
    EXPECT_NEAR(fd, analytic, 1e-6 * (1.0 + std::abs(analytic)));
  }
}

TEST(PolyTensor, QuadraticEntries) {
  const SymmetricTensor g = to_symmetric_tensor(testing::ex5_h());
  EXPECT_EQ(g.order(), 2);
  EXPECT_DOUBLE_EQ(g.entry({0, 0}), 1.0);
  EXPECT_DOUBLE_EQ(g.entry({0, 1}), 0.5);
  EXPECT_DOUBLE_EQ(g.entry({1, 0}), 0.5);
  EXPECT_DOUBLE_EQ(g.entry({1, 1}), 1.0);
}

TEST(PolyTensor, PureCube) {
  const SymmetricTensor g = to_symmetric_tensor(make_poly(2, {{{0, 3}, 1.0}}));
  EXPECT_EQ(g.order(), 3);
  EXPECT_EQ(g.entries().size(), 1u);
  EXPECT_DOUBLE_EQ(g.entry({1, 1, 1}), 1.0);
  EXPECT_DOUBLE_EQ(g.entry({0, 1, 1}), 0.0);
}

TEST(PolyTensor, CubicEntries) {
  const SymmetricTensor g = to_symmetric_tensor(testing::ex6_h());
  EXPECT_DOUBLE_EQ(g.entry({0, 0, 0}), 1.0);
  EXPECT_DOUBLE_EQ(g.entry({0, 0, 1}), 0.5);
  EXPECT_DOUBLE_EQ(g.entry({1, 0, 0}), 0.5);
  EXPECT_DOUBLE_EQ(g.entry({0, 1, 1}), 0.5);
  EXPECT_DOUBLE_EQ(g.entry({1, 1, 1}), 0.5);
}

TEST(PolyTensor, NonHomogeneousRejected) {
  EXPECT_THROW(to_symmetric_tensor(make_poly(2, {{{2, 0}, 1.0}, {{0, 1}, 1.0}})), std::invalid_argument);
}

TEST(PolyTensorApply, OffDiagonal) {
  const SymmetricTensor g = to_symmetric_tensor(testing::ex5_h());
  EXPECT_DOUBLE_EQ(tensor_apply(g, {vec({1, 0}), vec({0, 1})}), 0.5);
}

TEST(PolyTensorApply, ZeroArgument) {
  const SymmetricTensor g = to_symmetric_tensor(testing::ex6_h());
  EXPECT_EQ(tensor_apply(g, {vec({0.3, 2}), vec({0, 0}), vec({1, 1})}), 0.0);
}

TEST(PolyTensorApply, CubicLookup) {
  const SymmetricTensor g = to_symmetric_tensor(testing::ex6_h());
  EXPECT_DOUBLE_EQ(tensor_apply(g, {vec({1, 0}), vec({1, 0}), vec({0, 1})}), 0.5);
}

TEST(PolyTensorApply, ArityMismatchThrows) {
  const SymmetricTensor g = to_symmetric_tensor(testing::ex5_h());
  EXPECT_THROW(tensor_apply(g, {vec({1, 0})}), DimensionError);
  EXPECT_THROW(tensor_apply(g, {vec({1, 0}), vec({1, 0, 0})}), DimensionError);
}

TEST(PolyTensorApply, DiagonalReproducesEvaluation) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 40; ++trial) {
    const int n = 2 + trial % 3;
    const int d = 1 + trial % 4;
    const Poly p = testing::random_homogeneous(rng, n, d);
    const Vector x = testing::random_vector(rng, n, -2, 2);
    const double expected = p(x);
    const double got = tensor_apply(to_symmetric_tensor(p), std::vector<Vector>(d, x));
    EXPECT_NEAR(got, expected, 1e-12 * std::max(1.0, std::abs(expected)));
  }
}

TEST(PolyTensorApply, PermutationInvariant) {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 20; ++trial) {
    const Poly p = testing::random_homogeneous(rng, 3, 3);
    const SymmetricTensor g = to_symmetric_tensor(p);
    std::vector<Vector> args{testing::random_vector(rng, 3, -1, 1), testing::random_vector(rng, 3, -1, 1),
                             testing::random_vector(rng, 3, -1, 1)};
    const double base = tensor_apply(g, args);
    std::sort(args.begin(), args.end(), [](const Vector& a, const Vector& b) { return a[0] < b[0]; });
    do {
      EXPECT_NEAR(tensor_apply(g, args), base, 1e-12);
    } while (std::next_permutation(args.begin(), args.end(),
                                   [](const Vector& a, const Vector& b) { return a[0] < b[0]; }));
  }
}

TEST(PolyPolarValues, AgreesWithTensorApply) {
  // Tuple values via composition must match direct multilinear evaluation.
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 30; ++trial) {
    const int n = 2 + trial % 2;
    const int d = 1 + trial % 4;
    const Poly p = testing::random_homogeneous(rng, n, d);
    std::vector<Vector> verts;
    for (int k = 0; k < n; ++k) {
      Vector v = testing::random_vector(rng, n, 0.05, 1);
      verts.push_back(v / v.sum());
    }
    const auto values = polar_values(p, verts, d);
    const SymmetricTensor g = to_symmetric_tensor(p);
    for (const Monomial& beta : monomials_of_degree(n, d)) {
      std::vector<Vector> args;
      for (int k = 0; k < n; ++k) args.insert(args.end(), beta[k], verts[k]);
      const auto it = values.find(beta);
      const double got = it == values.end() ? 0.0 : it->second;
      EXPECT_NEAR(got, tensor_apply(g, args), 1e-12);
    }
  }
}

TEST(PolySubstituteSquares, Examples) {
  EXPECT_TRUE(approx_equal(substitute_squares(testing::ex5_h()),
                           make_poly(2, {{{4, 0}, 1.0}, {{2, 2}, 1.0}, {{0, 4}, 1.0}})));
  EXPECT_TRUE(approx_equal(substitute_squares(make_poly(2, {{{1, 0}, 1.0}})), make_poly(2, {{{2, 0}, 1.0}})));
  EXPECT_TRUE(approx_equal(substitute_squares(make_poly(2, {{{2, 0}, 1.0}, {{1, 1}, -1.0}, {{0, 2}, 1.0}})),
                           make_poly(2, {{{4, 0}, 1.0}, {{2, 2}, -1.0}, {{0, 4}, 1.0}})));
  EXPECT_EQ(substitute_squares(testing::ex6_h()).degree(), 6);
}

TEST(PolySubstituteSquares, PointwiseIdentity) {
  std::mt19937_64 rng(14);
  for (int trial = 0; trial < 30; ++trial) {
    const Poly p = testing::random_homogeneous(rng, 3, 1 + trial % 4);
    const Vector y = testing::random_vector(rng, 3, -2, 2);
    const Vector y2 = y.cwiseProduct(y);
    EXPECT_NEAR(substitute_squares(p)(y), p(y2), 1e-10 * (1.0 + std::abs(p(y2))));
  }
}

TEST(PolyNormPower, IdentityAtZero) {
  const Poly p = testing::ex6_h();
  EXPECT_TRUE(approx_equal(multiply_norm_power(p, 0), p));
}

TEST(PolyNormPower, SumOfCubesIdentity) {
  const Poly p = make_poly(2, {{{4, 0}, 1.0}, {{2, 2}, -1.0}, {{0, 4}, 1.0}});
  const Poly lifted = multiply_norm_power(p, 1);
  EXPECT_TRUE(approx_equal(lifted, make_poly(2, {{{6, 0}, 1.0}, {{0, 6}, 1.0}})));
  EXPECT_EQ(lifted.size(), 2u);
}

TEST(PolyNormPower, ConstantLift) {
  EXPECT_TRUE(approx_equal(multiply_norm_power(Poly::constant(2, 1.0), 1), make_poly(2, {{{2, 0}, 1.0}, {{0, 2}, 1.0}})));
}

TEST(PolyNormPower, ExcludedVariable) {
  const Poly lifted = multiply_norm_power(make_poly(3, {{{0, 1, 1}, 1.0}}), 1, 0);
  EXPECT_TRUE(approx_equal(lifted, make_poly(3, {{{0, 3, 1}, 1.0}, {{0, 1, 3}, 1.0}})));
}

TEST(PolyRestrict, Examples) {
  EXPECT_TRUE(approx_equal(restrict_to_face(testing::ex5_h(), 0), make_poly(2, {{{0, 2}, 1.0}})));
  EXPECT_TRUE(restrict_to_face(make_poly(2, {{{1, 1}, 3.0}, {{2, 0}, 1.0}}), 0).is_zero());
  EXPECT_TRUE(approx_equal(restrict_to_face(testing::ex6_h(), 1), make_poly(2, {{{3, 0}, 1.0}})));
  EXPECT_THROW(restrict_to_face(testing::ex5_h(), 2), DimensionError);
}

TEST(PolyHomogeneity, Examples) {
  EXPECT_EQ(check_homogeneous(make_poly(2, {{{2, 0}, 1.0}, {{0, 2}, 1.0}})).degree, 2);
  const auto bad = check_homogeneous(make_poly(2, {{{2, 0}, 1.0}, {{0, 1}, 1.0}}));
  EXPECT_FALSE(bad);
  ASSERT_TRUE(bad.offending.has_value());
  EXPECT_NE(bad.offending->first.degree(), bad.offending->second.degree());
  EXPECT_EQ(check_homogeneous(testing::ex6_h()).degree, 3);
}

TEST(PolyHomogeneity, ScalingProperty) {
  std::mt19937_64 rng(15);
  std::uniform_real_distribution<double> lam(0.0, 10.0);
  for (int trial = 0; trial < 100; ++trial) {
    const int d = 1 + trial % 5;
    const Poly p = testing::random_homogeneous(rng, 2 + trial % 3, d);
    const Vector x = testing::random_vector(rng, p.nvars(), -1, 1);
    const double l = lam(rng) + 1e-3;
    const double expected = std::pow(l, d) * p(x);
    EXPECT_LE(std::abs(p(l * x) - expected), 1e-9 * (1.0 + std::abs(expected)));
  }
}

TEST(PolyArithmetic, ProductDegreesAdd) {
  const Poly a = testing::ex5_h();
  const Poly b = make_poly(2, {{{1, 0}, 1.0}, {{0, 1}, -1.0}});
  const Poly c = a * b;
  EXPECT_EQ(c.degree(), 3);
  EXPECT_TRUE(approx_equal(c, make_poly(2, {{{3, 0}, 1.0}, {{0, 3}, -1.0}})));
}

}  // namespace
}  // namespace copolyap
