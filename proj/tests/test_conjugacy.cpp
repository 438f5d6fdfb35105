#include <gtest/gtest.h>

#include "support.hpp"

using namespace mce;
using namespace mce::testing;

TEST(FindConjugator, Examples) {
  const PrimeField f(7);
  Rng rng(1);
  const auto u = mat_diagonal(f, {1, 2});
  const auto r = find_conjugator(f, u, u, rng);
  EXPECT_EQ(mat_mul(f, r, u), mat_mul(f, u, r));

  for (int i = 0; i < 20; ++i) {
    const auto p = random_invertible(f, 2, rng);
    const auto v = mat_mul(f, mat_mul(f, p, u), mat_inverse(f, p));
    const auto x = find_conjugator(f, u, v, rng);
    ASSERT_TRUE(mat_is_invertible(f, x));
    ASSERT_EQ(mat_mul(f, v, x), mat_mul(f, x, u));
  }
  try {
    find_conjugator(f, u, mat_diagonal(f, {1, 3}), rng);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NotConjugate);
  }
}

TEST(Linearized, IdentityInstance) {
  const PrimeField f(11);
  Rng rng(2);
  const auto c = random_hull_one_code(f, 4, 12, rng);
  const auto u = hull_info(c).generator;
  const ConjugacyInstance inst{c, c, u, u, mat_identity(f, 4)};
  const auto res = solve_linearized(inst);
  ASSERT_EQ(res.status, ConjStatus::Solved);
  EXPECT_TRUE(code_equal(c, conjugate(c, res.p)));
}

TEST(Linearized, PlantedInstancesVerify) {
  const PrimeField f(11);
  Rng rng(3);
  int solved = 0;
  for (int i = 0; i < 10; ++i) {
    const auto pc = planted_conjugacy(f, 4, 12, rng);
    const auto res = solve_linearized(pc.inst);
    ASSERT_NE(res.status, ConjStatus::NoSolution);
    ASSERT_GE(res.kernel_dim, 1u);
    if (res.status != ConjStatus::Solved) continue;
    ++solved;
    ASSERT_TRUE(code_equal(pc.inst.d, conjugate(pc.inst.c, res.p)));
  }
  EXPECT_GE(solved, 8);
}

TEST(Linearized, FalsePositiveIsRejected) {
  const PrimeField f(11);
  Rng rng(4);
  for (int i = 0; i < 5; ++i) {
    const auto inst = false_positive_pair(f, 4, 12, rng);
    EXPECT_NE(solve_linearized(inst).status, ConjStatus::Solved);
  }
}

TEST(Linearized, RangeCheck) {
  const PrimeField f(11);
  Rng rng(5);
  const auto c = random_code(f, 3, 3, 8, rng);
  const ConjugacyInstance inst{c, c, mat_identity(f, 3), mat_identity(f, 3), mat_identity(f, 3)};
  EXPECT_THROW(solve_linearized(inst), Error);
}

TEST(ReduceToDiagonal, DiagonalV) {
  const PrimeField f(7);
  Rng rng(6);
  const auto c = random_code(f, 3, 3, 4, rng, true);
  const auto v = mat_diagonal(f, {3, 1, 5});
  const ConjugacyInstance inst{c, c, v, v, mat_identity(f, 3)};
  const auto dp = reduce_to_diagonal(inst);
  EXPECT_EQ(dp.ext.degree(), 1u);
  for (std::size_t i = 0; i < 3; ++i) EXPECT_EQ(dp.ext.to_base(dp.delta(i, i)), std::vector<std::uint64_t>({1, 3, 5})[i]);
  EXPECT_EQ(dp.cp, dp.dp);
  // S is a scaled permutation
  for (std::size_t j = 0; j < 3; ++j) {
    int nonzero = 0;
    for (std::size_t i = 0; i < 3; ++i) nonzero += !dp.ext.is_zero(dp.s(i, j));
    EXPECT_EQ(nonzero, 1);
  }
}

TEST(ReduceToDiagonal, IrreducibleCubicNeedsDegreeThree) {
  const PrimeField f(7);
  Rng rng(7);
  const auto v = companion(f, find_irreducible(7, 3, 1));
  const auto c = random_code(f, 3, 3, 4, rng, true);
  const ConjugacyInstance inst{c, c, v, v, mat_identity(f, 3)};
  const auto dp = reduce_to_diagonal(inst);
  const auto& ext = dp.ext;
  EXPECT_EQ(ext.degree(), 3u);
  const auto rebuilt = mat_mul(ext, mat_mul(ext, dp.s, dp.delta), mat_inverse(ext, dp.s));
  EXPECT_EQ(rebuilt, mat_embed<PrimeField>(ext, v));
}

TEST(ReduceToDiagonal, PlantedInvariants) {
  const PrimeField f(11);
  Rng rng(8);
  for (int i = 0; i < 5; ++i) {
    const auto pc = planted_conjugacy(f, 4, 12, rng);
    const auto dp = reduce_to_diagonal(pc.inst);
    const auto& ext = dp.ext;
    const auto sinv = mat_inverse(ext, dp.s);
    EXPECT_EQ(mat_mul(ext, mat_mul(ext, dp.s, dp.delta), sinv), mat_embed<PrimeField>(ext, pc.inst.v));
    // Dp mapped back is D
    std::vector<MatOf<ExtField>> back;
    for (const auto& b : dp.dp.basis()) back.push_back(mat_mul(ext, mat_mul(ext, dp.s, b), sinv));
    const auto d_ext = MatrixCode<ExtField>::span(ext, 4, 4, back);
    for (const auto& di : pc.inst.d.basis()) EXPECT_TRUE(contains(d_ext, mat_embed<PrimeField>(ext, di)));
  }
}

TEST(PolynomialDiagonal, EqualCodesAndGauge) {
  const PrimeField f(13);
  Rng rng(9);
  const auto c = random_code(f, 4, 4, 12, rng, true);
  const auto delta = mat_diagonal(f, {1, 2, 3, 4});
  const auto poly = find_polynomial_diagonal(c, c, delta, rng, 32);
  ASSERT_TRUE(poly.has_value());
  const auto fd = mat_poly_eval(f, *poly, delta);
  EXPECT_EQ(conjugate(c, fd), c);
  EXPECT_EQ(conjugate(c, mat_scale(f, fd, 7)), c);
}

TEST(PolynomialDiagonal, PlantedPolynomialUpToScalar) {
  const PrimeField f(13);
  Rng rng(10);
  const std::vector<std::uint64_t> deltas{2, 5, 7, 11};
  const auto delta = mat_diagonal(f, deltas);
  int found = 0;
  for (int i = 0; i < 20; ++i) {
    const auto c = random_code(f, 4, 4, 12, rng, true);
    PolyOf<PrimeField> f0;
    bool ok = false;
    while (!ok) {
      f0 = poly_from(f, {f.random(rng), f.random(rng), f.random(rng), f.random(rng)});
      ok = !f0.is_zero();
      for (auto d : deltas) ok = ok && poly_eval(f, f0, d) != 0;
    }
    const auto d = conjugate(c, mat_poly_eval(f, f0, delta));
    const auto poly = find_polynomial_diagonal(c, d, delta, rng, 32);
    if (!poly) continue;
    ++found;
    const auto ratio = f.mul(poly_eval(f, *poly, deltas[0]), f.inv(poly_eval(f, f0, deltas[0])));
    for (auto x : deltas) ASSERT_EQ(poly_eval(f, *poly, x), f.mul(ratio, poly_eval(f, f0, x)));
  }
  EXPECT_GE(found, 18);
}

TEST(PolynomialDiagonal, InequivalentCodes) {
  const PrimeField f(13);
  Rng rng(11);
  const auto delta = mat_diagonal(f, {1, 2, 3, 4});
  for (int i = 0; i < 10; ++i) {
    const auto c = random_code(f, 4, 4, 12, rng, true);
    const auto d = random_code(f, 4, 4, 12, rng, true);
    EXPECT_FALSE(find_polynomial_diagonal(c, d, delta, rng, 32).has_value());
  }
}

TEST(PolynomialDiagonal, RejectsBadDelta) {
  const PrimeField f(13);
  Rng rng(12);
  const auto c = random_code(f, 3, 3, 5, rng, true);
  EXPECT_THROW(find_polynomial_diagonal(c, c, mat_diagonal(f, {1, 1, 2}), rng, 8), Error);
  EXPECT_THROW(find_polynomial_diagonal(c, c, mat_diagonal(f, {0, 1, 2}), rng, 8), Error);
}

TEST(FindPDiag, IdentityInstance) {
  const PrimeField f(11);
  Rng rng(13);
  const auto c = random_hull_one_code(f, 4, 12, rng);
  const auto u = hull_info(c).generator;
  const auto p = find_P_diag(ConjugacyInstance{c, c, u, u, mat_identity(f, 4)}, rng);
  ASSERT_TRUE(p.has_value());
  EXPECT_TRUE(code_equal(c, conjugate(c, *p)));
}

TEST(FindPDiag, PlantedIncludingExtensionFields) {
  const PrimeField f(11);
  Rng rng(14);
  int solved = 0, extension = 0;
  for (int i = 0; i < 12; ++i) {
    const auto pc = planted_conjugacy(f, 4, 12, rng);
    extension += splitting_degree(f, charpoly(f, pc.inst.u)) > 1;
    const auto p = find_P_diag(pc.inst, rng);
    if (!p) continue;
    ++solved;
    ASSERT_TRUE(code_equal(pc.inst.d, conjugate(pc.inst.c, *p)));
  }
  EXPECT_GE(solved, 11);
  EXPECT_GT(extension, 0);
}

TEST(FindPDiag, FalsePositive) {
  const PrimeField f(11);
  Rng rng(15);
  for (int i = 0; i < 5; ++i) EXPECT_FALSE(find_P_diag(false_positive_pair(f, 4, 12, rng), rng).has_value());
}

TEST(SolveConjugacy, Strategies) {
  const PrimeField f(11);
  Rng rng(16);
  for (auto strategy : {ConjStrategy::Linearized, ConjStrategy::Diagonal, ConjStrategy::Auto}) {
    const auto pc = planted_conjugacy(f, 4, 12, rng);
    const auto out = solve_conjugacy(pc.inst, strategy, rng);
    ASSERT_TRUE(out.p.has_value());
    EXPECT_TRUE(code_equal(pc.inst.d, conjugate(pc.inst.c, *out.p)));
    EXPECT_EQ(out.used_diagonal, strategy == ConjStrategy::Diagonal);
    EXPECT_FALSE(solve_conjugacy(false_positive_pair(f, 4, 12, rng), strategy, rng).p.has_value());
  }
}
