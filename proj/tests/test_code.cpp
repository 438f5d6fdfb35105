#include <gtest/gtest.h>

#include "mce/code.hpp"

using namespace mce;

namespace {

using M = MatOf<PrimeField>;
using Code = MatrixCode<PrimeField>;

M inv_t(const PrimeField& f, const M& a) { return mat_transpose(f, mat_inverse(f, a)); }

}  // namespace

TEST(Code, CanonicalBasisMakesEqualityStructural) {
  const PrimeField f(7);
  Rng rng(1);
  const auto c = random_code(f, 3, 4, 5, rng);
  auto gens = c.basis();
  std::reverse(gens.begin(), gens.end());
  gens.push_back(mat_add(f, gens[0], gens[1]));
  EXPECT_EQ(Code::span(f, 3, 4, gens), c);
  EXPECT_EQ(c.k(), 5u);
}

TEST(Dual, Examples) {
  const PrimeField f(7);
  EXPECT_EQ(dual(Code::zero(f, 2, 3)), Code::full(f, 2, 3));
  EXPECT_EQ(dual(Code::full(f, 2, 3)).k(), 0u);
  const auto d = dual(Code::span(f, 2, 2, {mat_unit(f, 2, 2, 0, 0)}));
  EXPECT_EQ(d.k(), 3u);
  for (const auto& b : d.basis()) EXPECT_EQ(b(0, 0), 0u);
  EXPECT_TRUE(contains(d, mat_unit(f, 2, 2, 1, 1)));
}

TEST(Dual, OrthogonalDimensionAndInvolution) {
  const PrimeField f(11);
  Rng rng(3);
  for (int i = 0; i < 100; ++i) {
    const std::size_t m = 2 + rng.below(3), n = 2 + rng.below(3), k = rng.below(m * n + 1);
    const auto c = random_code(f, m, n, k, rng);
    const auto d = dual(c);
    ASSERT_EQ(d.k(), m * n - k);
    for (const auto& x : d.basis()) {
      for (const auto& y : c.basis()) ASSERT_EQ(trace_pairing(f, x, y, TraceForm::Transpose), 0u);
    }
    ASSERT_TRUE(code_equal(dual(d), c));
  }
}

TEST(Hull, Examples) {
  const PrimeField f(7);
  const auto e12 = Code::span(f, 2, 2, {mat_unit(f, 2, 2, 0, 1)});
  EXPECT_EQ(hull(e12), e12);
  EXPECT_EQ(hull(Code::span(f, 2, 2, {mat_identity(f, 2)})).k(), 0u);
  try {
    hull(Code::zero(f, 2, 3));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NotSquare);
  }
}

TEST(Hull, MatchesIndependentBruteForce) {
  // brute force over all coordinate vectors of a small code
  const PrimeField f(3);
  Rng rng(4);
  for (int i = 0; i < 30; ++i) {
    const auto c = random_code(f, 3, 3, 4, rng, true);
    const auto basis = c.basis();
    std::vector<M> members;
    for (std::uint64_t idx = 0; idx < 81; ++idx) {
      std::vector<std::uint64_t> coords(4);
      auto r = idx;
      for (auto& x : coords) {
        x = r % 3;
        r /= 3;
      }
      const auto x = c.combine(coords);
      bool orth = true;
      for (const auto& b : basis) orth = orth && trace_pairing(f, x, b, TraceForm::Plain) == 0;
      if (orth) members.push_back(x);
    }
    const auto h = hull(c);
    std::size_t size = 1;
    for (std::size_t j = 0; j < h.k(); ++j) size *= 3;
    ASSERT_EQ(members.size(), size);
    for (const auto& x : members) ASSERT_TRUE(contains(h, x));
  }
}

TEST(Hull, GramKernelAtQ11) {
  const PrimeField f(11);
  Rng rng(5);
  for (int i = 0; i < 50; ++i) {
    const auto c = random_code(f, 4, 4, 8, rng, true);
    const auto basis = c.basis();
    auto gram = mat_zero(f, 8, 8);
    for (std::size_t a = 0; a < 8; ++a) {
      for (std::size_t b = 0; b < 8; ++b) gram(a, b) = mat_trace(f, mat_mul(f, basis[a], basis[b]));
    }
    ASSERT_EQ(hull_dim(c), 8 - mat_rank(f, gram));
  }
}

TEST(Equivalence, GroupActionAndIdentity) {
  const PrimeField f(7);
  Rng rng(6);
  const auto c = random_code(f, 3, 4, 5, rng);
  EXPECT_EQ(apply_equivalence(c, mat_identity(f, 3), mat_identity(f, 4)), c);
  const auto p = random_invertible(f, 3, rng), q = random_invertible(f, 4, rng);
  const auto d = apply_equivalence(c, p, q);
  EXPECT_EQ(d.k(), 5u);
  EXPECT_EQ(apply_equivalence(d, mat_inverse(f, p), mat_inverse(f, q)), c);
  // basis elements are P C_i Q^{-1}
  for (const auto& ci : c.basis()) EXPECT_TRUE(contains(d, mat_mul(f, mat_mul(f, p, ci), mat_inverse(f, q))));
  EXPECT_THROW(apply_equivalence(c, mat_zero(f, 3, 3), q), Error);
}

TEST(Equivalence, DualTransport) {
  const PrimeField f(7);
  Rng rng(7);
  for (int i = 0; i < 50; ++i) {
    const auto c = random_code(f, 3, 4, 1 + rng.below(11), rng);
    const auto p = random_invertible(f, 3, rng), q = random_invertible(f, 4, rng);
    const auto d = apply_equivalence(c, p, q);
    ASSERT_TRUE(code_equal(dual(d), apply_equivalence(dual(c), inv_t(f, p), inv_t(f, q))));
  }
}

TEST(Conjugate, HullTransportAndIdentity) {
  const PrimeField f(11);
  Rng rng(8);
  for (int i = 0; i < 50; ++i) {
    const auto c = random_code(f, 4, 4, 6, rng, true);
    EXPECT_EQ(conjugate(c, mat_identity(f, 4)), c);
    const auto p = random_invertible(f, 4, rng);
    const auto d = conjugate(c, p);
    ASSERT_EQ(d.k(), c.k());
    ASSERT_TRUE(code_equal(hull(d), conjugate(hull(c), p)));
    ASSERT_TRUE(code_equal(c, conjugate(d, mat_inverse(f, p))));
  }
}

TEST(MapByA, Examples) {
  const PrimeField f(7);
  const auto e11 = mat_unit(f, 2, 2, 0, 0);
  const auto c = Code::span(f, 2, 2, {e11});
  const auto ca = map_by_A(c, e11);
  ASSERT_TRUE(ca.has_value());
  EXPECT_EQ(*ca, c);
  EXPECT_FALSE(map_by_A(c, mat_unit(f, 2, 2, 0, 1)).has_value());

  Rng rng(9);
  const auto code = random_code(f, 3, 5, 6, rng);
  const auto d = dual(code);
  int full = 0;
  for (int i = 0; i < 30; ++i) {
    const auto a = d.combine(subspace_random(f, subspace_full(f, d.k()), rng));
    if (mat_rank(f, a) != 3) continue;
    const auto mapped = map_by_A(code, a);
    if (!mapped) continue;
    ++full;
    EXPECT_EQ(mapped->k(), 6u);
    for (const auto& b : mapped->basis()) EXPECT_EQ(mat_trace(f, b), 0u);
  }
  EXPECT_GT(full, 0);
}

TEST(MapByA, KeyTransport) {
  const PrimeField f(7);
  Rng rng(10);
  int checked = 0;
  for (int i = 0; i < 100; ++i) {
    const auto c = random_code(f, 3, 4, 1 + rng.below(10), rng);
    const auto p = random_invertible(f, 3, rng), q = random_invertible(f, 4, rng);
    const auto d = apply_equivalence(c, p, q);
    const auto a = mat_random(f, 3, 4, rng);
    const auto b = mat_mul(f, mat_mul(f, inv_t(f, p), a), mat_transpose(f, q));
    const auto ca = map_by_A(c, a);
    const auto db = map_by_A(d, b);
    ASSERT_EQ(ca.has_value(), db.has_value());
    if (!ca) continue;
    ++checked;
    ASSERT_TRUE(code_equal(*db, conjugate(*ca, p)));
  }
  EXPECT_GT(checked, 50);
}

TEST(Contains, Examples) {
  const PrimeField f(5);
  Rng rng(11);
  const auto c = random_code(f, 3, 3, 4, rng);
  EXPECT_TRUE(contains(c, mat_zero(f, 3, 3)));
  const auto b = c.basis();
  EXPECT_TRUE(contains(c, mat_add(f, b[0], b[1])));
  EXPECT_THROW(contains(c, mat_zero(f, 2, 3)), Error);
  EXPECT_THROW(code_equal(c, Code::zero(f, 3, 2)), Error);
}

TEST(RandomCode, ShapesAndTraceConstraint) {
  const PrimeField f(5);
  Rng rng(12);
  EXPECT_EQ(random_code(f, 2, 3, 6, rng), Code::full(f, 2, 3));
  for (int i = 0; i < 50; ++i) {
    const auto k = rng.below(16);
    const auto c = random_code(f, 4, 4, k, rng, true);
    ASSERT_EQ(c.k(), k);
    for (const auto& b : c.basis()) ASSERT_EQ(mat_trace(f, b), 0u);
  }
  EXPECT_THROW(random_code(f, 4, 4, 16, rng, true), Error);
  EXPECT_THROW(random_code(f, 2, 2, 5, rng), Error);
}

TEST(Transpose, RoundTrip) {
  const PrimeField f(7);
  Rng rng(13);
  const auto c = random_code(f, 2, 5, 4, rng);
  const auto t = transpose_code(c);
  EXPECT_EQ(t.m(), 5u);
  EXPECT_EQ(t.n(), 2u);
  EXPECT_EQ(transpose_code(t), c);
}
