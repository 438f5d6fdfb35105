#include <gtest/gtest.h>

#include "mce/instances.hpp"
#include "support.hpp"

using namespace mce;
using namespace mce::testing;

namespace {

M inv_t(const PrimeField& f, const M& a) { return mat_transpose(f, mat_inverse(f, a)); }

}  // namespace

TEST(Preprocess, DualSwapForLowDimension) {
  const auto [inst, sol] = gen_instance(7, 3, 3, 3, 1);
  const auto pre = preprocess(inst.c, inst.d);
  EXPECT_TRUE(pre.transform.dual_swapped);
  EXPECT_FALSE(pre.transform.transposed);
  EXPECT_EQ(pre.c.k(), 6u);
  EXPECT_EQ(pre.c, dual(inst.c));
}

TEST(Preprocess, TransposeWhenTall) {
  const auto [inst, sol] = gen_instance(7, 4, 3, 8, 2);
  const auto pre = preprocess(inst.c, inst.d);
  EXPECT_TRUE(pre.transform.transposed);
  EXPECT_EQ(pre.c.m(), 3u);
  EXPECT_EQ(pre.c.n(), 4u);
}

TEST(Preprocess, OutOfRange) {
  const auto [inst, sol] = gen_instance(7, 4, 4, 15, 3);
  try {
    preprocess(inst.c, inst.d);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::OutOfRange);
  }
  const auto [inst2, sol2] = gen_instance(7, 4, 4, 14, 3);
  EXPECT_FALSE(preprocess(inst2.c, inst2.d).transform.dual_swapped);
}

TEST(Preprocess, UndoTransformRestoresSolutions) {
  for (auto [m, n, k] : std::vector<std::tuple<std::size_t, std::size_t, std::size_t>>{{3, 3, 3}, {4, 3, 9}, {4, 3, 3}}) {
    const auto [inst, sol] = gen_instance(7, m, n, k, 4);
    const auto pre = preprocess(inst.c, inst.d);
    const PrimeField f(7);
    // planted solution expressed in the preprocessed orientation
    M p = sol.p, q = sol.q;
    if (pre.transform.transposed) {
      const M np = inv_t(f, q), nq = inv_t(f, p);
      p = np;
      q = nq;
    }
    if (pre.transform.dual_swapped) {
      p = inv_t(f, p);
      q = inv_t(f, q);
    }
    ASSERT_TRUE(code_equal(pre.d, apply_equivalence(pre.c, p, q)));
    const auto [p0, q0] = undo_transform(f, pre.transform, p, q);
    EXPECT_TRUE(verify_solution(inst, p0, q0));
  }
}

TEST(Budgets, Examples) {
  const auto a = choose_budgets(11, 4, 4);
  EXPECT_EQ(a.dict_size, 11u);
  EXPECT_EQ(a.probes, 44u);
  const auto b = choose_budgets(11, 4, 8);
  EXPECT_EQ(b.dict_size, std::min<std::uint64_t>(11, count_sep_classes(11, 4)));
  EXPECT_EQ(b.probes, 4u * 161051u);
  EXPECT_EQ(choose_budgets(11, 4, 2).dict_size, 1u);
  // odd k-perp uses a half-integer exponent
  EXPECT_EQ(choose_budgets(9973, 5, 5).dict_size, 995953u);
}

TEST(Dictionary, SingleEntrySatisfiesGuards) {
  const PrimeField f(11);
  Rng rng(1);
  const auto c = random_code(f, 4, 4, 12, rng);
  const Canonicalizer canon(f);
  const auto dict = construct_dict(c, 1, canon, rng);
  ASSERT_EQ(dict.size(), 1u);
  EXPECT_FALSE(dict.saturated);
  const auto dual_c = dual(c);
  for (const auto& [key, entry] : dict.entries()) {
    // independent re-derivation of every guard
    const auto a = dual_c.combine(entry.coords);
    EXPECT_TRUE(contains(dual_c, a));
    EXPECT_EQ(mat_rank(f, a), 4u);
    const auto ca = map_by_A(c, a);
    ASSERT_TRUE(ca.has_value());
    EXPECT_EQ(ca->k(), 12u);
    EXPECT_EQ(hull(*ca).k(), 1u);
    const auto [norm, u] = compute_normalized_charpoly(*ca, canon);
    EXPECT_EQ(norm.tuple, entry.tuple);
    EXPECT_EQ(encode_key(norm.tuple), key);
    EXPECT_TRUE(dictionary_eligible(f, norm.tuple));
    EXPECT_EQ(canon(norm.tuple).tuple, norm.tuple);
  }
}

TEST(Dictionary, HullRateAndDraws) {
  const PrimeField f(11);
  Rng rng(2);
  const auto c = random_code(f, 4, 4, 12, rng);
  const Canonicalizer canon(f);
  const auto dict = construct_dict(c, 11, canon, rng, 20000);
  EXPECT_LE(dict.size(), 11u);
  std::uint64_t qualifying = dict.samples_drawn;
  for (const auto& [cause, count] : dict.rejects) {
    if (cause == "rank_deficient" || cause == "dimension_drop") qualifying -= count;
  }
  const double rate = static_cast<double>(dict.hulls_dim1_seen) / static_cast<double>(qualifying);
  EXPECT_NEAR(rate, 1.0 / 11, 0.05);
}

TEST(Dictionary, SaturatesOnTinyBudget) {
  const PrimeField f(11);
  Rng rng(3);
  const auto c = random_code(f, 4, 4, 12, rng);
  const auto dict = construct_dict(c, 50, Canonicalizer(f), rng, 30);
  EXPECT_TRUE(dict.saturated);
  EXPECT_EQ(dict.samples_drawn, 30u);
}

TEST(Collision, PlantedShortCircuit) {
  const PrimeField f(11);
  Rng rng(4);
  const Canonicalizer canon(f);
  int checked = 0;
  for (std::uint64_t seed = 10; checked < 5; ++seed) {
    const auto [inst, sol] = gen_instance(11, 4, 4, 12, seed);
    const auto dual_c = dual(inst.c);
    const auto dual_d = dual(inst.d);
    const auto s = draw_sample(inst.c, dual_c, canon, rng);
    if (!s.sample) continue;
    ++checked;
    const auto b = mat_mul(f, mat_mul(f, inv_t(f, sol.p), s.sample->a), mat_transpose(f, sol.q));
    ASSERT_TRUE(contains(dual_d, b));
    std::vector<std::uint64_t> coords;
    {
      // coordinates of B in the stored dual basis
      auto sys = mat_zero(f, dual_d.k() + 1, 16);
      for (std::size_t i = 0; i < dual_d.k(); ++i) sys.data().assign(sys.data().begin(), sys.data().end());
      const auto basis = dual_d.basis();
      auto t = mat_zero(f, 16, dual_d.k() + 1);
      for (std::size_t i = 0; i < dual_d.k(); ++i) {
        for (std::size_t j = 0; j < 16; ++j) t(j, i) = basis[i].data()[j];
      }
      for (std::size_t j = 0; j < 16; ++j) t(j, dual_d.k()) = f.neg(b.data()[j]);
      const auto ker = kernel(f, t);
      ASSERT_EQ(ker.dim(), 1u);
      const auto last = ker.basis(0, dual_d.k());
      for (std::size_t i = 0; i < dual_d.k(); ++i) coords.push_back(f.mul(ker.basis(0, i), f.inv(last)));
    }
    const auto bs = evaluate_sample(inst.d, dual_d, coords, canon);
    ASSERT_TRUE(bs.sample.has_value());
    EXPECT_EQ(bs.sample->norm.tuple, s.sample->norm.tuple);
    const auto p = resolve_collision(s.sample->code_a, s.sample->u, bs.sample->code_a, bs.sample->u,
                                     bs.sample->norm.tuple, ConjStrategy::Auto, rng);
    ASSERT_TRUE(p.has_value());
    EXPECT_TRUE(code_equal(bs.sample->code_a, conjugate(s.sample->code_a, *p)));
    const auto q = recover_Q(inst.c, inst.d, *p, rng);
    EXPECT_TRUE(verify_solution(inst, *p, q));
  }
}

TEST(Collision, ZeroProbesAndUnrelatedCodes) {
  const PrimeField f(11);
  Rng rng(5);
  const Canonicalizer canon(f);
  const auto inst = gen_unrelated(11, 4, 4, 12, 6);
  const auto dict = construct_dict(inst.c, 11, canon, rng);
  CollisionStats none;
  EXPECT_FALSE(find_collision(inst.c, inst.d, dict, 0, canon, rng, {}, none).has_value());
  EXPECT_EQ(none.draws, 0u);
  CollisionStats stats;
  EXPECT_FALSE(find_collision(inst.c, inst.d, dict, 44, canon, rng, {}, stats).has_value());
  EXPECT_EQ(stats.dim1_hulls, 44u);
  EXPECT_EQ(stats.false_positives, stats.collisions);
}

TEST(RecoverQ, Examples) {
  const PrimeField f(7);
  Rng rng(7);
  const auto [inst, sol] = gen_instance(7, 3, 4, 5, 8);
  const auto q_same = recover_Q(inst.c, inst.c, mat_identity(f, 3), rng);
  EXPECT_TRUE(code_equal(inst.c, apply_equivalence(inst.c, mat_identity(f, 3), q_same)));
  const auto q = recover_Q(inst.c, inst.d, sol.p, rng);
  EXPECT_TRUE(verify_solution(inst, sol.p, q));
  try {
    recover_Q(inst.c, inst.d, random_invertible(f, 3, rng), rng);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NoInvertibleElement);
  }
}

TEST(Attack, PlantedCaseOne) {
  int ok = 0;
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    const auto [inst, sol] = gen_instance(11, 4, 4, 12, seed);
    AttackConfig cfg;
    cfg.seed = seed;
    const auto res = attack(inst.c, inst.d, cfg);
    EXPECT_EQ(res.stats.dict_size, 11u);
    EXPECT_EQ(res.stats.probes, 44u);
    if (!res.success()) continue;
    ++ok;
    EXPECT_TRUE(verify_solution(inst, *res.p, *res.q));
  }
  EXPECT_GE(ok, 2);
}

TEST(Attack, DualSwapPath) {
  const auto [inst, sol] = gen_instance(11, 4, 4, 4, 21);
  AttackConfig cfg;
  cfg.seed = 21;
  const auto res = attack(inst.c, inst.d, cfg);
  EXPECT_TRUE(res.stats.transform.dual_swapped);
  ASSERT_TRUE(res.success()) << res.message;
  EXPECT_TRUE(verify_solution(inst, *res.p, *res.q));
}

TEST(Attack, UnrelatedCodesFail) {
  const auto inst = gen_unrelated(11, 4, 4, 12, 31);
  AttackConfig cfg;
  cfg.seed = 31;
  const auto res = attack(inst.c, inst.d, cfg);
  EXPECT_FALSE(res.success());
  EXPECT_EQ(res.failure, AttackPhase::Exhausted);
}

TEST(Attack, OutOfRangeIsReported) {
  const auto [inst, sol] = gen_instance(7, 4, 4, 15, 41);
  const auto res = attack(inst.c, inst.d, {});
  EXPECT_EQ(res.failure, AttackPhase::OutOfRange);
}

TEST(Attack, ThreadedRunStillVerifies) {
  const auto [inst, sol] = gen_instance(11, 4, 4, 12, 51);
  AttackConfig cfg;
  cfg.seed = 51;
  cfg.threads = 3;
  const auto res = attack(inst.c, inst.d, cfg);
  if (res.success()) {
    EXPECT_TRUE(verify_solution(inst, *res.p, *res.q));
  }
}
