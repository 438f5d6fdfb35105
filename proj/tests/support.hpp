#pragma once

#include "mce/conjugacy.hpp"

namespace mce::testing {

using M = MatOf<PrimeField>;
using Code = MatrixCode<PrimeField>;

inline M companion(const PrimeField& f, const Poly<std::uint64_t>& p) {
  const std::size_t n = static_cast<std::size_t>(p.degree());
  auto c = mat_zero(f, n, n);
  for (std::size_t i = 1; i < n; ++i) c(i, i - 1) = 1;
  for (std::size_t i = 0; i < n; ++i) c(i, n - 1) = f.neg(p.coeffs[i]);
  return c;
}

// A k-dimensional code inside ker(Tr) whose hull is exactly span{U}.
inline Code code_with_hull(const PrimeField& f, const M& u, std::size_t k, Rng& rng) {
  const std::size_t m = u.rows();
  auto sys = mat_zero(f, 2, m * m);
  for (std::size_t i = 0; i < m; ++i) sys(0, i * m + i) = 1;
  const auto ut = mat_transpose(f, u);
  for (std::size_t j = 0; j < m * m; ++j) sys(1, j) = ut.data()[j];
  const auto perp = kernel(f, sys);
  for (;;) {
    std::vector<M> gens{u};
    for (std::size_t i = 1; i < k; ++i) gens.emplace_back(m, m, subspace_random(f, perp, rng));
    const auto c = Code::span(f, m, m, gens);
    if (c.k() == k && hull_dim(c) == 1) return c;
  }
}

// Uniform code in ker(Tr) conditioned on a one-dimensional hull with a
// separable, invertible generator.
inline Code random_hull_one_code(const PrimeField& f, std::size_t m, std::size_t k, Rng& rng) {
  for (;;) {
    auto c = random_code(f, m, m, k, rng, true);
    const auto info = hull_info(c);
    if (info.dim != 1) continue;
    const auto chi = charpoly(f, info.generator);
    if (chi.coeffs[0] == 0 || !poly_is_separable(f, chi)) continue;
    return c;
  }
}

struct PlantedConjugacy {
  ConjugacyInstance inst;
  M p0;
};

// D = P0 C P0^{-1}, V = P0 U P0^{-1}, R from the commutant solver.
inline PlantedConjugacy planted_conjugacy(const PrimeField& f, std::size_t m, std::size_t k, Rng& rng) {
  auto c = random_hull_one_code(f, m, k, rng);
  const auto u = hull_info(c).generator;
  const auto p0 = random_invertible(f, m, rng);
  const auto p0inv = mat_inverse(f, p0);
  auto d = conjugate(c, p0);
  const auto v = mat_mul(f, mat_mul(f, p0, u), p0inv);
  auto r = find_conjugator(f, u, v, rng);
  return {ConjugacyInstance{std::move(c), std::move(d), u, v, std::move(r)}, p0};
}

// C, and an unrelated D whose hull generator has the same characteristic
// polynomial, so only the conjugacy solver can tell them apart.
inline ConjugacyInstance false_positive_pair(const PrimeField& f, std::size_t m, std::size_t k, Rng& rng) {
  auto c = random_hull_one_code(f, m, k, rng);
  const auto u = hull_info(c).generator;
  const auto p1 = random_invertible(f, m, rng);
  const auto v = mat_mul(f, mat_mul(f, p1, u), mat_inverse(f, p1));
  auto d = code_with_hull(f, v, k, rng);
  auto r = find_conjugator(f, u, v, rng);
  return ConjugacyInstance{std::move(c), std::move(d), u, v, std::move(r)};
}

}  // namespace mce::testing
