#pragma once

#include <algorithm>
#include <numeric>
#include <optional>
#include <utility>
#include <vector>

#include "canon.hpp"
#include "extension.hpp"

namespace mce {

using BaseMat = MatOf<PrimeField>;
using BaseCode = MatrixCode<PrimeField>;

/// Conjugate codes with one-dimensional hulls span{U}, span{V} and a known
/// R with V = R U R^{-1}.
struct ConjugacyInstance {
  BaseCode c;
  BaseCode d;
  BaseMat u;
  BaseMat v;
  BaseMat r;
};

/// An invertible X with V X = X U, sampled from the commutant space.
template <FiniteField F>
MatOf<F> find_conjugator(const F& f, const MatOf<F>& u, const MatOf<F>& v, Rng& rng) {
  if (charpoly(f, u) != charpoly(f, v)) throw Error(ErrorKind::NotConjugate, "characteristic polynomials differ");
  const auto space = solve_sylvester_commutant(f, u, v);
  if (space.dim() == 0) throw Error(ErrorKind::NotConjugate, "no nonzero intertwiner");
  const std::size_t m = u.rows();
  constexpr int kMaxTries = 64;
  for (int i = 0; i < kMaxTries; ++i) {
    MatOf<F> x(m, m, subspace_random(f, space, rng));
    if (mat_is_invertible(f, x)) return x;
  }
  throw Error(ErrorKind::NotConjugate, "no invertible intertwiner found in 64 samples");
}

enum class ConjStatus { Solved, Indeterminate, NoSolution };

struct LinearizedResult {
  ConjStatus status = ConjStatus::NoSolution;
  BaseMat p;
  std::size_t kernel_dim = 0;
};

/// Linearization of R f(U) C g(U) R^{-1} in D with unknowns t_ij = alpha_i beta_j.
inline LinearizedResult solve_linearized(const ConjugacyInstance& inst) {
  const auto& f = inst.c.field();
  const std::size_t m = inst.u.rows();
  const std::size_t k = inst.c.k();
  if (!inst.c.is_square() || inst.c.m() != m || inst.d.m() != m || inst.d.k() != k) {
    throw Error(ErrorKind::DimensionMismatch, "conjugacy instance shapes");
  }
  if (k <= 1 || k + 1 >= m * m) throw Error(ErrorKind::OutOfRange, "linearized solver needs 1 < k < m^2 - 1");

  const auto dual_d = dual(inst.d).basis();
  const auto rinv = mat_inverse(f, inst.r);
  std::vector<BaseMat> upow{mat_identity(f, m)};
  for (std::size_t i = 1; i < m; ++i) upow.push_back(mat_mul(f, upow.back(), inst.u));
  std::vector<BaseMat> left, right;
  for (std::size_t i = 0; i < m; ++i) {
    left.push_back(mat_mul(f, inst.r, upow[i]));
    right.push_back(mat_mul(f, upow[i], rinv));
  }

  auto sys = mat_zero(f, k * dual_d.size(), m * m);
  const auto basis = inst.c.basis();
  for (std::size_t l = 0; l < k; ++l) {
    for (std::size_t i = 0; i < m; ++i) {
      const auto lc = mat_mul(f, left[i], basis[l]);
      for (std::size_t j = 0; j < m; ++j) {
        const auto term = mat_mul(f, lc, right[j]);
        for (std::size_t r = 0; r < dual_d.size(); ++r) {
          sys(l * dual_d.size() + r, i * m + j) = trace_pairing(f, dual_d[r], term, TraceForm::Transpose);
        }
      }
    }
  }
  const auto ker = kernel(f, sys);
  LinearizedResult out;
  out.kernel_dim = ker.dim();
  if (ker.dim() == 0) return out;
  if (ker.dim() > 1) {
    out.status = ConjStatus::Indeterminate;
    return out;
  }

  const BaseMat t(m, m, ker.basis.row(0));
  std::size_t i0 = 0, j0 = 0;
  [&] {
    for (i0 = 0; i0 < m; ++i0) {
      for (j0 = 0; j0 < m; ++j0) {
        if (t(i0, j0) != 0) return;
      }
    }
  }();
  const auto pivot_inv = f.inv(t(i0, j0));
  std::vector<std::uint64_t> alpha(m), beta(m);
  for (std::size_t j = 0; j < m; ++j) beta[j] = t(i0, j);
  for (std::size_t i = 0; i < m; ++i) alpha[i] = f.mul(t(i, j0), pivot_inv);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      if (t(i, j) != f.mul(alpha[i], beta[j])) {
        out.status = ConjStatus::Indeterminate;
        return out;
      }
    }
  }
  const auto fu = mat_poly_eval(f, poly_from(f, alpha), inst.u);
  const auto gu = mat_poly_eval(f, poly_from(f, beta), inst.u);
  const auto prod = mat_mul(f, fu, gu);
  if (prod(0, 0) == 0 || prod != mat_scale(f, mat_identity(f, m), prod(0, 0))) return out;
  auto p = mat_mul(f, inst.r, fu);
  if (!code_equal(inst.d, conjugate(inst.c, p))) return out;
  out.status = ConjStatus::Solved;
  out.p = std::move(p);
  return out;
}

template <FiniteField From>
MatOf<ExtField> mat_embed(const ExtField& ext, const MatOf<From>& a) {
  MatOf<ExtField> r(a.rows(), a.cols(), ext.zero());
  for (std::size_t i = 0; i < a.data().size(); ++i) r.data()[i] = ext.embed(a.data()[i]);
  return r;
}

/// Codes conjugated into the eigenbasis of V over the splitting field.
struct DiagonalizedPair {
  ExtField ext;
  MatrixCode<ExtField> cp;
  MatrixCode<ExtField> dp;
  MatOf<ExtField> delta;
  MatOf<ExtField> s;
};

/// V = S Delta S^{-1}, Cp = S^{-1} R C R^{-1} S, Dp = S^{-1} D S.
inline DiagonalizedPair reduce_to_diagonal(const ConjugacyInstance& inst) {
  const auto& f = inst.c.field();
  const std::size_t m = inst.v.rows();
  const auto chi = charpoly(f, inst.v);
  if (!poly_is_separable(f, chi)) throw Error(ErrorKind::InvalidArgument, "charpoly(V) is not separable");
  ExtField ext = ExtField::of_degree(f, splitting_degree(f, chi));
  const auto roots = poly_roots(ext, poly_embed(ext, chi));
  if (roots.size() != m) throw Error(ErrorKind::InvalidArgument, "charpoly(V) does not split in the computed extension");

  const auto v = mat_embed<PrimeField>(ext, inst.v);
  MatOf<ExtField> s(m, m, ext.zero());
  for (std::size_t col = 0; col < m; ++col) {
    auto shifted = v;
    for (std::size_t i = 0; i < m; ++i) shifted(i, i) = ext.sub(shifted(i, i), roots[col]);
    const auto eig = kernel(ext, shifted);
    if (eig.dim() != 1) throw Error(ErrorKind::InvalidArgument, "eigenspace is not one-dimensional");
    for (std::size_t i = 0; i < m; ++i) s(i, col) = eig.basis(0, i);
  }
  const auto sinv = mat_inverse(ext, s);
  const auto r = mat_embed<PrimeField>(ext, inst.r);
  const auto left = mat_mul(ext, sinv, r);
  const auto right = mat_mul(ext, mat_inverse(ext, r), s);

  std::vector<MatOf<ExtField>> cgens, dgens;
  for (const auto& ci : inst.c.basis()) cgens.push_back(mat_mul(ext, mat_mul(ext, left, mat_embed<PrimeField>(ext, ci)), right));
  for (const auto& di : inst.d.basis()) dgens.push_back(mat_mul(ext, mat_mul(ext, sinv, mat_embed<PrimeField>(ext, di)), s));
  auto cp = MatrixCode<ExtField>::span(ext, m, m, cgens);
  auto dp = MatrixCode<ExtField>::span(ext, m, m, dgens);
  return DiagonalizedPair{ext, std::move(cp), std::move(dp), mat_diagonal(ext, roots), s};
}

namespace detail {

// Union-find over vertices with multiplicative potentials pot[i] = u_i / u_root.
template <FiniteField F>
class RatioGraph {
 public:
  RatioGraph(const F& f, std::size_t n) : f_(f), parent_(n), pot_(n, f.one()), components_(n) {
    std::iota(parent_.begin(), parent_.end(), std::size_t{0});
  }

  // Records u_i / u_j = ratio; false on an inconsistent cycle.
  bool relate(std::size_t i, std::size_t j, const typename F::Elem& ratio) {
    auto [ri, pi] = find(i);
    auto [rj, pj] = find(j);
    if (ri == rj) return f_.mul(pj, ratio) == pi;
    // attach ri under rj: u_ri / u_rj = (u_i / pi) / (u_j / pj) = ratio * pj / pi
    parent_[ri] = rj;
    pot_[ri] = f_.mul(f_.mul(ratio, pj), f_.inv(pi));
    --components_;
    return true;
  }

  bool connected() const { return components_ == 1; }

  std::vector<typename F::Elem> values() {
    std::vector<typename F::Elem> out;
    for (std::size_t i = 0; i < parent_.size(); ++i) out.push_back(find(i).second);
    return out;
  }

 private:
  std::pair<std::size_t, typename F::Elem> find(std::size_t i) {
    auto acc = f_.one();
    std::size_t x = i;
    while (parent_[x] != x) {
      acc = f_.mul(acc, pot_[x]);
      x = parent_[x];
    }
    return {x, acc};
  }

  const F& f_;
  std::vector<std::size_t> parent_;
  std::vector<typename F::Elem> pot_;
  std::size_t components_;
};

// Basis of C intersected with {x_ij = 0 for (i,j) in zeros}, as matrices.
template <FiniteField F>
std::vector<MatOf<F>> zero_pattern_section(const MatrixCode<F>& c, const std::vector<std::pair<std::size_t, std::size_t>>& zeros) {
  const auto& f = c.field();
  auto sys = mat_zero(f, zeros.size(), c.k());
  for (std::size_t l = 0; l < c.k(); ++l) {
    for (std::size_t e = 0; e < zeros.size(); ++e) {
      sys(e, l) = c.space().basis(l, zeros[e].first * c.n() + zeros[e].second);
    }
  }
  const auto ker = kernel(f, sys);
  std::vector<MatOf<F>> out;
  for (std::size_t i = 0; i < ker.dim(); ++i) out.push_back(c.combine(ker.basis.row(i)));
  return out;
}

}  // namespace detail

namespace detail {

template <FiniteField F>
bool has_offdiagonal(const F& f, const MatOf<F>& x) {
  for (std::size_t i = 0; i < x.rows(); ++i) {
    for (std::size_t j = 0; j < x.cols(); ++j) {
      if (i != j && !f.is_zero(x(i, j))) return true;
    }
  }
  return false;
}

// Scalars mu with charpoly(mu D0) = charpoly(C0) and mu diag(D0) = diag(C0).
// Returns nullopt when no scalar exists.
template <FiniteField F>
std::optional<std::vector<typename F::Elem>> charpoly_scalars(const F& f, const MatOf<F>& c0, const MatOf<F>& d0) {
  const std::size_t m = c0.rows();
  const auto chi_c = charpoly(f, c0);
  const auto chi_d = charpoly(f, d0);
  auto coeff = [&](const PolyOf<F>& p, std::size_t weight) {
    const std::size_t deg = m - weight;
    return deg < p.coeffs.size() ? p.coeffs[deg] : f.zero();
  };
  std::vector<typename F::Elem> out;
  std::size_t w0 = 1;
  while (w0 <= m && f.is_zero(coeff(chi_d, w0))) ++w0;
  if (w0 <= m) {
    if (f.is_zero(coeff(chi_c, w0))) return std::nullopt;
    const auto ratio = f.mul(coeff(chi_c, w0), f.inv(coeff(chi_d, w0)));
    std::vector<typename F::Elem> eq(w0 + 1, f.zero());
    eq[0] = f.neg(ratio);
    eq[w0] = f.one();
    for (const auto& mu : poly_roots(f, poly_from(f, eq))) {
      bool match = true;
      auto power = f.one();
      for (std::size_t w = 1; w <= m && match; ++w) {
        power = f.mul(power, mu);
        match = coeff(chi_c, w) == f.mul(power, coeff(chi_d, w));
      }
      if (match && (out.empty() || !(out.back() == mu))) out.push_back(mu);
    }
  } else {
    if (chi_c != chi_d) return std::nullopt;
    // both nilpotent: only the diagonal can witness the scalar
    std::size_t i = 0;
    while (i < m && f.is_zero(d0(i, i))) ++i;
    if (i == m) {
      // every nonzero scalar passes; report the ambiguity with two entries
      out = {f.one(), f.neg(f.one())};
      return out;
    }
    out.push_back(f.mul(c0(i, i), f.inv(d0(i, i))));
  }
  std::erase_if(out, [&](const auto& mu) {
    for (std::size_t i = 0; i < m; ++i) {
      if (!(f.mul(mu, d0(i, i)) == c0(i, i))) return true;
    }
    return false;
  });
  if (out.empty()) return std::nullopt;
  return out;
}

// The scalar a with diag(X) = a diag(Y) + diag(W) for some W in the diagonal
// subcode. Empty when a is not determined; nullopt when no solution exists.
template <FiniteField F>
std::optional<std::vector<typename F::Elem>> diagonal_scalars(const F& f, const MatOf<F>& x, const MatOf<F>& y,
                                                              const std::vector<MatOf<F>>& diag_code) {
  const std::size_t m = x.rows();
  const std::size_t z = diag_code.size();
  auto sys = mat_zero(f, m, z + 2);
  for (std::size_t i = 0; i < m; ++i) {
    sys(i, 0) = y(i, i);
    for (std::size_t t = 0; t < z; ++t) sys(i, t + 1) = diag_code[t](i, i);
    sys(i, z + 1) = f.neg(x(i, i));
  }
  const auto ker = kernel(f, sys);
  std::vector<typename F::Elem> out;
  for (std::size_t r = 0; r < ker.dim(); ++r) {
    // a vector with last coordinate zero and a nonzero first one leaves a free
    if (f.is_zero(ker.basis(r, z + 1)) && !f.is_zero(ker.basis(r, 0))) return out;
  }
  for (std::size_t r = 0; r < ker.dim(); ++r) {
    if (f.is_zero(ker.basis(r, z + 1))) continue;
    const auto a = f.mul(ker.basis(r, 0), f.inv(ker.basis(r, z + 1)));
    if (f.is_zero(a)) return std::nullopt;
    out.push_back(a);
    return out;
  }
  return std::nullopt;
}

}  // namespace detail

/// f with deg f < m and Dp = f(Delta) Cp f(Delta)^{-1}, returned monic.
/// Diagonal conjugation fixes zero positions and diagonal entries, so both
/// codes share their diagonal subcode Z (of dimension z). Each round cuts both
/// codes by k-1-z random off-diagonal zeros, leaving Z plus one further
/// direction X (resp. Y), matches u X u^{-1} = a Y modulo Z and reads ratios
/// u_i / u_j off the nonzero off-diagonal entries. Ratios are pooled across
/// rounds until they determine f(Delta) up to a scalar.
template <FiniteField F>
std::optional<PolyOf<F>> find_polynomial_diagonal(const MatrixCode<F>& cp, const MatrixCode<F>& dp, const MatOf<F>& delta,
                                                  Rng& rng, std::size_t max_rounds) {
  const auto& f = cp.field();
  const std::size_t m = delta.rows();
  if (!cp.is_square() || cp.m() != m || dp.m() != m || !dp.is_square()) {
    throw Error(ErrorKind::DimensionMismatch, "diagonal solver shapes");
  }
  std::vector<typename F::Elem> deltas;
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      if (i != j && !f.is_zero(delta(i, j))) throw Error(ErrorKind::InvalidArgument, "Delta is not diagonal");
    }
    if (f.is_zero(delta(i, i))) throw Error(ErrorKind::InvalidArgument, "Delta has a zero diagonal entry");
    for (const auto& seen : deltas) {
      if (seen == delta(i, i)) throw Error(ErrorKind::InvalidArgument, "Delta has repeated diagonal entries");
    }
    deltas.push_back(delta(i, i));
  }
  if (cp.k() != dp.k()) return std::nullopt;

  auto finish = [&](std::vector<typename F::Elem> u) -> std::optional<PolyOf<F>> {
    std::vector<std::pair<typename F::Elem, typename F::Elem>> pts;
    for (std::size_t i = 0; i < m; ++i) pts.emplace_back(deltas[i], u[i]);
    auto poly = poly_monic(f, lagrange_interpolate(f, pts));
    if (!(dp == conjugate(cp, mat_poly_eval(f, poly, delta)))) return std::nullopt;
    return poly;
  };
  if (m == 1) return poly_one(f);

  std::vector<std::pair<std::size_t, std::size_t>> offdiag;
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      if (i != j) offdiag.emplace_back(i, j);
    }
  }
  const auto diag_c = detail::zero_pattern_section(cp, offdiag);
  const auto diag_d = detail::zero_pattern_section(dp, offdiag);
  if (!(MatrixCode<F>::span(f, m, m, diag_c) == MatrixCode<F>::span(f, m, m, diag_d))) return std::nullopt;
  const std::size_t z = diag_c.size();
  if (cp.k() == z) return finish(std::vector<typename F::Elem>(m, f.one()));
  const std::size_t lambda_size = std::min(cp.k() - 1 - z, offdiag.size());
  detail::RatioGraph<F> graph(f, m);

  for (std::size_t round = 0; round < max_rounds; ++round) {
    // partial Fisher-Yates: the first lambda_size entries form the sample
    for (std::size_t i = 0; i < lambda_size; ++i) std::swap(offdiag[i], offdiag[i + rng.below(offdiag.size() - i)]);
    const std::vector<std::pair<std::size_t, std::size_t>> zeros(offdiag.begin(), offdiag.begin() + static_cast<std::ptrdiff_t>(lambda_size));
    const auto csec = detail::zero_pattern_section(cp, zeros);
    const auto dsec = detail::zero_pattern_section(dp, zeros);
    // the sections of conjugate codes correspond under the diagonal conjugation
    if (csec.size() != dsec.size()) return std::nullopt;
    if (csec.size() != z + 1) continue;
    const auto xi = std::find_if(csec.begin(), csec.end(), [&](const auto& x) { return detail::has_offdiagonal(f, x); });
    const auto yi = std::find_if(dsec.begin(), dsec.end(), [&](const auto& y) { return detail::has_offdiagonal(f, y); });
    const auto& x = *xi;
    const auto& y = *yi;

    const auto candidates = z == 0 ? detail::charpoly_scalars(f, x, y) : detail::diagonal_scalars(f, x, y, diag_d);
    if (!candidates) return std::nullopt;
    std::vector<typename F::Elem> scalars;
    for (const auto& a : *candidates) {
      bool pattern = true;
      for (const auto& [i, j] : offdiag) pattern = pattern && f.is_zero(f.mul(a, y(i, j))) == f.is_zero(x(i, j));
      if (pattern) scalars.push_back(a);
    }
    if (!candidates->empty() && scalars.empty()) return std::nullopt;
    if (scalars.size() != 1) continue;
    const auto& a = scalars[0];
    for (const auto& [i, j] : offdiag) {
      if (f.is_zero(x(i, j))) continue;
      if (!graph.relate(i, j, f.mul(f.mul(a, y(i, j)), f.inv(x(i, j))))) return std::nullopt;
    }
    if (graph.connected()) return finish(graph.values());
  }
  return std::nullopt;
}

/// P = S f(Delta) S^{-1} R, rescaled into the prime field and verified.
inline std::optional<BaseMat> find_P_diag(const ConjugacyInstance& inst, Rng& rng) {
  const auto& f = inst.c.field();
  const std::size_t m = inst.u.rows();
  const auto diag = reduce_to_diagonal(inst);
  const auto& ext = diag.ext;
  const auto sinv = mat_inverse(ext, diag.s);
  const auto r = mat_embed<PrimeField>(ext, inst.r);
  // one retry when the rescaled matrix does not descend to F_q
  for (int attempt = 0; attempt < 2; ++attempt) {
    const auto poly = find_polynomial_diagonal(diag.cp, diag.dp, diag.delta, rng, 8 * m);
    if (!poly) return std::nullopt;
    auto p_ext = mat_mul(ext, mat_mul(ext, mat_mul(ext, diag.s, mat_poly_eval(ext, *poly, diag.delta)), sinv), r);
    std::size_t first = 0;
    while (first < p_ext.data().size() && ext.is_zero(p_ext.data()[first])) ++first;
    if (first == p_ext.data().size()) return std::nullopt;
    p_ext = mat_scale(ext, p_ext, ext.inv(p_ext.data()[first]));
    bool descends = true;
    for (const auto& x : p_ext.data()) descends = descends && ext.in_base(x);
    if (!descends) continue;
    BaseMat p(m, m, f.zero());
    for (std::size_t i = 0; i < p.data().size(); ++i) p.data()[i] = ext.to_base(p_ext.data()[i]);
    if (!mat_is_invertible(f, p) || !code_equal(inst.d, conjugate(inst.c, p))) return std::nullopt;
    return p;
  }
  return std::nullopt;
}

enum class ConjStrategy { Linearized, Diagonal, Auto };

struct ConjugacyOutcome {
  std::optional<BaseMat> p;
  std::optional<std::size_t> linearized_kernel_dim;
  bool used_diagonal = false;
};

/// Auto runs the linearized solver and falls back to diagonalization when its
/// solution space is not a single line.
inline ConjugacyOutcome solve_conjugacy(const ConjugacyInstance& inst, ConjStrategy strategy, Rng& rng) {
  ConjugacyOutcome out;
  if (strategy != ConjStrategy::Diagonal) {
    const auto lin = solve_linearized(inst);
    out.linearized_kernel_dim = lin.kernel_dim;
    if (lin.status == ConjStatus::Solved) {
      out.p = lin.p;
      return out;
    }
    if (strategy == ConjStrategy::Linearized || lin.status == ConjStatus::NoSolution) return out;
  }
  out.used_diagonal = true;
  out.p = find_P_diag(inst, rng);
  return out;
}

}  // namespace mce
