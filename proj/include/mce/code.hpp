#pragma once

#include <optional>
#include <vector>

#include "matrix.hpp"

namespace mce {

/// A k-dimensional F-linear subspace of m x n matrices. The basis is kept as
/// the RREF of the row-major flattenings, so two codes are equal exactly
/// when their stored bases are.
template <FiniteField F>
class MatrixCode {
 public:
  using Elem = typename F::Elem;
  using Mat = MatOf<F>;

  MatrixCode(F field, std::size_t m, std::size_t n, SubspaceOf<F> space)
      : field_(std::move(field)), m_(m), n_(n), space_(std::move(space)) {
    if (space_.ambient_dim != m_ * n_) throw Error(ErrorKind::DimensionMismatch, "code ambient dimension != m*n");
  }

  /// Span of arbitrary generators (any rank).
  static MatrixCode span(const F& f, std::size_t m, std::size_t n, const std::vector<Mat>& gens) {
    auto rows = mat_zero(f, gens.size(), m * n);
    for (std::size_t i = 0; i < gens.size(); ++i) {
      if (gens[i].rows() != m || gens[i].cols() != n) throw Error(ErrorKind::DimensionMismatch, "generator shape");
      for (std::size_t j = 0; j < m * n; ++j) rows(i, j) = gens[i].data()[j];
    }
    return MatrixCode(f, m, n, subspace_span(f, rows));
  }

  static MatrixCode zero(const F& f, std::size_t m, std::size_t n) {
    return MatrixCode(f, m, n, subspace_zero(f, m * n));
  }
  static MatrixCode full(const F& f, std::size_t m, std::size_t n) {
    return MatrixCode(f, m, n, subspace_full(f, m * n));
  }

  const F& field() const { return field_; }
  std::size_t m() const { return m_; }
  std::size_t n() const { return n_; }
  std::size_t k() const { return space_.dim(); }
  bool is_square() const { return m_ == n_; }
  const SubspaceOf<F>& space() const { return space_; }

  Mat basis_matrix(std::size_t i) const { return Mat(m_, n_, space_.basis.row(i)); }
  std::vector<Mat> basis() const {
    std::vector<Mat> out;
    out.reserve(k());
    for (std::size_t i = 0; i < k(); ++i) out.push_back(basis_matrix(i));
    return out;
  }

  /// sum_i coords[i] * C_i
  Mat combine(const std::vector<Elem>& coords) const {
    return Mat(m_, n_, subspace_combine(field_, space_, coords));
  }

  bool operator==(const MatrixCode& other) const {
    return m_ == other.m_ && n_ == other.n_ && space_ == other.space_;
  }

 private:
  F field_;
  std::size_t m_ = 0;
  std::size_t n_ = 0;
  SubspaceOf<F> space_;
};

/// {M : Tr(M^T C') = 0 for all C' in C}: the kernel of the flattened basis.
template <FiniteField F>
MatrixCode<F> dual(const MatrixCode<F>& c) {
  const auto& f = c.field();
  if (c.k() == 0) return MatrixCode<F>::full(f, c.m(), c.n());
  return MatrixCode<F>(f, c.m(), c.n(), kernel(f, c.space().basis));
}

/// Gram matrix (Tr(C_i C_j)) of the stored basis under the plain trace form.
template <FiniteField F>
MatOf<F> hull_gram(const MatrixCode<F>& c) {
  if (!c.is_square()) throw Error(ErrorKind::NotSquare, "hull needs square matrices");
  const auto& f = c.field();
  const auto basis = c.basis();
  auto g = mat_zero(f, c.k(), c.k());
  for (std::size_t i = 0; i < c.k(); ++i) {
    for (std::size_t j = i; j < c.k(); ++j) {
      g(i, j) = trace_pairing(f, basis[i], basis[j], TraceForm::Plain);
      g(j, i) = g(i, j);
    }
  }
  return g;
}

/// {M in C : Tr(M C') = 0 for all C' in C}.
template <FiniteField F>
MatrixCode<F> hull(const MatrixCode<F>& c) {
  const auto& f = c.field();
  if (!c.is_square()) throw Error(ErrorKind::NotSquare, "hull needs square matrices");
  if (c.k() == 0) return c;
  const auto ker = kernel(f, hull_gram(c));
  std::vector<MatOf<F>> gens;
  for (std::size_t i = 0; i < ker.dim(); ++i) gens.push_back(c.combine(ker.basis.row(i)));
  return MatrixCode<F>::span(f, c.m(), c.m(), gens);
}

template <FiniteField F>
std::size_t hull_dim(const MatrixCode<F>& c) {
  return c.k() - mat_rank(c.field(), hull_gram(c));
}

/// The code {P C_i Q^{-1}}.
template <FiniteField F>
MatrixCode<F> apply_equivalence(const MatrixCode<F>& c, const MatOf<F>& p, const MatOf<F>& q) {
  const auto& f = c.field();
  if (p.rows() != c.m() || p.cols() != c.m() || q.rows() != c.n() || q.cols() != c.n()) {
    throw Error(ErrorKind::DimensionMismatch, "equivalence shapes");
  }
  if (!mat_is_invertible(f, p)) throw Error(ErrorKind::Singular, "P is not invertible");
  const auto qinv = mat_inverse(f, q);
  std::vector<MatOf<F>> gens;
  gens.reserve(c.k());
  for (const auto& ci : c.basis()) gens.push_back(mat_mul(f, mat_mul(f, p, ci), qinv));
  return MatrixCode<F>::span(f, c.m(), c.n(), gens);
}

/// P C P^{-1}.
template <FiniteField F>
MatrixCode<F> conjugate(const MatrixCode<F>& c, const MatOf<F>& p) {
  if (!c.is_square()) throw Error(ErrorKind::NotSquare, "conjugation of a rectangular code");
  return apply_equivalence(c, p, p);
}

/// The code C A^T in F^{m x m}, or nullopt when its dimension drops below k.
template <FiniteField F>
std::optional<MatrixCode<F>> map_by_A(const MatrixCode<F>& c, const MatOf<F>& a) {
  const auto& f = c.field();
  if (a.rows() != c.m() || a.cols() != c.n()) throw Error(ErrorKind::DimensionMismatch, "A must be m x n");
  const auto at = mat_transpose(f, a);
  std::vector<MatOf<F>> gens;
  gens.reserve(c.k());
  for (const auto& ci : c.basis()) gens.push_back(mat_mul(f, ci, at));
  auto out = MatrixCode<F>::span(f, c.m(), c.m(), gens);
  if (out.k() < c.k()) return std::nullopt;
  return out;
}

template <FiniteField F>
bool contains(const MatrixCode<F>& c, const MatOf<F>& m) {
  if (m.rows() != c.m() || m.cols() != c.n()) throw Error(ErrorKind::DimensionMismatch, "membership shape");
  return subspace_contains(c.field(), c.space(), m.data());
}

template <FiniteField F>
bool code_equal(const MatrixCode<F>& c, const MatrixCode<F>& d) {
  if (c.m() != d.m() || c.n() != d.n()) throw Error(ErrorKind::DimensionMismatch, "comparing codes of different shapes");
  return c == d;
}

template <FiniteField F>
MatrixCode<F> transpose_code(const MatrixCode<F>& c) {
  const auto& f = c.field();
  std::vector<MatOf<F>> gens;
  for (const auto& ci : c.basis()) gens.push_back(mat_transpose(f, ci));
  return MatrixCode<F>::span(f, c.n(), c.m(), gens);
}

/// Basis of ker(Tr) in F^{m x m}: E_ij (i != j) and E_ii - E_{m-1,m-1}.
template <FiniteField F>
std::vector<MatOf<F>> traceless_basis(const F& f, std::size_t m) {
  std::vector<MatOf<F>> out;
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      if (i == j) continue;
      out.push_back(mat_unit(f, m, m, i, j));
    }
  }
  for (std::size_t i = 0; i + 1 < m; ++i) {
    auto e = mat_unit(f, m, m, i, i);
    e(m - 1, m - 1) = f.neg(f.one());
    out.push_back(std::move(e));
  }
  return out;
}

/// Uniform k-dimensional code, in F^{m x n} or (inside_ker_trace) in ker(Tr) of F^{m x m}.
template <FiniteField F>
MatrixCode<F> random_code(const F& f, std::size_t m, std::size_t n, std::size_t k, Rng& rng, bool inside_ker_trace = false) {
  if (inside_ker_trace && m != n) throw Error(ErrorKind::NotSquare, "ker(Tr) codes need m == n");
  const std::size_t ambient = inside_ker_trace ? m * m - 1 : m * n;
  if (k > ambient) throw Error(ErrorKind::InvalidArgument, "code dimension exceeds ambient dimension");
  std::vector<MatOf<F>> frame;
  if (inside_ker_trace) frame = traceless_basis(f, m);
  constexpr int kMaxTries = 256;
  for (int attempt = 0; attempt < kMaxTries; ++attempt) {
    auto coords = mat_random(f, k, ambient, rng);
    if (mat_rank(f, coords) != k) continue;
    if (!inside_ker_trace) return MatrixCode<F>(f, m, n, subspace_span(f, coords));
    std::vector<MatOf<F>> gens;
    gens.reserve(k);
    for (std::size_t i = 0; i < k; ++i) {
      auto g = mat_zero(f, m, m);
      for (std::size_t j = 0; j < ambient; ++j) g = mat_add(f, g, mat_scale(f, frame[j], coords(i, j)));
      gens.push_back(std::move(g));
    }
    return MatrixCode<F>::span(f, m, m, gens);
  }
  throw Error(ErrorKind::RetryExhausted, "no full-rank code sample after 256 draws");
}

}  // namespace mce
