#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "field.hpp"
#include "poly.hpp"

namespace mce {

/// Dense row-major matrix of field elements. The field travels separately.
template <class E>
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, const E& fill) : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
  Matrix(std::size_t rows, std::size_t cols, std::vector<E> data) : rows_(rows), cols_(cols), data_(std::move(data)) {
    if (data_.size() != rows_ * cols_) throw Error(ErrorKind::DimensionMismatch, "matrix data size");
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool is_square() const { return rows_ == cols_; }

  E& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const E& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  /// Row-major flattening vec(M): row 0, then row 1, ...
  const std::vector<E>& data() const { return data_; }
  std::vector<E>& data() { return data_; }

  std::vector<E> row(std::size_t i) const {
    return std::vector<E>(data_.begin() + static_cast<std::ptrdiff_t>(i * cols_),
                          data_.begin() + static_cast<std::ptrdiff_t>((i + 1) * cols_));
  }

  void swap_rows(std::size_t a, std::size_t b) {
    if (a == b) return;
    for (std::size_t j = 0; j < cols_; ++j) std::swap(data_[a * cols_ + j], data_[b * cols_ + j]);
  }

  bool operator==(const Matrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<E> data_;
};

template <FiniteField F>
using MatOf = Matrix<typename F::Elem>;

template <FiniteField F>
MatOf<F> mat_zero(const F& f, std::size_t rows, std::size_t cols) {
  return MatOf<F>(rows, cols, f.zero());
}

template <FiniteField F>
MatOf<F> mat_identity(const F& f, std::size_t n) {
  auto m = mat_zero(f, n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = f.one();
  return m;
}

/// Matrix from integer rows (test and fixture convenience).
template <FiniteField F>
MatOf<F> mat_from_ints(const F& f, const std::vector<std::vector<std::int64_t>>& rows) {
  const std::size_t r = rows.size(), c = rows.empty() ? 0 : rows[0].size();
  auto m = mat_zero(f, r, c);
  for (std::size_t i = 0; i < r; ++i) {
    if (rows[i].size() != c) throw Error(ErrorKind::DimensionMismatch, "ragged rows");
    for (std::size_t j = 0; j < c; ++j) m(i, j) = f.from_int(rows[i][j]);
  }
  return m;
}

/// Elementary matrix E_{ij} (zero-based indices).
template <FiniteField F>
MatOf<F> mat_unit(const F& f, std::size_t rows, std::size_t cols, std::size_t i, std::size_t j) {
  auto m = mat_zero(f, rows, cols);
  m(i, j) = f.one();
  return m;
}

template <FiniteField F>
MatOf<F> mat_diagonal(const F& f, const std::vector<typename F::Elem>& diag) {
  auto m = mat_zero(f, diag.size(), diag.size());
  for (std::size_t i = 0; i < diag.size(); ++i) m(i, i) = diag[i];
  return m;
}

template <FiniteField F>
MatOf<F> mat_from_vector(const std::vector<typename F::Elem>& v, std::size_t rows, std::size_t cols) {
  return MatOf<F>(rows, cols, v);
}

template <FiniteField F>
bool mat_is_zero(const F& f, const MatOf<F>& a) {
  for (const auto& x : a.data()) {
    if (!f.is_zero(x)) return false;
  }
  return true;
}

template <FiniteField F>
MatOf<F> mat_add(const F& f, const MatOf<F>& a, const MatOf<F>& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw Error(ErrorKind::DimensionMismatch, "mat_add");
  auto r = a;
  for (std::size_t i = 0; i < r.data().size(); ++i) r.data()[i] = f.add(a.data()[i], b.data()[i]);
  return r;
}

template <FiniteField F>
MatOf<F> mat_sub(const F& f, const MatOf<F>& a, const MatOf<F>& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw Error(ErrorKind::DimensionMismatch, "mat_sub");
  auto r = a;
  for (std::size_t i = 0; i < r.data().size(); ++i) r.data()[i] = f.sub(a.data()[i], b.data()[i]);
  return r;
}

template <FiniteField F>
MatOf<F> mat_scale(const F& f, const MatOf<F>& a, const typename F::Elem& c) {
  auto r = a;
  for (auto& x : r.data()) x = f.mul(x, c);
  return r;
}

template <FiniteField F>
MatOf<F> mat_mul(const F& f, const MatOf<F>& a, const MatOf<F>& b) {
  if (a.cols() != b.rows()) throw Error(ErrorKind::DimensionMismatch, "mat_mul");
  auto r = mat_zero(f, a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t l = 0; l < a.cols(); ++l) {
      const auto& x = a(i, l);
      if (f.is_zero(x)) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) r(i, j) = f.add(r(i, j), f.mul(x, b(l, j)));
    }
  }
  return r;
}

template <FiniteField F>
MatOf<F> mat_transpose(const F& f, const MatOf<F>& a) {
  auto r = mat_zero(f, a.cols(), a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) r(j, i) = a(i, j);
  }
  return r;
}

template <FiniteField F>
typename F::Elem mat_trace(const F& f, const MatOf<F>& a) {
  if (!a.is_square()) throw Error(ErrorKind::NotSquare, "trace");
  auto t = f.zero();
  for (std::size_t i = 0; i < a.rows(); ++i) t = f.add(t, a(i, i));
  return t;
}

/// p(M) by Horner's rule.
template <FiniteField F>
MatOf<F> mat_poly_eval(const F& f, const PolyOf<F>& p, const MatOf<F>& m) {
  if (!m.is_square()) throw Error(ErrorKind::NotSquare, "polynomial of a non-square matrix");
  auto r = mat_zero(f, m.rows(), m.rows());
  for (std::size_t i = p.coeffs.size(); i-- > 0;) {
    r = mat_mul(f, r, m);
    for (std::size_t d = 0; d < m.rows(); ++d) r(d, d) = f.add(r(d, d), p.coeffs[i]);
  }
  return r;
}

enum class TraceForm { Transpose, Plain };

/// Tr(X^T Y) or Tr(X Y), entrywise without forming the product.
template <FiniteField F>
typename F::Elem trace_pairing(const F& f, const MatOf<F>& x, const MatOf<F>& y, TraceForm form) {
  auto acc = f.zero();
  if (form == TraceForm::Transpose) {
    if (x.rows() != y.rows() || x.cols() != y.cols()) throw Error(ErrorKind::DimensionMismatch, "trace pairing shapes");
    for (std::size_t i = 0; i < x.data().size(); ++i) acc = f.add(acc, f.mul(x.data()[i], y.data()[i]));
    return acc;
  }
  if (!x.is_square() || x.rows() != y.rows() || !y.is_square()) {
    throw Error(ErrorKind::DimensionMismatch, "plain trace pairing needs equal square shapes");
  }
  const std::size_t m = x.rows();
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) acc = f.add(acc, f.mul(x(i, j), y(j, i)));
  }
  return acc;
}

template <class E>
struct RrefResult {
  Matrix<E> reduced;
  std::size_t rank = 0;
  std::vector<std::size_t> pivots;
};

/// Reduced row echelon form; first nonzero entry in a column is the pivot,
/// pivots are normalized to one.
template <FiniteField F>
RrefResult<typename F::Elem> rref(const F& f, MatOf<F> m) {
  RrefResult<typename F::Elem> out;
  std::size_t row = 0;
  for (std::size_t col = 0; col < m.cols() && row < m.rows(); ++col) {
    std::size_t piv = row;
    while (piv < m.rows() && f.is_zero(m(piv, col))) ++piv;
    if (piv == m.rows()) continue;
    m.swap_rows(piv, row);
    const auto inv = f.inv(m(row, col));
    for (std::size_t j = col; j < m.cols(); ++j) m(row, j) = f.mul(m(row, j), inv);
    for (std::size_t i = 0; i < m.rows(); ++i) {
      if (i == row || f.is_zero(m(i, col))) continue;
      const auto c = m(i, col);
      for (std::size_t j = col; j < m.cols(); ++j) m(i, j) = f.sub(m(i, j), f.mul(c, m(row, j)));
    }
    out.pivots.push_back(col);
    ++row;
  }
  out.rank = row;
  out.reduced = std::move(m);
  return out;
}

template <FiniteField F>
std::size_t mat_rank(const F& f, const MatOf<F>& m) {
  return rref(f, m).rank;
}

/// Row space of a matrix, stored as its nonzero RREF rows. Since pivots are
/// normalized the basis is canonical, so equality of subspaces is equality
/// of bases.
template <class E>
struct Subspace {
  std::size_t ambient_dim = 0;
  Matrix<E> basis;

  std::size_t dim() const { return basis.rows(); }
  bool operator==(const Subspace&) const = default;
};

template <FiniteField F>
using SubspaceOf = Subspace<typename F::Elem>;

template <FiniteField F>
SubspaceOf<F> subspace_span(const F& f, const MatOf<F>& rows) {
  auto r = rref(f, rows);
  std::vector<typename F::Elem> data(r.reduced.data().begin(),
                                     r.reduced.data().begin() + static_cast<std::ptrdiff_t>(r.rank * rows.cols()));
  return SubspaceOf<F>{rows.cols(), MatOf<F>(r.rank, rows.cols(), std::move(data))};
}

template <FiniteField F>
SubspaceOf<F> subspace_full(const F& f, std::size_t n) {
  return SubspaceOf<F>{n, mat_identity(f, n)};
}

template <FiniteField F>
SubspaceOf<F> subspace_zero(const F& f, std::size_t n) {
  return SubspaceOf<F>{n, mat_zero(f, 0, n)};
}

/// Null space {x : M x = 0}.
template <FiniteField F>
SubspaceOf<F> kernel(const F& f, const MatOf<F>& m) {
  const auto r = rref(f, m);
  const std::size_t n = m.cols();
  std::vector<bool> is_pivot(n, false);
  for (auto p : r.pivots) is_pivot[p] = true;
  const std::size_t nfree = n - r.rank;
  auto basis = mat_zero(f, nfree, n);
  std::size_t b = 0;
  // built directly in RREF order: free columns ascending, pivots eliminated
  for (std::size_t col = 0; col < n; ++col) {
    if (is_pivot[col]) continue;
    basis(b, col) = f.one();
    for (std::size_t row = 0; row < r.rank; ++row) basis(b, r.pivots[row]) = f.neg(r.reduced(row, col));
    ++b;
  }
  return subspace_span(f, basis);
}

/// Whether v lies in the subspace.
template <FiniteField F>
bool subspace_contains(const F& f, const SubspaceOf<F>& s, const std::vector<typename F::Elem>& v) {
  if (v.size() != s.ambient_dim) throw Error(ErrorKind::DimensionMismatch, "vector length vs ambient dimension");
  auto residual = v;
  for (std::size_t row = 0; row < s.dim(); ++row) {
    std::size_t pivot = 0;
    while (f.is_zero(s.basis(row, pivot))) ++pivot;
    const auto c = residual[pivot];
    if (f.is_zero(c)) continue;
    for (std::size_t j = pivot; j < s.ambient_dim; ++j) residual[j] = f.sub(residual[j], f.mul(c, s.basis(row, j)));
  }
  for (const auto& x : residual) {
    if (!f.is_zero(x)) return false;
  }
  return true;
}

/// Linear combination sum_i coords[i] * basis row i.
template <FiniteField F>
std::vector<typename F::Elem> subspace_combine(const F& f, const SubspaceOf<F>& s,
                                               const std::vector<typename F::Elem>& coords) {
  if (coords.size() != s.dim()) throw Error(ErrorKind::DimensionMismatch, "coordinate count");
  std::vector<typename F::Elem> v(s.ambient_dim, f.zero());
  for (std::size_t i = 0; i < s.dim(); ++i) {
    if (f.is_zero(coords[i])) continue;
    for (std::size_t j = 0; j < s.ambient_dim; ++j) v[j] = f.add(v[j], f.mul(coords[i], s.basis(i, j)));
  }
  return v;
}

template <FiniteField F>
std::vector<typename F::Elem> subspace_random(const F& f, const SubspaceOf<F>& s, Rng& rng) {
  std::vector<typename F::Elem> coords(s.dim());
  for (auto& c : coords) c = f.random(rng);
  return subspace_combine(f, s, coords);
}

template <FiniteField F>
MatOf<F> mat_inverse(const F& f, const MatOf<F>& m) {
  if (!m.is_square()) throw Error(ErrorKind::NotSquare, "inverse of a non-square matrix");
  const std::size_t n = m.rows();
  auto aug = mat_zero(f, n, 2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) aug(i, j) = m(i, j);
    aug(i, n + i) = f.one();
  }
  const auto r = rref(f, aug);
  if (r.rank < n || (n > 0 && r.pivots[n - 1] != n - 1)) throw Error(ErrorKind::Singular, "matrix is singular");
  auto inv = mat_zero(f, n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) inv(i, j) = r.reduced(i, n + j);
  }
  return inv;
}

template <FiniteField F>
bool mat_is_invertible(const F& f, const MatOf<F>& m) {
  return m.is_square() && mat_rank(f, m) == m.rows();
}

/// det(tI - M), via similarity reduction to upper Hessenberg form.
template <FiniteField F>
PolyOf<F> charpoly(const F& f, const MatOf<F>& m) {
  if (!m.is_square()) throw Error(ErrorKind::NotSquare, "characteristic polynomial of a non-square matrix");
  const std::size_t n = m.rows();
  auto h = m;
  for (std::size_t j = 0; j + 2 < n; ++j) {
    std::size_t piv = j + 1;
    while (piv < n && f.is_zero(h(piv, j))) ++piv;
    if (piv == n) continue;
    if (piv != j + 1) {
      h.swap_rows(piv, j + 1);
      for (std::size_t i = 0; i < n; ++i) std::swap(h(i, piv), h(i, j + 1));
    }
    const auto inv = f.inv(h(j + 1, j));
    for (std::size_t i = j + 2; i < n; ++i) {
      if (f.is_zero(h(i, j))) continue;
      const auto u = f.mul(h(i, j), inv);
      for (std::size_t c = 0; c < n; ++c) h(i, c) = f.sub(h(i, c), f.mul(u, h(j + 1, c)));
      for (std::size_t r = 0; r < n; ++r) h(r, j + 1) = f.add(h(r, j + 1), f.mul(u, h(r, i)));
    }
  }
  // p_{k+1} = (t - h_kk) p_k - sum_{i<k} h_ik (prod_{j=i+1..k} h_{j,j-1}) p_i
  std::vector<PolyOf<F>> p;
  p.reserve(n + 1);
  p.push_back(poly_one(f));
  const auto x = poly_x(f);
  for (std::size_t k = 0; k < n; ++k) {
    auto next = poly_sub(f, poly_mul(f, x, p[k]), poly_scale(f, p[k], h(k, k)));
    auto prod = f.one();
    for (std::size_t i = k; i-- > 0;) {
      prod = f.mul(prod, h(i + 1, i));
      if (f.is_zero(prod)) break;
      next = poly_sub(f, next, poly_scale(f, p[i], f.mul(h(i, k), prod)));
    }
    p.push_back(std::move(next));
  }
  return p[n];
}

/// All X with V X = X U, as a subspace of F^{m^2} under row-major flattening.
template <FiniteField F>
SubspaceOf<F> solve_sylvester_commutant(const F& f, const MatOf<F>& u, const MatOf<F>& v) {
  if (!u.is_square() || !v.is_square() || u.rows() != v.rows()) {
    throw Error(ErrorKind::DimensionMismatch, "commutant needs square matrices of equal size");
  }
  const std::size_t m = u.rows();
  auto sys = mat_zero(f, m * m, m * m);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      const std::size_t eq = i * m + j;
      for (std::size_t l = 0; l < m; ++l) {
        sys(eq, l * m + j) = f.add(sys(eq, l * m + j), v(i, l));
        sys(eq, i * m + l) = f.sub(sys(eq, i * m + l), u(l, j));
      }
    }
  }
  return kernel(f, sys);
}

template <FiniteField F>
MatOf<F> mat_random(const F& f, std::size_t rows, std::size_t cols, Rng& rng) {
  auto m = mat_zero(f, rows, cols);
  for (auto& x : m.data()) x = f.random(rng);
  return m;
}

/// Uniform element of GL_m by rejection sampling.
template <FiniteField F>
MatOf<F> random_invertible(const F& f, std::size_t m, Rng& rng) {
  if (m == 0) throw Error(ErrorKind::InvalidArgument, "matrix size must be >= 1");
  constexpr int kMaxTries = 256;
  for (int i = 0; i < kMaxTries; ++i) {
    auto a = mat_random(f, m, m, rng);
    if (mat_rank(f, a) == m) return a;
  }
  throw Error(ErrorKind::RetryExhausted, "no invertible matrix after 256 draws");
}

}  // namespace mce
