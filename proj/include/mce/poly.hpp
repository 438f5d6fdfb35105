#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <utility>
#include <vector>

#include "field.hpp"

namespace mce {

/// Univariate polynomial, constant term first, no trailing zeros.
/// The zero polynomial has an empty coefficient vector.
template <class E>
struct Poly {
  std::vector<E> coeffs;

  int degree() const { return static_cast<int>(coeffs.size()) - 1; }
  bool is_zero() const { return coeffs.empty(); }
  const E& lead() const { return coeffs.back(); }
  bool operator==(const Poly&) const = default;
  auto operator<=>(const Poly& other) const {
    if (coeffs.size() != other.coeffs.size()) return coeffs.size() <=> other.coeffs.size();
    for (std::size_t i = coeffs.size(); i-- > 0;) {
      if (coeffs[i] < other.coeffs[i]) return std::strong_ordering::less;
      if (other.coeffs[i] < coeffs[i]) return std::strong_ordering::greater;
    }
    return std::strong_ordering::equal;
  }
};

template <class E>
struct PolyFactor {
  Poly<E> factor;
  unsigned multiplicity;
  bool operator==(const PolyFactor&) const = default;
};

template <FiniteField F>
using PolyOf = Poly<typename F::Elem>;

template <FiniteField F>
PolyOf<F> poly_trim(const F& f, PolyOf<F> p) {
  while (!p.coeffs.empty() && f.is_zero(p.coeffs.back())) p.coeffs.pop_back();
  return p;
}

template <FiniteField F>
PolyOf<F> poly_from(const F& f, std::vector<typename F::Elem> coeffs) {
  return poly_trim(f, PolyOf<F>{std::move(coeffs)});
}

template <FiniteField F>
PolyOf<F> poly_constant(const F& f, const typename F::Elem& c) {
  return poly_from(f, {c});
}

/// The monomial t.
template <FiniteField F>
PolyOf<F> poly_x(const F& f) {
  return PolyOf<F>{{f.zero(), f.one()}};
}

template <FiniteField F>
PolyOf<F> poly_one(const F& f) {
  return PolyOf<F>{{f.one()}};
}

template <FiniteField F>
bool poly_is_one(const F& f, const PolyOf<F>& p) {
  return p.coeffs.size() == 1 && p.coeffs[0] == f.one();
}

template <FiniteField F>
PolyOf<F> poly_add(const F& f, const PolyOf<F>& a, const PolyOf<F>& b) {
  std::vector<typename F::Elem> r(std::max(a.coeffs.size(), b.coeffs.size()), f.zero());
  for (std::size_t i = 0; i < a.coeffs.size(); ++i) r[i] = a.coeffs[i];
  for (std::size_t i = 0; i < b.coeffs.size(); ++i) r[i] = f.add(r[i], b.coeffs[i]);
  return poly_from(f, std::move(r));
}

template <FiniteField F>
PolyOf<F> poly_sub(const F& f, const PolyOf<F>& a, const PolyOf<F>& b) {
  std::vector<typename F::Elem> r(std::max(a.coeffs.size(), b.coeffs.size()), f.zero());
  for (std::size_t i = 0; i < a.coeffs.size(); ++i) r[i] = a.coeffs[i];
  for (std::size_t i = 0; i < b.coeffs.size(); ++i) r[i] = f.sub(r[i], b.coeffs[i]);
  return poly_from(f, std::move(r));
}

template <FiniteField F>
PolyOf<F> poly_scale(const F& f, const PolyOf<F>& a, const typename F::Elem& c) {
  std::vector<typename F::Elem> r;
  r.reserve(a.coeffs.size());
  for (const auto& x : a.coeffs) r.push_back(f.mul(x, c));
  return poly_from(f, std::move(r));
}

template <FiniteField F>
PolyOf<F> poly_mul(const F& f, const PolyOf<F>& a, const PolyOf<F>& b) {
  if (a.is_zero() || b.is_zero()) return {};
  std::vector<typename F::Elem> r(a.coeffs.size() + b.coeffs.size() - 1, f.zero());
  for (std::size_t i = 0; i < a.coeffs.size(); ++i) {
    if (f.is_zero(a.coeffs[i])) continue;
    for (std::size_t j = 0; j < b.coeffs.size(); ++j) r[i + j] = f.add(r[i + j], f.mul(a.coeffs[i], b.coeffs[j]));
  }
  return poly_from(f, std::move(r));
}

/// Quotient and remainder; divisor must be nonzero.
template <FiniteField F>
std::pair<PolyOf<F>, PolyOf<F>> poly_divmod(const F& f, const PolyOf<F>& a, const PolyOf<F>& b) {
  if (b.is_zero()) throw Error(ErrorKind::ZeroInverse, "polynomial division by zero");
  if (a.degree() < b.degree()) return {PolyOf<F>{}, a};
  std::vector<typename F::Elem> rem = a.coeffs;
  std::vector<typename F::Elem> quo(a.coeffs.size() - b.coeffs.size() + 1, f.zero());
  const auto lead_inv = f.inv(b.lead());
  const std::size_t db = b.coeffs.size() - 1;
  for (std::size_t i = quo.size(); i-- > 0;) {
    const auto c = f.mul(rem[i + db], lead_inv);
    quo[i] = c;
    if (f.is_zero(c)) continue;
    for (std::size_t j = 0; j <= db; ++j) rem[i + j] = f.sub(rem[i + j], f.mul(c, b.coeffs[j]));
  }
  rem.resize(db);
  return {poly_from(f, std::move(quo)), poly_from(f, std::move(rem))};
}

template <FiniteField F>
PolyOf<F> poly_mod(const F& f, const PolyOf<F>& a, const PolyOf<F>& b) {
  return poly_divmod(f, a, b).second;
}

template <FiniteField F>
PolyOf<F> poly_div_exact(const F& f, const PolyOf<F>& a, const PolyOf<F>& b) {
  return poly_divmod(f, a, b).first;
}

template <FiniteField F>
PolyOf<F> poly_monic(const F& f, const PolyOf<F>& a) {
  if (a.is_zero()) return a;
  return poly_scale(f, a, f.inv(a.lead()));
}

/// Monic gcd (zero only when both inputs are zero).
template <FiniteField F>
PolyOf<F> poly_gcd(const F& f, PolyOf<F> a, PolyOf<F> b) {
  while (!b.is_zero()) {
    auto r = poly_mod(f, a, b);
    a = std::move(b);
    b = std::move(r);
  }
  return poly_monic(f, a);
}

template <FiniteField F>
PolyOf<F> poly_derivative(const F& f, const PolyOf<F>& a) {
  if (a.coeffs.size() <= 1) return {};
  std::vector<typename F::Elem> r(a.coeffs.size() - 1);
  for (std::size_t i = 1; i < a.coeffs.size(); ++i) {
    r[i - 1] = f.mul(a.coeffs[i], f.from_int(static_cast<std::int64_t>(i % f.characteristic())));
  }
  return poly_from(f, std::move(r));
}

template <FiniteField F>
typename F::Elem poly_eval(const F& f, const PolyOf<F>& a, const typename F::Elem& x) {
  typename F::Elem r = f.zero();
  for (std::size_t i = a.coeffs.size(); i-- > 0;) r = f.add(f.mul(r, x), a.coeffs[i]);
  return r;
}

template <FiniteField F>
PolyOf<F> poly_mulmod(const F& f, const PolyOf<F>& a, const PolyOf<F>& b, const PolyOf<F>& mod) {
  return poly_mod(f, poly_mul(f, a, b), mod);
}

template <FiniteField F>
PolyOf<F> poly_powmod(const F& f, PolyOf<F> base, std::uint64_t e, const PolyOf<F>& mod) {
  PolyOf<F> r = poly_mod(f, poly_one(f), mod);
  base = poly_mod(f, base, mod);
  while (e) {
    if (e & 1) r = poly_mulmod(f, r, base, mod);
    e >>= 1;
    if (e) base = poly_mulmod(f, base, base, mod);
  }
  return r;
}

/// base^(p^times) mod `mod`, p the characteristic.
template <FiniteField F>
PolyOf<F> poly_frobenius(const F& f, PolyOf<F> base, unsigned times, const PolyOf<F>& mod) {
  for (unsigned i = 0; i < times; ++i) base = poly_powmod(f, base, f.characteristic(), mod);
  return base;
}

/// True iff gcd(p, p') = 1.
template <FiniteField F>
bool poly_is_separable(const F& f, const PolyOf<F>& p) {
  if (p.is_zero()) throw Error(ErrorKind::InvalidArgument, "separability of the zero polynomial");
  if (p.degree() == 0) return true;
  const auto d = poly_derivative(f, p);
  if (d.is_zero()) return false;
  return poly_gcd(f, p, d).degree() == 0;
}

namespace detail {

// a^(1/p) in a field of order p^D is a^(p^(D-1)).
template <FiniteField F>
typename F::Elem pth_root(const F& f, typename F::Elem a) {
  for (unsigned i = 1; i < f.degree(); ++i) a = field_pow(f, a, f.characteristic());
  return a;
}

// For p with p' = 0, the polynomial g with g(t^char) = p.
template <FiniteField F>
PolyOf<F> poly_pth_root(const F& f, const PolyOf<F>& p) {
  const std::uint64_t ch = f.characteristic();
  std::vector<typename F::Elem> r;
  for (std::size_t i = 0; i < p.coeffs.size(); i += ch) r.push_back(pth_root(f, p.coeffs[i]));
  return poly_from(f, std::move(r));
}

template <FiniteField F>
void squarefree_rec(const F& f, const PolyOf<F>& p, unsigned scale, std::vector<PolyFactor<typename F::Elem>>& out) {
  if (p.degree() < 1) return;
  const auto dp = poly_derivative(f, p);
  if (dp.is_zero()) {
    squarefree_rec(f, poly_pth_root(f, p), scale * static_cast<unsigned>(f.characteristic()), out);
    return;
  }
  auto c = poly_gcd(f, p, dp);
  auto w = poly_div_exact(f, p, c);
  unsigned i = 1;
  while (w.degree() >= 1) {
    auto y = poly_gcd(f, w, c);
    auto fac = poly_div_exact(f, w, y);
    if (fac.degree() >= 1) out.push_back({poly_monic(f, fac), i * scale});
    ++i;
    w = std::move(y);
    c = poly_div_exact(f, c, w);
  }
  if (c.degree() >= 1) {
    squarefree_rec(f, poly_pth_root(f, c), scale * static_cast<unsigned>(f.characteristic()), out);
  }
}

// a^((Q^i - 1)/2) mod g with Q = p^D, written as (a^(1 + p + ... + p^(Di-1)))^((p-1)/2).
template <FiniteField F>
PolyOf<F> half_order_power(const F& f, const PolyOf<F>& a, unsigned i, const PolyOf<F>& g) {
  const unsigned n = f.degree() * i;
  PolyOf<F> cur = poly_mod(f, a, g);
  PolyOf<F> acc = cur;
  for (unsigned j = 1; j < n; ++j) {
    cur = poly_frobenius(f, cur, 1, g);
    acc = poly_mulmod(f, acc, cur, g);
  }
  return poly_powmod(f, acc, (f.characteristic() - 1) / 2, g);
}

template <FiniteField F>
void equal_degree_split(const F& f, const PolyOf<F>& g, unsigned i, Rng& rng, std::vector<PolyOf<F>>& out) {
  if (g.degree() == static_cast<int>(i)) {
    out.push_back(g);
    return;
  }
  constexpr int kMaxTries = 64;
  for (int attempt = 0; attempt < kMaxTries; ++attempt) {
    std::vector<typename F::Elem> a(static_cast<std::size_t>(g.degree()));
    for (auto& x : a) x = f.random(rng);
    const auto ap = poly_from(f, std::move(a));
    if (ap.degree() < 1) continue;
    const auto b = half_order_power(f, ap, i, g);
    const auto h = poly_gcd(f, g, poly_sub(f, b, poly_one(f)));
    if (h.degree() > 0 && h.degree() < g.degree()) {
      equal_degree_split(f, h, i, rng, out);
      equal_degree_split(f, poly_monic(f, poly_div_exact(f, g, h)), i, rng, out);
      return;
    }
  }
  throw Error(ErrorKind::RetryExhausted, "equal-degree splitting did not converge");
}

// Squarefree monic input; returns (product of all degree-i factors, i).
template <FiniteField F>
std::vector<std::pair<PolyOf<F>, unsigned>> distinct_degree(const F& f, PolyOf<F> g) {
  std::vector<std::pair<PolyOf<F>, unsigned>> out;
  const auto x = poly_x(f);
  PolyOf<F> h = poly_mod(f, x, g);
  for (unsigned i = 1; g.degree() >= 2 * static_cast<int>(i); ++i) {
    h = poly_frobenius(f, h, f.degree(), g);
    const auto d = poly_gcd(f, g, poly_sub(f, h, x));
    if (d.degree() >= 1) {
      out.emplace_back(d, i);
      g = poly_monic(f, poly_div_exact(f, g, d));
      h = poly_mod(f, h, g);
    }
  }
  if (g.degree() >= 1) out.emplace_back(g, static_cast<unsigned>(g.degree()));
  return out;
}

}  // namespace detail

/// Squarefree decomposition: monic pairwise-coprime squarefree parts with multiplicities.
template <FiniteField F>
std::vector<PolyFactor<typename F::Elem>> poly_squarefree(const F& f, const PolyOf<F>& p) {
  std::vector<PolyFactor<typename F::Elem>> out;
  detail::squarefree_rec(f, poly_monic(f, p), 1, out);
  return out;
}

/// Complete factorization of a monic polynomial into irreducibles with multiplicity,
/// sorted by (degree, coefficients).
template <FiniteField F>
std::vector<PolyFactor<typename F::Elem>> poly_factor(const F& f, const PolyOf<F>& p) {
  if (p.degree() < 1) throw Error(ErrorKind::InvalidArgument, "factorization needs degree >= 1");
  // fixed seed: factorization is a pure function of its input
  Rng rng(0x5eed'fac7'0123'4567ULL);
  std::vector<PolyFactor<typename F::Elem>> out;
  for (const auto& [part, mult] : poly_squarefree(f, p)) {
    for (const auto& [block, deg] : detail::distinct_degree(f, part)) {
      std::vector<PolyOf<F>> pieces;
      detail::equal_degree_split(f, block, deg, rng, pieces);
      for (auto& piece : pieces) out.push_back({poly_monic(f, piece), mult});
    }
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.factor < b.factor; });
  return out;
}

template <FiniteField F>
bool poly_is_irreducible(const F& f, const PolyOf<F>& p) {
  if (p.degree() < 1) return false;
  if (p.degree() == 1) return true;
  const auto g = poly_monic(f, p);
  const auto x = poly_x(f);
  PolyOf<F> h = poly_mod(f, x, g);
  for (int i = 1; 2 * i <= g.degree(); ++i) {
    h = poly_frobenius(f, h, f.degree(), g);
    if (poly_gcd(f, g, poly_sub(f, h, x)).degree() != 0) return false;
  }
  return true;
}

/// Degree of the splitting field: lcm of the irreducible factor degrees.
template <FiniteField F>
unsigned splitting_degree(const F& f, const PolyOf<F>& p) {
  unsigned d = 1;
  for (const auto& fac : poly_factor(f, p)) d = std::lcm(d, static_cast<unsigned>(fac.factor.degree()));
  return d;
}

/// All roots in the field, repeated by multiplicity, sorted.
template <FiniteField F>
std::vector<typename F::Elem> poly_roots(const F& f, const PolyOf<F>& p) {
  std::vector<typename F::Elem> roots;
  if (p.degree() < 1) return roots;
  for (const auto& fac : poly_factor(f, p)) {
    if (fac.factor.degree() != 1) continue;
    const auto r = f.neg(fac.factor.coeffs[0]);
    for (unsigned i = 0; i < fac.multiplicity; ++i) roots.push_back(r);
  }
  std::sort(roots.begin(), roots.end());
  return roots;
}

/// The unique polynomial of degree < points.size() through the given points.
template <FiniteField F>
PolyOf<F> lagrange_interpolate(const F& f, const std::vector<std::pair<typename F::Elem, typename F::Elem>>& points) {
  if (points.empty()) throw Error(ErrorKind::InvalidArgument, "interpolation needs at least one point");
  for (std::size_t i = 0; i < points.size(); ++i) {
    for (std::size_t j = i + 1; j < points.size(); ++j) {
      if (points[i].first == points[j].first) throw Error(ErrorKind::DuplicateAbscissa, "repeated abscissa");
    }
  }
  PolyOf<F> result;
  for (std::size_t i = 0; i < points.size(); ++i) {
    PolyOf<F> basis = poly_one(f);
    typename F::Elem denom = f.one();
    for (std::size_t j = 0; j < points.size(); ++j) {
      if (j == i) continue;
      basis = poly_mul(f, basis, PolyOf<F>{{f.neg(points[j].first), f.one()}});
      denom = f.mul(denom, f.sub(points[i].first, points[j].first));
    }
    result = poly_add(f, result, poly_scale(f, basis, f.mul(points[i].second, f.inv(denom))));
  }
  return result;
}

/// Monic irreducible polynomial of degree d over F_q, deterministic in (q, d, seed).
inline Poly<std::uint64_t> find_irreducible(std::uint64_t q, unsigned d, std::uint64_t seed = 0) {
  const PrimeField base(q);
  if (d == 0) throw Error(ErrorKind::InvalidArgument, "extension degree must be >= 1");
  if (d == 1) return poly_x(base);
  Rng rng(Rng::splitmix(seed ^ Rng::splitmix(q * 1315423911ULL + d)));
  for (;;) {
    std::vector<std::uint64_t> c(d + 1);
    for (unsigned i = 0; i < d; ++i) c[i] = base.random(rng);
    c[d] = 1;
    if (c[0] == 0) continue;
    Poly<std::uint64_t> p{std::move(c)};
    if (poly_is_irreducible(base, p)) return p;
  }
}

}  // namespace mce
