#pragma once

#include <cstdint>
#include <map>
#include <mutex>
#include <numeric>
#include <optional>
#include <shared_mutex>
#include <string>
#include <utility>
#include <vector>

#include "code.hpp"

namespace mce {

/// (a_{m-3}, ..., a_1, a_0) for chi = t^m + a_{m-3} t^{m-3} + ... + a_0.
/// Position p carries weight p + 3 under the scalar action.
struct CharTuple {
  std::vector<std::uint64_t> coeffs;

  std::size_t m() const { return coeffs.size() + 2; }
  bool is_zero() const {
    for (auto c : coeffs) {
      if (c != 0) return false;
    }
    return true;
  }
  /// Constant coefficient nonzero: the only tuples allowed as dictionary keys.
  bool constant_nonzero() const { return !coeffs.empty() && coeffs.back() != 0; }

  bool operator==(const CharTuple&) const = default;
  auto operator<=>(const CharTuple&) const = default;
};

struct NormCharPoly {
  CharTuple tuple;
  std::uint64_t scalar = 1;
};

inline unsigned tuple_weight(std::size_t position) { return static_cast<unsigned>(position + 3); }

/// lambda . (a_{m-3}, ..., a_0) = (lambda^3 a_{m-3}, ..., lambda^m a_0)
inline CharTuple diamond(const PrimeField& f, std::uint64_t lambda, const CharTuple& chi) {
  if (lambda % f.characteristic() == 0) throw Error(ErrorKind::ZeroScalar, "diamond action by zero");
  CharTuple out{chi.coeffs};
  auto power = f.pow(lambda, 3);
  for (auto& c : out.coeffs) {
    c = f.mul(c, power);
    power = f.mul(power, lambda);
  }
  return out;
}

/// Scalars fixing chi under the diamond action.
inline std::vector<std::uint64_t> diamond_stabilizer(const PrimeField& f, const CharTuple& chi) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t l = 1; l < f.characteristic(); ++l) {
    if (diamond(f, l, chi) == chi) out.push_back(l);
  }
  return out;
}

/// The full characteristic polynomial t^m + a_{m-3} t^{m-3} + ... + a_0.
inline Poly<std::uint64_t> tuple_to_poly(const PrimeField& f, const CharTuple& chi) {
  const std::size_t m = chi.m();
  std::vector<std::uint64_t> c(m + 1, 0);
  c[m] = 1;
  for (std::size_t p = 0; p < chi.coeffs.size(); ++p) c[m - 3 - p] = chi.coeffs[p];
  return poly_from(f, std::move(c));
}

/// Reads the tuple off a monic degree-m charpoly whose t^{m-1}, t^{m-2}
/// coefficients must vanish.
inline CharTuple tuple_from_poly(const Poly<std::uint64_t>& chi) {
  const int m = chi.degree();
  if (m < 3) throw Error(ErrorKind::InvalidArgument, "characteristic tuples need m >= 3");
  if (chi.coeffs[m - 1] != 0 || chi.coeffs[m - 2] != 0) {
    throw Error(ErrorKind::UnexpectedCoefficient, "t^(m-1) or t^(m-2) coefficient is nonzero");
  }
  CharTuple out;
  for (int deg = m - 3; deg >= 0; --deg) out.coeffs.push_back(chi.coeffs[static_cast<std::size_t>(deg)]);
  return out;
}

/// Fixed-width big-endian serialization (8 bytes per coefficient) used as
/// the collision dictionary key.
inline std::string encode_key(const CharTuple& chi) {
  std::string key;
  key.reserve(8 * chi.coeffs.size());
  for (auto c : chi.coeffs) {
    for (int shift = 56; shift >= 0; shift -= 8) key.push_back(static_cast<char>((c >> shift) & 0xff));
  }
  return key;
}

inline CharTuple decode_key(const std::string& key) {
  if (key.size() % 8 != 0) throw Error(ErrorKind::ParseError, "dictionary key length is not a multiple of 8");
  CharTuple out;
  for (std::size_t i = 0; i < key.size(); i += 8) {
    std::uint64_t v = 0;
    for (std::size_t b = 0; b < 8; ++b) v = (v << 8) | static_cast<unsigned char>(key[i + b]);
    out.coeffs.push_back(v);
  }
  return out;
}

/// Lexicographically smallest orbit element (integer lift order) and the
/// smallest scalar reaching it. O(q m).
inline std::pair<CharTuple, std::uint64_t> canonicalize_bruteforce(const PrimeField& f, const CharTuple& chi) {
  if (chi.is_zero()) throw Error(ErrorKind::ZeroTuple, "canonicalization of the zero tuple");
  CharTuple best = chi;
  std::uint64_t best_lambda = 1;
  std::vector<std::uint64_t> cand(chi.coeffs.size());
  for (std::uint64_t l = 2; l < f.characteristic(); ++l) {
    auto power = f.pow(l, 3);
    bool smaller = false, decided = false;
    for (std::size_t p = 0; p < chi.coeffs.size(); ++p) {
      cand[p] = f.mul(chi.coeffs[p], power);
      power = f.mul(power, l);
      if (!decided && cand[p] != best.coeffs[p]) {
        decided = true;
        smaller = cand[p] < best.coeffs[p];
        if (!smaller) break;
      }
    }
    if (smaller) {
      best.coeffs = cand;
      best_lambda = l;
    }
  }
  return {best, best_lambda};
}

namespace detail {

inline std::vector<std::uint64_t> prime_factors(std::uint64_t n) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t p = 2; p * p <= n; ++p) {
    if (n % p) continue;
    out.push_back(p);
    while (n % p == 0) n /= p;
  }
  if (n > 1) out.push_back(n);
  return out;
}

inline std::uint64_t inverse_mod(std::uint64_t a, std::uint64_t n) {
  __int128 t = 0, nt = 1, r = n, nr = a % n;
  while (nr != 0) {
    const __int128 q = r / nr;
    const __int128 tt = t - q * nt;
    t = nt;
    nt = tt;
    const __int128 rr = r - q * nr;
    r = nr;
    nr = rr;
  }
  if (t < 0) t += n;
  return static_cast<std::uint64_t>(t);
}

}  // namespace detail

/// Smallest generator of F_q^x.
inline std::uint64_t primitive_root(const PrimeField& f) {
  const std::uint64_t n = f.characteristic() - 1;
  const auto primes = detail::prime_factors(n);
  for (std::uint64_t g = 2; g < f.characteristic(); ++g) {
    bool ok = true;
    for (auto p : primes) {
      if (f.pow(g, n / p) == 1) {
        ok = false;
        break;
      }
    }
    if (ok) return g;
  }
  return 1;  // q = 3 handled above: 2 is primitive; unreachable for odd primes
}

/// Canonical form by descent over the exponent group: writing lambda = g^e,
/// each nonzero coefficient (in increasing weight) fixes e modulo a finer
/// step, and its exponent is pushed to the least residue reachable. The
/// result is constant on orbits; it generally differs from the lexicographic
/// minimum.
class FastCanonicalizer {
 public:
  static constexpr std::uint64_t kMaxTableOrder = 1ULL << 24;

  explicit FastCanonicalizer(const PrimeField& f) : f_(f) {
    const std::uint64_t q = f.characteristic();
    if (q > kMaxTableOrder) throw Error(ErrorKind::TooLarge, "discrete-log table limited to q <= 2^24");
    g_ = primitive_root(f);
    log_.assign(q, 0);
    std::uint64_t x = 1;
    for (std::uint64_t e = 0; e + 1 < q; ++e) {
      log_[x] = static_cast<std::uint32_t>(e);
      x = f.mul(x, g_);
    }
  }

  std::uint64_t generator() const { return g_; }

  std::pair<CharTuple, std::uint64_t> operator()(const CharTuple& chi) const {
    if (chi.is_zero()) throw Error(ErrorKind::ZeroTuple, "canonicalization of the zero tuple");
    const std::uint64_t n = f_.characteristic() - 1;
    std::uint64_t base = 0;  // lambda ranges over g^(base + step * Z)
    std::uint64_t step = 1;
    for (std::size_t p = 0; p < chi.coeffs.size() && step % n != 0; ++p) {
      if (chi.coeffs[p] == 0) continue;
      const std::uint64_t w = tuple_weight(p);
      const std::uint64_t s = log_[chi.coeffs[p]];
      const std::uint64_t c = (s + detail::mulmod(w % n, base, n)) % n;
      const std::uint64_t move = detail::mulmod(w % n, step, n);
      const std::uint64_t gcd = std::gcd(move, n);  // gcd(0, n) = n
      const std::uint64_t target = c % gcd;
      const std::uint64_t period = n / gcd;
      if (period > 1) {
        // move * j == target - c (mod n)  <=>  (move/gcd) j == (target-c)/gcd (mod period)
        const std::uint64_t delta = ((target + n - c) % n) / gcd;
        const std::uint64_t j = detail::mulmod(delta % period, detail::inverse_mod((move / gcd) % period, period), period);
        base = (base + detail::mulmod(step, j, n)) % n;
      }
      step = static_cast<std::uint64_t>(static_cast<unsigned __int128>(step) * period % n);
      if (step == 0) break;
    }
    const std::uint64_t lambda = f_.pow(g_, base);
    return {diamond(f_, lambda, chi), lambda};
  }

 private:
  PrimeField f_;
  std::uint64_t g_ = 1;
  std::vector<std::uint32_t> log_;
};

enum class CanonMode { BruteForce, Fast };

/// Canonicalizer with an optional memo keyed by (a_{m-3}, a_{m-4}) when both
/// are nonzero; weights 3 and 4 are coprime so that pair alone fixes lambda.
class Canonicalizer {
 public:
  explicit Canonicalizer(PrimeField f, CanonMode mode = CanonMode::BruteForce, bool memo = false)
      : f_(f), mode_(mode), memo_(memo) {
    if (mode_ == CanonMode::Fast) fast_.emplace(f_);
  }

  Canonicalizer(const Canonicalizer& other) : f_(other.f_), mode_(other.mode_), memo_(other.memo_), fast_(other.fast_) {}

  const PrimeField& field() const { return f_; }
  CanonMode mode() const { return mode_; }

  NormCharPoly operator()(const CharTuple& chi) const {
    const bool cacheable = memo_ && chi.coeffs.size() >= 2 && chi.coeffs[0] != 0 && chi.coeffs[1] != 0;
    if (cacheable) {
      std::shared_lock lock(mutex_);
      auto it = cache_.find({chi.coeffs[0], chi.coeffs[1]});
      if (it != cache_.end()) return {diamond(f_, it->second, chi), it->second};
    }
    auto [tuple, lambda] = mode_ == CanonMode::Fast ? (*fast_)(chi) : canonicalize_bruteforce(f_, chi);
    if (cacheable) {
      std::unique_lock lock(mutex_);
      cache_.emplace(std::make_pair(chi.coeffs[0], chi.coeffs[1]), lambda);
    }
    return {std::move(tuple), lambda};
  }

  std::size_t cache_size() const {
    std::shared_lock lock(mutex_);
    return cache_.size();
  }

 private:
  PrimeField f_;
  CanonMode mode_;
  bool memo_;
  std::optional<FastCanonicalizer> fast_;
  mutable std::shared_mutex mutex_;
  mutable std::map<std::pair<std::uint64_t, std::uint64_t>, std::uint64_t> cache_;
};

/// Generator of a one-dimensional hull together with the hull dimension.
template <FiniteField F>
struct HullInfo {
  std::size_t dim = 0;
  MatOf<F> generator;  // set only when dim == 1
};

template <FiniteField F>
HullInfo<F> hull_info(const MatrixCode<F>& c) {
  const auto& f = c.field();
  const auto ker = kernel(f, hull_gram(c));
  HullInfo<F> out{ker.dim(), {}};
  if (out.dim == 1) {
    auto g = c.combine(ker.basis.row(0));
    // scale so the first nonzero entry is one, independent of the basis
    std::size_t i = 0;
    while (f.is_zero(g.data()[i])) ++i;
    out.generator = mat_scale(f, g, f.inv(g.data()[i]));
  }
  return out;
}

/// Normalized characteristic tuple of the hull generator of C, and the
/// generator rescaled so that its characteristic polynomial is that tuple.
/// A nilpotent generator yields the zero tuple with scalar one.
inline std::pair<NormCharPoly, MatOf<PrimeField>> normalize_generator(const Canonicalizer& canon,
                                                                       const MatOf<PrimeField>& u) {
  const auto& f = canon.field();
  const auto tuple = tuple_from_poly(charpoly(f, u));
  if (tuple.is_zero()) return {NormCharPoly{tuple, 1}, u};
  auto norm = canon(tuple);
  auto scaled = mat_scale(f, u, norm.scalar);
  return {std::move(norm), std::move(scaled)};
}

inline std::pair<NormCharPoly, MatOf<PrimeField>> compute_normalized_charpoly(const MatrixCode<PrimeField>& c,
                                                                               const Canonicalizer& canon) {
  if (!c.is_square()) throw Error(ErrorKind::NotSquare, "normalized charpoly needs a square code");
  if (c.m() < 3) throw Error(ErrorKind::InvalidArgument, "normalized charpoly needs m >= 3");
  const auto info = hull_info(c);
  if (info.dim != 1) throw Error(ErrorKind::HullNotOneDim, "hull has dimension " + std::to_string(info.dim));
  return normalize_generator(canon, info.generator);
}

/// Separable and constant-nonzero: the tuple may key the dictionary.
inline bool dictionary_eligible(const PrimeField& f, const CharTuple& chi) {
  return chi.constant_nonzero() && poly_is_separable(f, tuple_to_poly(f, chi));
}

/// Number of diamond orbits of separable tuples with a_0 != 0, by full
/// enumeration of F_q^{m-2}.
inline std::uint64_t count_sep_classes(std::uint64_t q, std::size_t m) {
  const PrimeField f(q);
  if (m < 3) throw Error(ErrorKind::InvalidArgument, "m must be >= 3");
  long double total = 1;
  for (std::size_t i = 0; i < m - 2; ++i) total *= static_cast<long double>(q);
  if (total > 1e7L) throw Error(ErrorKind::TooLarge, "q^(m-2) exceeds 10^7");
  const std::size_t len = m - 2;
  const auto size = static_cast<std::uint64_t>(total);
  auto index_of = [&](const CharTuple& t) {
    std::uint64_t idx = 0;
    for (auto c : t.coeffs) idx = idx * q + c;
    return idx;
  };
  std::vector<bool> seen(size, false);
  std::uint64_t classes = 0;
  CharTuple t{std::vector<std::uint64_t>(len, 0)};
  for (std::uint64_t idx = 0; idx < size; ++idx) {
    std::uint64_t rem = idx;
    for (std::size_t p = len; p-- > 0;) {
      t.coeffs[p] = rem % q;
      rem /= q;
    }
    if (seen[idx] || !t.constant_nonzero()) continue;
    for (std::uint64_t l = 1; l < q; ++l) seen[index_of(diamond(f, l, t))] = true;
    if (poly_is_separable(f, tuple_to_poly(f, t))) ++classes;
  }
  return classes;
}

}  // namespace mce
