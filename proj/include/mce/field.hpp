#pragma once

#include <concepts>
#include <cstdint>
#include <string>

#include "error.hpp"
#include "rng.hpp"

namespace mce {

/// Arithmetic interface shared by the prime field and its extensions.
/// Elements are plain values; the field object carries the modulus.
template <class F>
concept FiniteField = requires(const F& f, const typename F::Elem& a, Rng& rng, std::int64_t i) {
  typename F::Elem;
  { f.zero() } -> std::convertible_to<typename F::Elem>;
  { f.one() } -> std::convertible_to<typename F::Elem>;
  { f.from_int(i) } -> std::convertible_to<typename F::Elem>;
  { f.add(a, a) } -> std::convertible_to<typename F::Elem>;
  { f.sub(a, a) } -> std::convertible_to<typename F::Elem>;
  { f.neg(a) } -> std::convertible_to<typename F::Elem>;
  { f.mul(a, a) } -> std::convertible_to<typename F::Elem>;
  { f.inv(a) } -> std::convertible_to<typename F::Elem>;
  { f.is_zero(a) } -> std::convertible_to<bool>;
  { f.random(rng) } -> std::convertible_to<typename F::Elem>;
  { f.characteristic() } -> std::convertible_to<std::uint64_t>;
  { f.degree() } -> std::convertible_to<unsigned>;
  { a == a } -> std::convertible_to<bool>;
  { a < a } -> std::convertible_to<bool>;
};

namespace detail {

inline std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

inline std::uint64_t powmod(std::uint64_t a, std::uint64_t e, std::uint64_t m) {
  std::uint64_t r = 1 % m;
  a %= m;
  while (e) {
    if (e & 1) r = mulmod(r, a, m);
    a = mulmod(a, a, m);
    e >>= 1;
  }
  return r;
}

// Deterministic Miller-Rabin for 64-bit inputs.
inline bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t p : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    if (n % p == 0) return n == p;
  }
  std::uint64_t d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  for (std::uint64_t a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    std::uint64_t x = powmod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int r = 1; r < s; ++r) {
      x = mulmod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

}  // namespace detail

/// F_q for an odd prime q < 2^62. Residues are stored in [0, q).
class PrimeField {
 public:
  using Elem = std::uint64_t;

  explicit PrimeField(std::uint64_t q) : q_(q) {
    if (q < 3 || q >= (1ULL << 62) || !detail::is_prime(q)) {
      throw Error(ErrorKind::InvalidArgument, "field modulus must be an odd prime below 2^62, got " + std::to_string(q));
    }
  }

  std::uint64_t characteristic() const { return q_; }
  std::uint64_t order() const { return q_; }
  unsigned degree() const { return 1; }

  Elem zero() const { return 0; }
  Elem one() const { return 1; }
  Elem from_int(std::int64_t v) const {
    const auto q = static_cast<std::int64_t>(q_);
    std::int64_t r = v % q;
    return static_cast<Elem>(r < 0 ? r + q : r);
  }

  Elem add(Elem a, Elem b) const {
    const Elem s = a + b;
    return s >= q_ ? s - q_ : s;
  }
  Elem sub(Elem a, Elem b) const { return a >= b ? a - b : a + q_ - b; }
  Elem neg(Elem a) const { return a == 0 ? 0 : q_ - a; }
  Elem mul(Elem a, Elem b) const { return detail::mulmod(a, b, q_); }
  Elem pow(Elem a, std::uint64_t e) const { return detail::powmod(a, e, q_); }

  Elem inv(Elem a) const {
    if (a == 0) throw Error(ErrorKind::ZeroInverse, "inverse of zero in F_" + std::to_string(q_));
    // extended Euclid on signed 128-bit to stay exact for q near 2^62
    __int128 t = 0, new_t = 1;
    __int128 r = q_, new_r = a;
    while (new_r != 0) {
      const __int128 quotient = r / new_r;
      const __int128 tmp_t = t - quotient * new_t;
      t = new_t;
      new_t = tmp_t;
      const __int128 tmp_r = r - quotient * new_r;
      r = new_r;
      new_r = tmp_r;
    }
    if (t < 0) t += q_;
    return static_cast<Elem>(t);
  }

  bool is_zero(Elem a) const { return a == 0; }
  Elem random(Rng& rng) const { return rng.below(q_); }
  Elem random_nonzero(Rng& rng) const { return 1 + rng.below(q_ - 1); }

  /// Canonical integer lift used for orderings and serialization.
  std::uint64_t lift(Elem a) const { return a; }

  bool operator==(const PrimeField& other) const { return q_ == other.q_; }

 private:
  std::uint64_t q_;
};

/// a^e for any field, e a machine word.
template <FiniteField F>
typename F::Elem field_pow(const F& f, typename F::Elem a, std::uint64_t e) {
  typename F::Elem r = f.one();
  while (e) {
    if (e & 1) r = f.mul(r, a);
    e >>= 1;
    if (e) a = f.mul(a, a);
  }
  return r;
}

}  // namespace mce
