#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "field.hpp"
#include "poly.hpp"

namespace mce {

/// F_{q^d} = F_q[x]/(modulus), a single extension over the prime field.
/// Elements are coefficient vectors of length d, constant term first.
class ExtField {
 public:
  using Elem = std::vector<std::uint64_t>;

  /// Verifies that `modulus` is monic irreducible over F_q.
  ExtField(PrimeField base, Poly<std::uint64_t> modulus) : base_(base), modulus_(std::move(modulus)) {
    if (modulus_.degree() < 1 || modulus_.lead() != 1) {
      throw Error(ErrorKind::InvalidArgument, "extension modulus must be monic of degree >= 1");
    }
    for (auto c : modulus_.coeffs) {
      if (c >= base_.characteristic()) throw Error(ErrorKind::InvalidArgument, "modulus coefficient not reduced");
    }
    if (!poly_is_irreducible(base_, modulus_)) {
      throw Error(ErrorKind::InvalidArgument, "extension modulus is reducible over F_" + std::to_string(base_.characteristic()));
    }
    d_ = static_cast<unsigned>(modulus_.degree());
  }

  /// F_{q^d} from a deterministic irreducible polynomial.
  static ExtField of_degree(const PrimeField& base, unsigned d, std::uint64_t seed = 0) {
    return ExtField(base, find_irreducible(base.characteristic(), d, seed));
  }

  const PrimeField& base() const { return base_; }
  const Poly<std::uint64_t>& modulus() const { return modulus_; }
  std::uint64_t characteristic() const { return base_.characteristic(); }
  unsigned degree() const { return d_; }

  Elem zero() const { return Elem(d_, 0); }
  Elem one() const {
    Elem e(d_, 0);
    e[0] = 1;
    return e;
  }
  Elem from_int(std::int64_t v) const { return embed(base_.from_int(v)); }
  Elem embed(std::uint64_t a) const {
    Elem e(d_, 0);
    e[0] = a;
    return e;
  }
  /// The class of x in F_q[x]/(modulus).
  Elem generator() const {
    if (d_ == 1) return embed(base_.neg(modulus_.coeffs[0]));
    Elem e(d_, 0);
    e[1] = 1;
    return e;
  }

  bool in_base(const Elem& a) const {
    for (unsigned i = 1; i < d_; ++i) {
      if (a[i] != 0) return false;
    }
    return true;
  }
  std::uint64_t to_base(const Elem& a) const {
    if (!in_base(a)) throw Error(ErrorKind::InvalidArgument, "element is not in the prime field");
    return a[0];
  }

  Elem add(const Elem& a, const Elem& b) const {
    Elem r(d_);
    for (unsigned i = 0; i < d_; ++i) r[i] = base_.add(a[i], b[i]);
    return r;
  }
  Elem sub(const Elem& a, const Elem& b) const {
    Elem r(d_);
    for (unsigned i = 0; i < d_; ++i) r[i] = base_.sub(a[i], b[i]);
    return r;
  }
  Elem neg(const Elem& a) const {
    Elem r(d_);
    for (unsigned i = 0; i < d_; ++i) r[i] = base_.neg(a[i]);
    return r;
  }

  Elem mul(const Elem& a, const Elem& b) const {
    std::vector<std::uint64_t> prod(2 * d_ - 1, 0);
    for (unsigned i = 0; i < d_; ++i) {
      if (a[i] == 0) continue;
      for (unsigned j = 0; j < d_; ++j) prod[i + j] = base_.add(prod[i + j], base_.mul(a[i], b[j]));
    }
    // reduce by the monic modulus, top degree down
    for (std::size_t top = prod.size(); top-- > d_;) {
      const auto c = prod[top];
      if (c == 0) continue;
      for (unsigned j = 0; j < d_; ++j) {
        prod[top - d_ + j] = base_.sub(prod[top - d_ + j], base_.mul(c, modulus_.coeffs[j]));
      }
    }
    prod.resize(d_);
    return prod;
  }

  Elem inv(const Elem& a) const {
    if (is_zero(a)) throw Error(ErrorKind::ZeroInverse, "inverse of zero in extension field");
    // extended Euclid in F_q[x]: s*a + t*modulus = 1
    Poly<std::uint64_t> r0 = modulus_, r1 = poly_from(base_, a);
    Poly<std::uint64_t> s0, s1 = poly_one(base_);
    while (!r1.is_zero()) {
      auto [quo, rem] = poly_divmod(base_, r0, r1);
      auto s2 = poly_sub(base_, s0, poly_mul(base_, quo, s1));
      r0 = std::move(r1);
      r1 = std::move(rem);
      s0 = std::move(s1);
      s1 = std::move(s2);
    }
    // r0 is a nonzero constant since the modulus is irreducible
    const auto scale = base_.inv(r0.coeffs[0]);
    Elem out(d_, 0);
    for (std::size_t i = 0; i < s0.coeffs.size(); ++i) out[i] = base_.mul(s0.coeffs[i], scale);
    return out;
  }

  bool is_zero(const Elem& a) const {
    for (auto c : a) {
      if (c != 0) return false;
    }
    return true;
  }

  Elem random(Rng& rng) const {
    Elem e(d_);
    for (auto& c : e) c = base_.random(rng);
    return e;
  }

  bool operator==(const ExtField& other) const { return base_ == other.base_ && modulus_ == other.modulus_; }

 private:
  PrimeField base_;
  Poly<std::uint64_t> modulus_;
  unsigned d_ = 1;
};

/// Image of an F_q polynomial in F_{q^d}[t].
inline Poly<ExtField::Elem> poly_embed(const ExtField& ext, const Poly<std::uint64_t>& p) {
  Poly<ExtField::Elem> r;
  r.coeffs.reserve(p.coeffs.size());
  for (auto c : p.coeffs) r.coeffs.push_back(ext.embed(c));
  return r;
}

}  // namespace mce
