#pragma once

#include <chrono>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <unordered_map>
#include <vector>

#include "conjugacy.hpp"

namespace mce {

/// Orientation changes applied before the attack; undone on the solution.
struct Transform {
  bool transposed = false;
  bool dual_swapped = false;
};

struct Preprocessed {
  BaseCode c;
  BaseCode d;
  Transform transform;
};

namespace detail {

inline bool attack_applicable(std::size_t m, std::size_t k) { return k >= 2 && k + 2 <= m * m; }

}  // namespace detail

/// Transposes when m > n, then moves to the larger of k and mn - k. If that
/// orientation falls outside 2 <= k <= m^2 - 2 the other one is tried.
inline Preprocessed preprocess(const BaseCode& c, const BaseCode& d) {
  if (c.m() != d.m() || c.n() != d.n() || c.k() != d.k()) {
    throw Error(ErrorKind::DimensionMismatch, "codes differ in shape or dimension");
  }
  Preprocessed out{c, d, {}};
  if (c.m() > c.n()) {
    out.c = transpose_code(c);
    out.d = transpose_code(d);
    out.transform.transposed = true;
  }
  const std::size_t m = out.c.m(), mn = out.c.m() * out.c.n(), k = out.c.k();
  const bool prefer_swap = mn - k > k;
  for (bool swap : {prefer_swap, !prefer_swap}) {
    if (!detail::attack_applicable(m, swap ? mn - k : k)) continue;
    if (swap) {
      out.c = dual(out.c);
      out.d = dual(out.d);
      out.transform.dual_swapped = true;
    }
    return out;
  }
  throw Error(ErrorKind::OutOfRange, "neither k = " + std::to_string(k) + " nor mn - k = " + std::to_string(mn - k) +
                                         " lies in [2, m^2 - 2] for m = " + std::to_string(m));
}

/// Maps a solution of the preprocessed instance back to the original one.
inline std::pair<BaseMat, BaseMat> undo_transform(const PrimeField& f, const Transform& t, BaseMat p, BaseMat q) {
  auto inv_t = [&](const BaseMat& a) { return mat_transpose(f, mat_inverse(f, a)); };
  if (t.dual_swapped) {
    p = inv_t(p);
    q = inv_t(q);
  }
  if (t.transposed) {
    auto np = inv_t(q);
    auto nq = inv_t(p);
    p = std::move(np);
    q = std::move(nq);
  }
  return {std::move(p), std::move(q)};
}

struct Budgets {
  std::uint64_t dict_size = 1;  // L
  std::uint64_t probes = 1;     // N
};

namespace detail {

inline std::uint64_t saturating_ceil(long double x) {
  constexpr auto kMax = static_cast<long double>(std::numeric_limits<std::uint64_t>::max() / 8);
  if (!(x < kMax)) return std::numeric_limits<std::uint64_t>::max() / 8;
  return std::max<std::uint64_t>(1, static_cast<std::uint64_t>(std::ceil(x)));
}

// q^(e/2) with exact integer powers for even e
inline long double half_power(std::uint64_t q, long long e) {
  long double r = 1;
  for (long long i = 0; i < std::abs(e) / 2; ++i) r *= static_cast<long double>(q);
  if (e % 2 != 0) r *= std::sqrt(static_cast<long double>(q));
  return e < 0 ? 1 / r : r;
}

}  // namespace detail

/// Dictionary size L and probe budget N (probes count one-dimensional hulls).
inline Budgets choose_budgets(std::uint64_t q, std::size_t m, std::size_t kperp) {
  constexpr long double kSafety = 4;
  const auto kp = static_cast<long long>(kperp);
  const auto mm = static_cast<long long>(m);
  Budgets b;
  if (kp - 2 <= 2 * (mm - 3)) {
    const auto scale = detail::half_power(q, kp - 2);
    b.dict_size = detail::saturating_ceil(scale);
    b.probes = detail::saturating_ceil(kSafety * scale);
  } else {
    b.dict_size = detail::saturating_ceil(detail::half_power(q, 2 * (mm - 3)));
    try {
      b.dict_size = std::min(b.dict_size, std::max<std::uint64_t>(1, count_sep_classes(q, m)));
    } catch (const Error&) {
      // class count not enumerable at this size; keep the estimate
    }
    b.probes = detail::saturating_ceil(kSafety * detail::half_power(q, 2 * (kp - mm + 1)));
  }
  return b;
}

/// Why a sampled A (or B) did not yield a usable normalized hull generator.
enum class SampleReject { RankDeficient, DimensionDrop, HullNotOneDim, NotEligible };

inline const char* to_string(SampleReject r) {
  switch (r) {
    case SampleReject::RankDeficient: return "rank_deficient";
    case SampleReject::DimensionDrop: return "dimension_drop";
    case SampleReject::HullNotOneDim: return "hull_not_one_dim";
    case SampleReject::NotEligible: return "inseparable_or_singular";
  }
  return "unknown";
}

/// A sample passing every dictionary guard.
struct HullSample {
  std::vector<std::uint64_t> coords;  // in the basis of the dual code
  BaseMat a;
  BaseCode code_a;  // C A^T
  NormCharPoly norm;
  BaseMat u;  // hull generator scaled to the canonical tuple
};

struct SampleResult {
  std::optional<HullSample> sample;
  std::optional<SampleReject> reject;
  bool hull_one = false;
};

/// Evaluates the guards on A = sum coords_i * dual_i.
inline SampleResult evaluate_sample(const BaseCode& c, const BaseCode& dual_c, std::vector<std::uint64_t> coords,
                                    const Canonicalizer& canon) {
  const auto& f = c.field();
  SampleResult out;
  auto a = dual_c.combine(coords);
  if (mat_rank(f, a) != c.m()) {
    out.reject = SampleReject::RankDeficient;
    return out;
  }
  auto code_a = map_by_A(c, a);
  if (!code_a) {
    out.reject = SampleReject::DimensionDrop;
    return out;
  }
  const auto info = hull_info(*code_a);
  if (info.dim != 1) {
    out.reject = SampleReject::HullNotOneDim;
    return out;
  }
  out.hull_one = true;
  const auto tuple = tuple_from_poly(charpoly(f, info.generator));
  if (!dictionary_eligible(f, tuple)) {
    out.reject = SampleReject::NotEligible;
    return out;
  }
  auto norm = canon(tuple);
  auto u = mat_scale(f, info.generator, norm.scalar);
  out.sample = HullSample{std::move(coords), std::move(a), std::move(*code_a), std::move(norm), std::move(u)};
  return out;
}

inline SampleResult draw_sample(const BaseCode& c, const BaseCode& dual_c, const Canonicalizer& canon, Rng& rng) {
  const auto& f = c.field();
  std::vector<std::uint64_t> coords(dual_c.k());
  for (auto& x : coords) x = f.random(rng);
  return evaluate_sample(c, dual_c, std::move(coords), canon);
}

/// One entry per canonical tuple, first insertion wins. Values are the
/// coordinates of A in the dual basis; C_A and U are rebuilt on demand.
class HullDict {
 public:
  struct Entry {
    std::vector<std::uint64_t> coords;
    CharTuple tuple;
  };

  bool insert(const HullSample& s) {
    return entries_.emplace(encode_key(s.norm.tuple), Entry{s.coords, s.norm.tuple}).second;
  }
  const Entry* find(const CharTuple& t) const {
    auto it = entries_.find(encode_key(t));
    return it == entries_.end() ? nullptr : &it->second;
  }
  std::size_t size() const { return entries_.size(); }
  const std::unordered_map<std::string, Entry>& entries() const { return entries_; }

  std::uint64_t samples_drawn = 0;
  std::uint64_t hulls_dim1_seen = 0;
  std::map<std::string, std::uint64_t> rejects;
  bool saturated = false;

 private:
  std::unordered_map<std::string, Entry> entries_;
};

/// Builds the dictionary from random A in dual(C) until it holds L keys or
/// max_samples draws were made (saturated). threads > 1 samples concurrently
/// with per-worker streams, so the result then depends on scheduling.
inline HullDict construct_dict(const BaseCode& c, std::uint64_t dict_size, const Canonicalizer& canon, Rng& rng,
                               std::uint64_t max_samples = 0, unsigned threads = 1) {
  const auto& f = c.field();
  if (max_samples == 0) max_samples = 8 * f.characteristic() * std::max<std::uint64_t>(dict_size, 1);
  const auto dual_c = dual(c);
  HullDict dict;
  std::mutex mu;
  auto record = [&](const SampleResult& r) {
    ++dict.samples_drawn;
    dict.hulls_dim1_seen += r.hull_one;
    if (r.reject) ++dict.rejects[to_string(*r.reject)];
    if (r.sample) dict.insert(*r.sample);
  };
  if (threads <= 1) {
    while (dict.size() < dict_size && dict.samples_drawn < max_samples) record(draw_sample(c, dual_c, canon, rng));
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < threads; ++w) {
      pool.emplace_back([&, seed = rng.split(w)] {
        Rng local(seed);
        for (;;) {
          {
            std::lock_guard lock(mu);
            if (dict.size() >= dict_size || dict.samples_drawn >= max_samples) return;
          }
          auto r = draw_sample(c, dual_c, canon, local);
          std::lock_guard lock(mu);
          if (dict.size() >= dict_size || dict.samples_drawn >= max_samples) return;
          record(r);
        }
      });
    }
    for (auto& t : pool) t.join();
    rng.next();
  }
  dict.saturated = dict.size() < dict_size;
  return dict;
}

/// Resolves a key hit between C_A and D_B to P with D_B = P C_A P^{-1}. Both
/// generators carry the same canonical tuple, so the hull of D_B is matched
/// against c * V for every scalar c stabilizing that tuple.
inline std::optional<BaseMat> resolve_collision(const BaseCode& code_a, const BaseMat& u, const BaseCode& code_b,
                                                const BaseMat& v, const CharTuple& tuple, ConjStrategy strategy,
                                                Rng& rng) {
  const auto& f = code_a.field();
  for (auto c : diamond_stabilizer(f, tuple)) {
    const auto vc = mat_scale(f, v, c);
    BaseMat r;
    try {
      r = find_conjugator(f, u, vc, rng);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::NotConjugate) throw;
      continue;
    }
    const ConjugacyInstance inst{code_a, code_b, u, vc, std::move(r)};
    auto out = solve_conjugacy(inst, strategy, rng);
    if (out.p) return out.p;
  }
  return std::nullopt;
}

/// Q with D = P C Q^{-1}: solves (P C_i) X in D for X, samples the solution
/// space for an invertible X and returns Q = X^{-1}.
inline BaseMat recover_Q(const BaseCode& c, const BaseCode& d, const BaseMat& p, Rng& rng) {
  const auto& f = c.field();
  const std::size_t n = c.n();
  const auto dual_d = dual(d).basis();
  std::vector<BaseMat> pc;
  for (const auto& ci : c.basis()) pc.push_back(mat_mul(f, p, ci));
  auto sys = mat_zero(f, pc.size() * dual_d.size(), n * n);
  std::size_t row = 0;
  for (const auto& ci : pc) {
    const auto cit = mat_transpose(f, ci);
    for (const auto& bj : dual_d) {
      // Tr(B^T C X) = <vec(C^T B), vec(X)>
      const auto coeff = mat_mul(f, cit, bj);
      for (std::size_t j = 0; j < n * n; ++j) sys(row, j) = coeff.data()[j];
      ++row;
    }
  }
  const auto sol = kernel(f, sys);
  constexpr int kMaxTries = 64;
  if (sol.dim() > 0) {
    for (int i = 0; i < kMaxTries; ++i) {
      const BaseMat x(n, n, subspace_random(f, sol, rng));
      if (!mat_is_invertible(f, x)) continue;
      auto q = mat_inverse(f, x);
      if (code_equal(d, apply_equivalence(c, p, q))) return q;
    }
  }
  throw Error(ErrorKind::NoInvertibleElement, "no invertible Q in a solution space of dimension " + std::to_string(sol.dim()));
}

struct CollisionStats {
  std::uint64_t draws = 0;
  std::uint64_t dim1_hulls = 0;
  std::uint64_t collisions = 0;
  std::uint64_t false_positives = 0;
  std::map<std::size_t, std::uint64_t> linearized_kernel_dims;
};

struct Collision {
  BaseMat a;
  BaseMat b;
  BaseMat p;
  BaseMat q;
};

struct CollisionSearch {
  ConjStrategy strategy = ConjStrategy::Auto;
  unsigned threads = 1;
  std::uint64_t max_draws = 0;  // 0: 64 q (N + 1)
};

/// Probes random B in dual(D) until N one-dimensional hulls were seen. A key
/// hit is resolved by the conjugacy solvers and accepted only once Q is
/// recovered, so a returned collision always solves D = P C Q^{-1}.
inline std::optional<Collision> find_collision(const BaseCode& c, const BaseCode& d, const HullDict& dict,
                                               std::uint64_t probes, const Canonicalizer& canon, Rng& rng,
                                               const CollisionSearch& opts, CollisionStats& stats) {
  const auto& f = c.field();
  if (probes == 0 || dict.size() == 0) return std::nullopt;
  const std::uint64_t max_draws = opts.max_draws ? opts.max_draws : 64 * f.characteristic() * (probes + 1);
  const auto dual_c = dual(c);
  const auto dual_d = dual(d);
  std::mutex mu;
  std::optional<Collision> found;

  auto probe = [&](Rng& local) {
    for (;;) {
      {
        std::lock_guard lock(mu);
        if (found || stats.dim1_hulls >= probes || stats.draws >= max_draws) return;
        ++stats.draws;
      }
      auto r = draw_sample(d, dual_d, canon, local);
      if (!r.hull_one) continue;
      {
        std::lock_guard lock(mu);
        if (stats.dim1_hulls >= probes || found) return;
        ++stats.dim1_hulls;
      }
      if (!r.sample) continue;
      const auto* hit = dict.find(r.sample->norm.tuple);
      if (!hit) continue;
      auto a_side = evaluate_sample(c, dual_c, hit->coords, canon);
      std::optional<Collision> result;
      if (a_side.sample) {
        const auto& as = *a_side.sample;
        const auto& bs = *r.sample;
        if (auto p = resolve_collision(as.code_a, as.u, bs.code_a, bs.u, bs.norm.tuple, opts.strategy, local)) {
          try {
            auto q = recover_Q(c, d, *p, local);
            result = Collision{as.a, bs.a, std::move(*p), std::move(q)};
          } catch (const Error& e) {
            if (e.kind() != ErrorKind::NoInvertibleElement) throw;
          }
        }
      }
      std::lock_guard lock(mu);
      ++stats.collisions;
      if (!result) {
        ++stats.false_positives;
        continue;
      }
      if (!found) found = std::move(result);
      return;
    }
  };

  if (opts.threads <= 1) {
    probe(rng);
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < opts.threads; ++w) {
      pool.emplace_back([&, seed = rng.split(1000 + w)] {
        Rng local(seed);
        probe(local);
      });
    }
    for (auto& t : pool) t.join();
    rng.next();
  }
  return found;
}

struct AttackConfig {
  std::uint64_t dict_size = 0;  // L; 0 selects choose_budgets
  std::uint64_t probes = 0;     // N; 0 selects choose_budgets
  std::uint64_t max_wall_samples = 0;
  ConjStrategy strategy = ConjStrategy::Auto;
  CanonMode canon_mode = CanonMode::BruteForce;
  bool memo = false;
  unsigned threads = 1;
  std::uint64_t seed = 0;
};

struct AttackStats {
  std::uint64_t draws = 0;
  std::uint64_t dim1_hulls = 0;  // dictionary and probe phases together
  std::uint64_t probes_used = 0;
  std::uint64_t keys = 0;
  std::uint64_t collisions = 0;
  std::uint64_t false_positives = 0;
  std::uint64_t dict_size = 0;
  std::uint64_t probes = 0;
  bool saturated = false;
  Transform transform;
  std::map<std::string, double> phase_times_ms;
  bool success = false;
};

enum class AttackPhase { None, OutOfRange, Exhausted, Verification };

inline const char* to_string(AttackPhase p) {
  switch (p) {
    case AttackPhase::None: return "none";
    case AttackPhase::OutOfRange: return "OutOfRange";
    case AttackPhase::Exhausted: return "Exhausted";
    case AttackPhase::Verification: return "Verification";
  }
  return "unknown";
}

struct AttackResult {
  std::optional<BaseMat> p;
  std::optional<BaseMat> q;
  AttackStats stats;
  AttackPhase failure = AttackPhase::None;
  std::string message;
  bool success() const { return p.has_value(); }
};

/// preprocess, dictionary, collision search, Q recovery, mapping back and a
/// final check of D = P C Q^{-1} on the original codes.
inline AttackResult attack(const BaseCode& c, const BaseCode& d, const AttackConfig& cfg) {
  using Clock = std::chrono::steady_clock;
  auto ms_since = [](Clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
  };
  const auto& f = c.field();
  AttackResult out;
  auto t0 = Clock::now();
  std::optional<Preprocessed> pre;
  try {
    pre = preprocess(c, d);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::OutOfRange) throw;
    out.failure = AttackPhase::OutOfRange;
    out.message = e.what();
    return out;
  }
  out.stats.transform = pre->transform;
  out.stats.phase_times_ms["preprocess"] = ms_since(t0);

  const std::size_t m = pre->c.m();
  const std::size_t kperp = pre->c.m() * pre->c.n() - pre->c.k();
  const auto budgets = choose_budgets(f.characteristic(), m, kperp);
  const auto dict_size = cfg.dict_size ? cfg.dict_size : budgets.dict_size;
  const auto probes = cfg.probes ? cfg.probes : budgets.probes;
  out.stats.dict_size = dict_size;
  out.stats.probes = probes;

  Rng rng(cfg.seed);
  const Canonicalizer canon(f, cfg.canon_mode, cfg.memo);
  t0 = Clock::now();
  const auto dict = construct_dict(pre->c, dict_size, canon, rng, cfg.max_wall_samples, cfg.threads);
  out.stats.phase_times_ms["dictionary"] = ms_since(t0);
  out.stats.keys = dict.size();
  out.stats.saturated = dict.saturated;

  t0 = Clock::now();
  CollisionStats cs;
  const auto hit = find_collision(pre->c, pre->d, dict, probes, canon, rng, {cfg.strategy, cfg.threads, 0}, cs);
  out.stats.phase_times_ms["collision"] = ms_since(t0);
  out.stats.draws = dict.samples_drawn + cs.draws;
  out.stats.dim1_hulls = dict.hulls_dim1_seen + cs.dim1_hulls;
  out.stats.probes_used = cs.dim1_hulls;
  out.stats.collisions = cs.collisions;
  out.stats.false_positives = cs.false_positives;
  if (!hit) {
    out.failure = AttackPhase::Exhausted;
    out.message = dict.saturated ? "dictionary saturated and probe budget exhausted" : "probe budget exhausted";
    return out;
  }

  t0 = Clock::now();
  auto [p, q] = undo_transform(f, pre->transform, hit->p, hit->q);
  const bool ok = mat_is_invertible(f, p) && mat_is_invertible(f, q) && code_equal(d, apply_equivalence(c, p, q));
  out.stats.phase_times_ms["verify"] = ms_since(t0);
  if (!ok) {
    out.failure = AttackPhase::Verification;
    out.message = "solution failed verification on the original instance";
    return out;
  }
  out.p = std::move(p);
  out.q = std::move(q);
  out.stats.success = true;
  return out;
}

}  // namespace mce
