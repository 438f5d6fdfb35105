#pragma once

#include <algorithm>
#include <map>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "attack.hpp"

namespace mce {

struct Instance {
  std::uint64_t q = 0;
  std::size_t m = 0, n = 0, k = 0;
  BaseCode c;
  BaseCode d;
};

struct PlantedSolution {
  BaseMat p;
  BaseMat q;
};

/// C random, (P, Q) random invertible, D = P C Q^{-1}; a pure function of the seed.
inline std::pair<Instance, PlantedSolution> gen_instance(std::uint64_t q, std::size_t m, std::size_t n, std::size_t k,
                                                         std::uint64_t seed) {
  if (m == 0 || n == 0 || k == 0 || k > m * n) throw Error(ErrorKind::InvalidArgument, "need 1 <= k <= mn");
  const PrimeField f(q);
  Rng rng(seed);
  auto c = random_code(f, m, n, k, rng);
  auto p = random_invertible(f, m, rng);
  auto qm = random_invertible(f, n, rng);
  auto d = apply_equivalence(c, p, qm);
  return {Instance{q, m, n, k, std::move(c), std::move(d)}, PlantedSolution{std::move(p), std::move(qm)}};
}

/// Two independent random codes of the same shape (inequivalent with overwhelming probability).
inline Instance gen_unrelated(std::uint64_t q, std::size_t m, std::size_t n, std::size_t k, std::uint64_t seed) {
  const PrimeField f(q);
  Rng rng(seed);
  auto c = random_code(f, m, n, k, rng);
  auto d = random_code(f, m, n, k, rng);
  return Instance{q, m, n, k, std::move(c), std::move(d)};
}

inline bool verify_solution(const Instance& inst, const BaseMat& p, const BaseMat& q) {
  const auto& f = inst.c.field();
  if (p.rows() != inst.m || p.cols() != inst.m || q.rows() != inst.n || q.cols() != inst.n) return false;
  if (!mat_is_invertible(f, p) || !mat_is_invertible(f, q)) return false;
  return code_equal(inst.d, apply_equivalence(inst.c, p, q));
}

namespace detail {

// Runs body(worker_rng, index) for index in [0, samples) split over workers
// whose streams are fixed by the master seed and the worker index.
template <class Body>
void parallel_samples(std::uint64_t samples, std::uint64_t seed, unsigned threads, Body body) {
  threads = std::max(1u, threads);
  const Rng master(seed);
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < threads; ++w) {
    const std::uint64_t lo = samples * w / threads, hi = samples * (w + 1) / threads;
    auto run = [&, lo, hi, w] {
      Rng rng(master.split(w));
      for (std::uint64_t i = lo; i < hi; ++i) body(rng, w);
    };
    if (threads == 1) {
      run();
    } else {
      pool.emplace_back(run);
    }
  }
  for (auto& t : pool) t.join();
}

}  // namespace detail

/// Histogram of hull dimensions of uniform k-dimensional codes in ker(Tr) of F_q^{m x m}.
inline std::map<std::size_t, std::uint64_t> hull_dim_stats(std::uint64_t q, std::size_t m, std::size_t k,
                                                           std::uint64_t samples, std::uint64_t seed,
                                                           unsigned threads = 1) {
  if (k + 2 > m * m) throw Error(ErrorKind::OutOfRange, "hull statistics need k <= m^2 - 2");
  const PrimeField f(q);
  std::vector<std::map<std::size_t, std::uint64_t>> partial(std::max(1u, threads));
  detail::parallel_samples(samples, seed, threads, [&](Rng& rng, unsigned w) {
    ++partial[w][hull_dim(random_code(f, m, m, k, rng, true))];
  });
  std::map<std::size_t, std::uint64_t> out;
  for (const auto& part : partial) {
    for (const auto& [dim, count] : part) out[dim] += count;
  }
  return out;
}

struct ClassStats {
  std::map<CharTuple, std::uint64_t> frequencies;
  std::uint64_t draws = 0;
  std::uint64_t qualifying = 0;
  double max_min_ratio = 0;
};

/// Canonical tuples met by the dictionary sampling loop on one random code.
inline ClassStats charpoly_class_stats(std::uint64_t q, std::size_t m, std::size_t n, std::size_t k,
                                       std::uint64_t samples, std::uint64_t seed) {
  const PrimeField f(q);
  Rng rng(seed);
  const auto pre = preprocess(random_code(f, m, n, k, rng), random_code(f, m, n, k, rng));
  const auto dual_c = dual(pre.c);
  const Canonicalizer canon(f);
  ClassStats out;
  for (std::uint64_t i = 0; i < samples; ++i) {
    ++out.draws;
    const auto r = draw_sample(pre.c, dual_c, canon, rng);
    if (!r.sample) continue;
    ++out.qualifying;
    ++out.frequencies[r.sample->norm.tuple];
  }
  if (!out.frequencies.empty()) {
    std::uint64_t lo = ~0ULL, hi = 0;
    for (const auto& [t, c] : out.frequencies) {
      lo = std::min(lo, c);
      hi = std::max(hi, c);
    }
    out.max_min_ratio = static_cast<double>(hi) / static_cast<double>(lo);
  }
  return out;
}

/// dim,count,fraction
inline std::string histogram_csv(const std::map<std::size_t, std::uint64_t>& hist) {
  std::uint64_t total = 0;
  for (const auto& [d, c] : hist) total += c;
  std::ostringstream os;
  os << "dim,count,fraction\n";
  for (const auto& [d, c] : hist) {
    os << d << ',' << c << ',' << (total ? static_cast<double>(c) / static_cast<double>(total) : 0.0) << '\n';
  }
  return os.str();
}

}  // namespace mce
