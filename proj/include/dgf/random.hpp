#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <random>
#include <thread>
#include <vector>

namespace dgf {

// Substreams are derived by hashing (parent seed, tag...) with the SplitMix64 finalizer.
// Derivation chain used throughout: run seed -> K -> replicate seed -> path chunk.

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t parent, std::initializer_list<std::uint64_t> tags) {
  std::uint64_t h = splitmix64(parent);
  for (auto t : tags) h = splitmix64(h ^ splitmix64(t + 0x632be59bd9b4e019ULL));
  return h;
}

using Engine = std::mt19937_64;

inline Engine make_engine(std::uint64_t seed) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)};
  return Engine(seq);
}

/// Uniform draw on the open interval (0, 1).
inline double uniform_open(Engine& eng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double v;
  do {
    v = u(eng);
  } while (v <= 0.0);
  return v;
}

/// Runs fn(chunk) for chunk in [0, n_chunks) on up to `threads` workers. Work assignment
/// is static, so results written per chunk are independent of the thread count.
template <class Fn>
void parallel_chunks(std::size_t n_chunks, unsigned threads, Fn&& fn) {
  if (threads <= 1 || n_chunks <= 1) {
    for (std::size_t c = 0; c < n_chunks; ++c) fn(c);
    return;
  }
  const std::size_t workers = std::min<std::size_t>(threads, n_chunks);
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (std::size_t c = w; c < n_chunks; c += workers) fn(c);
    });
  }
}

}  // namespace dgf
