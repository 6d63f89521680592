#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <thread>
#include <vector>

namespace mertenslab {

/// Splits [lo, hi) into fixed-width shards, evaluates `fn(shard_lo, shard_hi)`
/// on up to `threads` workers and returns the per-shard results in shard
/// order. Shard boundaries depend only on (lo, hi, shard_width), so any
/// reduction over the returned vector is independent of the thread count.
template <class Fn>
auto map_shards(std::uint64_t lo, std::uint64_t hi, std::uint64_t shard_width,
                unsigned threads, Fn fn) {
  using Result = decltype(fn(lo, hi));
  if (hi <= lo) return std::vector<Result>{};
  shard_width = std::max<std::uint64_t>(shard_width, 1);
  const std::uint64_t shards = (hi - lo + shard_width - 1) / shard_width;
  std::vector<Result> results(shards);

  auto run = [&](std::uint64_t s) {
    const std::uint64_t a = lo + s * shard_width;
    const std::uint64_t b = std::min(hi, a + shard_width);
    results[s] = fn(a, b);
  };

  threads = std::max(1u, threads);
  if (threads == 1 || shards == 1) {
    for (std::uint64_t s = 0; s < shards; ++s) run(s);
    return results;
  }

  std::atomic<std::uint64_t> next{0};
  std::vector<std::exception_ptr> errors(threads);
  std::vector<std::jthread> pool;
  const unsigned workers = static_cast<unsigned>(std::min<std::uint64_t>(threads, shards));
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (std::uint64_t s = next++; s < shards; s = next++) run(s);
      } catch (...) {
        errors[w] = std::current_exception();
        next = shards;
      }
    });
  }
  pool.clear();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return results;
}

}  // namespace mertenslab
