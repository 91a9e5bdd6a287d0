#pragma once

// Minimal fork-join loop. Workers default to the hardware concurrency and can
// be pinned (e.g. to 1 for profiling). Every loop body must be safe to run on
// disjoint index ranges concurrently.

#include <algorithm>
#include <cstddef>
#include <thread>
#include <vector>

namespace hpwe {

unsigned num_workers();
void set_num_workers(unsigned workers);

inline constexpr std::size_t kDefaultGrain = 4096;

// Calls body(lo, hi) over a partition of [begin, end).
template <class Body>
void parallel_blocks(std::size_t begin, std::size_t end, Body&& body,
                     std::size_t grain = kDefaultGrain) {
  if (end <= begin) return;
  const std::size_t len = end - begin;
  const std::size_t workers = num_workers();
  if (workers <= 1 || len <= grain) {
    body(begin, end);
    return;
  }
  const std::size_t chunks = std::min<std::size_t>(workers, (len + grain - 1) / grain);
  const std::size_t step = (len + chunks - 1) / chunks;
  std::vector<std::jthread> pool;
  pool.reserve(chunks - 1);
  for (std::size_t c = 1; c < chunks; ++c) {
    const std::size_t lo = begin + c * step;
    const std::size_t hi = std::min(end, lo + step);
    if (lo >= hi) break;
    pool.emplace_back([&body, lo, hi] { body(lo, hi); });
  }
  body(begin, std::min(end, begin + step));
}

template <class Fn>
void parallel_for(std::size_t begin, std::size_t end, Fn&& fn,
                  std::size_t grain = kDefaultGrain) {
  parallel_blocks(
      begin, end,
      [&fn](std::size_t lo, std::size_t hi) {
        for (std::size_t i = lo; i < hi; ++i) fn(i);
      },
      grain);
}

}  // namespace hpwe
