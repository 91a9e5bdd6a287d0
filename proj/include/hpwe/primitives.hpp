#pragma once

// Bulk array primitives: scan, reduce, filter, partition and comparison sort.
//
// Charging (one unit per element touched per bulk phase):
//   reduce        s
//   scan          2s   (block totals, then block-local prefix)
//   filter        2s   (flag + count, then write)
//   partition_by  2s
//   sort          s * max(1, ceil(log2 s))
// so every linear primitive charges within [s, kLinearChargeBound * s].
// Each linear primitive on s > 0 elements adds ceil(log2 s) + 1 rounds.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <span>
#include <type_traits>
#include <vector>

#include "hpwe/parallel.hpp"
#include "hpwe/rng.hpp"
#include "hpwe/simd/kernels.hpp"
#include "hpwe/work_meter.hpp"

namespace hpwe {

inline constexpr std::uint64_t kLinearChargeBound = 3;

struct Record {
  std::uint64_t key = 0;
  std::uint64_t payload = 0;

  friend bool operator==(const Record&, const Record&) = default;
};

struct KeyLess {
  bool operator()(const Record& a, const Record& b) const { return a.key < b.key; }
};

template <class T>
struct ScanResult {
  std::vector<T> prefix;
  T total;
};

template <class T>
struct PartitionResult {
  std::vector<T> values;
  std::size_t split = 0;
};

namespace detail {

inline constexpr std::size_t kBlock = 2048;

inline std::uint64_t linear_rounds(std::size_t s) { return s == 0 ? 0 : ceil_log2(s) + 1; }

inline void charge_linear(WorkMeter* meter, std::size_t s, std::uint64_t passes) {
  if (meter == nullptr || s == 0) return;
  meter->charge(passes * s);
  meter->add_rounds(linear_rounds(s));
}

inline std::size_t num_blocks(std::size_t s) { return (s + kBlock - 1) / kBlock; }

template <class T, class Op>
T fold(std::span<const T> a, Op& op, T acc) {
  for (const T& x : a) acc = op(acc, x);
  return acc;
}

}  // namespace detail

template <class T, class Op>
T reduce(std::span<const T> a, Op op, T identity, WorkMeter* meter = nullptr) {
  detail::charge_linear(meter, a.size(), 1);
  if constexpr (std::is_same_v<T, std::uint64_t> && std::is_same_v<Op, std::plus<>>) {
    return identity + simd::sum_u64(a);
  } else {
    const std::size_t blocks = detail::num_blocks(a.size());
    std::vector<T> partial(blocks, identity);
    parallel_for(0, blocks, [&](std::size_t b) {
      const std::size_t lo = b * detail::kBlock;
      const std::size_t hi = std::min(a.size(), lo + detail::kBlock);
      partial[b] = detail::fold(a.subspan(lo, hi - lo), op, identity);
    }, 1);
    return detail::fold(std::span<const T>(partial), op, identity);
  }
}

// Exclusive prefix: prefix[i] = identity op a[0] op ... op a[i-1].
template <class T, class Op>
ScanResult<T> scan(std::span<const T> a, Op op, T identity, WorkMeter* meter = nullptr) {
  detail::charge_linear(meter, a.size(), 2);
  ScanResult<T> result{std::vector<T>(a.size()), identity};
  const std::size_t blocks = detail::num_blocks(a.size());
  std::vector<T> offsets(blocks, identity);
  parallel_for(0, blocks, [&](std::size_t b) {
    const std::size_t lo = b * detail::kBlock;
    const std::size_t hi = std::min(a.size(), lo + detail::kBlock);
    offsets[b] = detail::fold(a.subspan(lo, hi - lo), op, identity);
  }, 1);
  T carry = identity;
  for (auto& off : offsets) {
    const T block_total = off;
    off = carry;
    carry = op(carry, block_total);
  }
  result.total = carry;
  parallel_for(0, blocks, [&](std::size_t b) {
    const std::size_t lo = b * detail::kBlock;
    const std::size_t hi = std::min(a.size(), lo + detail::kBlock);
    if constexpr (std::is_same_v<T, std::uint64_t> && std::is_same_v<Op, std::plus<>>) {
      simd::exclusive_scan_u64(a.subspan(lo, hi - lo),
                               std::span<std::uint64_t>(result.prefix).subspan(lo, hi - lo),
                               offsets[b]);
    } else {
      T acc = offsets[b];
      for (std::size_t i = lo; i < hi; ++i) {
        result.prefix[i] = acc;
        acc = op(acc, a[i]);
      }
    }
  }, 1);
  return result;
}

// Elements satisfying `pred`, in input order.
template <class T, class Pred>
std::vector<T> filter(std::span<const T> a, Pred pred, WorkMeter* meter = nullptr) {
  detail::charge_linear(meter, a.size(), 2);
  const std::size_t blocks = detail::num_blocks(a.size());
  std::vector<std::uint64_t> counts(blocks, 0);
  parallel_for(0, blocks, [&](std::size_t b) {
    const std::size_t lo = b * detail::kBlock;
    const std::size_t hi = std::min(a.size(), lo + detail::kBlock);
    std::uint64_t c = 0;
    for (std::size_t i = lo; i < hi; ++i) c += pred(a[i]) ? 1 : 0;
    counts[b] = c;
  }, 1);
  const std::uint64_t total = simd::exclusive_scan_u64(counts, counts, 0);
  std::vector<T> out(total);
  parallel_for(0, blocks, [&](std::size_t b) {
    const std::size_t lo = b * detail::kBlock;
    const std::size_t hi = std::min(a.size(), lo + detail::kBlock);
    std::uint64_t pos = counts[b];
    for (std::size_t i = lo; i < hi; ++i) {
      if (pred(a[i])) out[pos++] = a[i];
    }
  }, 1);
  return out;
}

// Indices i in [0, n) with pred(i), ascending. Charged like filter.
template <class Index = std::uint32_t, class Pred>
std::vector<Index> pack_indices(std::size_t n, Pred pred, WorkMeter* meter = nullptr) {
  detail::charge_linear(meter, n, 2);
  const std::size_t blocks = detail::num_blocks(n);
  std::vector<std::uint64_t> counts(blocks, 0);
  parallel_for(0, blocks, [&](std::size_t b) {
    const std::size_t lo = b * detail::kBlock;
    const std::size_t hi = std::min(n, lo + detail::kBlock);
    std::uint64_t c = 0;
    for (std::size_t i = lo; i < hi; ++i) c += pred(i) ? 1 : 0;
    counts[b] = c;
  }, 1);
  const std::uint64_t total = simd::exclusive_scan_u64(counts, counts, 0);
  std::vector<Index> out(total);
  parallel_for(0, blocks, [&](std::size_t b) {
    const std::size_t lo = b * detail::kBlock;
    const std::size_t hi = std::min(n, lo + detail::kBlock);
    std::uint64_t pos = counts[b];
    for (std::size_t i = lo; i < hi; ++i) {
      if (pred(i)) out[pos++] = static_cast<Index>(i);
    }
  }, 1);
  return out;
}

// Permutation of `a` with every pred-satisfying element before `split`.
template <class T, class Pred>
PartitionResult<T> partition_by(std::span<const T> a, Pred pred, WorkMeter* meter = nullptr) {
  detail::charge_linear(meter, a.size(), 2);
  const std::size_t blocks = detail::num_blocks(a.size());
  std::vector<std::uint64_t> yes(blocks, 0), no(blocks, 0);
  parallel_for(0, blocks, [&](std::size_t b) {
    const std::size_t lo = b * detail::kBlock;
    const std::size_t hi = std::min(a.size(), lo + detail::kBlock);
    std::uint64_t c = 0;
    for (std::size_t i = lo; i < hi; ++i) c += pred(a[i]) ? 1 : 0;
    yes[b] = c;
    no[b] = (hi - lo) - c;
  }, 1);
  const std::uint64_t split = simd::exclusive_scan_u64(yes, yes, 0);
  simd::exclusive_scan_u64(no, no, split);
  PartitionResult<T> result{std::vector<T>(a.size()), static_cast<std::size_t>(split)};
  parallel_for(0, blocks, [&](std::size_t b) {
    const std::size_t lo = b * detail::kBlock;
    const std::size_t hi = std::min(a.size(), lo + detail::kBlock);
    std::uint64_t y = yes[b], n = no[b];
    for (std::size_t i = lo; i < hi; ++i) {
      if (pred(a[i])) {
        result.values[y++] = a[i];
      } else {
        result.values[n++] = a[i];
      }
    }
  }, 1);
  return result;
}

inline std::uint64_t sort_charge(std::size_t s) {
  return s == 0 ? 0 : static_cast<std::uint64_t>(s) * std::max(1u, ceil_log2(s));
}

// Sorts in place: block-local sorts followed by rounds of pairwise merges.
template <class T, class Less = std::less<>>
void sort_in_place(std::span<T> a, Less less = {}, WorkMeter* meter = nullptr) {
  if (meter != nullptr && !a.empty()) {
    meter->charge(sort_charge(a.size()));
    meter->add_rounds(ceil_log2(a.size()) + 1);
  }
  const std::size_t n = a.size();
  if (n < 2) return;
  const std::size_t run = std::max<std::size_t>(detail::kBlock, (n + num_workers() - 1) / num_workers());
  const std::size_t runs = (n + run - 1) / run;
  parallel_for(0, runs, [&](std::size_t r) {
    const std::size_t lo = r * run;
    const std::size_t hi = std::min(n, lo + run);
    std::sort(a.begin() + lo, a.begin() + hi, less);
  }, 1);
  if (runs == 1) return;
  std::vector<T> buffer(n);
  std::span<T> src = a;
  std::span<T> dst = buffer;
  for (std::size_t width = run; width < n; width *= 2) {
    const std::size_t pairs = (n + 2 * width - 1) / (2 * width);
    parallel_for(0, pairs, [&](std::size_t p) {
      const std::size_t lo = p * 2 * width;
      const std::size_t mid = std::min(n, lo + width);
      const std::size_t hi = std::min(n, lo + 2 * width);
      std::merge(src.begin() + lo, src.begin() + mid, src.begin() + mid, src.begin() + hi,
                 dst.begin() + lo, less);
    }, 1);
    std::swap(src, dst);
  }
  if (src.data() != a.data()) std::copy(src.begin(), src.end(), a.begin());
}

template <class T, class Less = std::less<>>
std::vector<T> comparison_sort(std::span<const T> a, Less less = {}, WorkMeter* meter = nullptr) {
  std::vector<T> out(a.begin(), a.end());
  sort_in_place(std::span<T>(out), less, meter);
  return out;
}

}  // namespace hpwe
