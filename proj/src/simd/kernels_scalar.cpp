#include <algorithm>

#include "hpwe/simd/kernels.hpp"

namespace hpwe::simd::scalar {

std::uint64_t sum_u64(std::span<const std::uint64_t> values) {
  std::uint64_t s = 0;
  for (auto v : values) s += v;
  return s;
}

std::uint64_t sum_u32(std::span<const std::uint32_t> values) {
  std::uint64_t s = 0;
  for (auto v : values) s += v;
  return s;
}

std::uint64_t max_u64(std::span<const std::uint64_t> values) {
  std::uint64_t m = 0;
  for (auto v : values) m = std::max(m, v);
  return m;
}

std::uint32_t max_u32(std::span<const std::uint32_t> values) {
  std::uint32_t m = 0;
  for (auto v : values) m = std::max(m, v);
  return m;
}

std::uint64_t exclusive_scan_u64(std::span<const std::uint64_t> in,
                                 std::span<std::uint64_t> out, std::uint64_t carry) {
  for (std::size_t i = 0; i < in.size(); ++i) {
    const std::uint64_t v = in[i];
    out[i] = carry;
    carry += v;
  }
  return carry;
}

void tabulate16x4(const std::uint64_t* tables, std::span<const std::uint64_t> keys,
                  std::span<std::uint64_t> out) {
  const std::uint64_t* t0 = tables;
  const std::uint64_t* t1 = tables + kTabTableSize;
  const std::uint64_t* t2 = tables + 2 * kTabTableSize;
  const std::uint64_t* t3 = tables + 3 * kTabTableSize;
  for (std::size_t i = 0; i < keys.size(); ++i) {
    const std::uint64_t x = keys[i];
    out[i] = t0[x & 0xffff] ^ t1[(x >> 16) & 0xffff] ^ t2[(x >> 32) & 0xffff] ^ t3[x >> 48];
  }
}

bool adjacent_collision(std::span<const std::uint64_t> hashes,
                        std::span<const std::uint64_t> keys) {
  for (std::size_t i = 1; i < hashes.size(); ++i) {
    if (hashes[i] == hashes[i - 1] && keys[i] != keys[i - 1]) return true;
  }
  return false;
}

}  // namespace hpwe::simd::scalar
