// AVX2 variants; this translation unit is compiled with -mavx2 and only
// reached through the runtime dispatch in kernels.cpp.

#include <immintrin.h>

#include <algorithm>

#include "hpwe/simd/kernels.hpp"

namespace hpwe::simd::avx2 {
namespace {

inline __m256i load(const void* p) { return _mm256_loadu_si256(static_cast<const __m256i*>(p)); }

inline std::uint64_t hsum(__m256i v) {
  alignas(32) std::uint64_t lanes[4];
  _mm256_store_si256(reinterpret_cast<__m256i*>(lanes), v);
  return lanes[0] + lanes[1] + lanes[2] + lanes[3];
}

}  // namespace

std::uint64_t sum_u64(std::span<const std::uint64_t> values) {
  const std::size_t n = values.size();
  __m256i acc = _mm256_setzero_si256();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) acc = _mm256_add_epi64(acc, load(values.data() + i));
  std::uint64_t s = hsum(acc);
  for (; i < n; ++i) s += values[i];
  return s;
}

std::uint64_t sum_u32(std::span<const std::uint32_t> values) {
  const std::size_t n = values.size();
  __m256i acc = _mm256_setzero_si256();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m128i v = _mm_loadu_si128(reinterpret_cast<const __m128i*>(values.data() + i));
    acc = _mm256_add_epi64(acc, _mm256_cvtepu32_epi64(v));
  }
  std::uint64_t s = hsum(acc);
  for (; i < n; ++i) s += values[i];
  return s;
}

std::uint64_t max_u64(std::span<const std::uint64_t> values) {
  const std::size_t n = values.size();
  // No unsigned 64-bit compare in AVX2: flip the sign bit and compare signed.
  const __m256i bias = _mm256_set1_epi64x(static_cast<long long>(0x8000000000000000ULL));
  __m256i best = bias;  // biased zero
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256i v = _mm256_xor_si256(load(values.data() + i), bias);
    best = _mm256_blendv_epi8(best, v, _mm256_cmpgt_epi64(v, best));
  }
  alignas(32) std::uint64_t lanes[4];
  _mm256_store_si256(reinterpret_cast<__m256i*>(lanes), _mm256_xor_si256(best, bias));
  std::uint64_t m = std::max(std::max(lanes[0], lanes[1]), std::max(lanes[2], lanes[3]));
  for (; i < n; ++i) m = std::max(m, values[i]);
  return m;
}

std::uint32_t max_u32(std::span<const std::uint32_t> values) {
  const std::size_t n = values.size();
  __m256i best = _mm256_setzero_si256();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) best = _mm256_max_epu32(best, load(values.data() + i));
  alignas(32) std::uint32_t lanes[8];
  _mm256_store_si256(reinterpret_cast<__m256i*>(lanes), best);
  std::uint32_t m = *std::max_element(lanes, lanes + 8);
  for (; i < n; ++i) m = std::max(m, values[i]);
  return m;
}

std::uint64_t exclusive_scan_u64(std::span<const std::uint64_t> in,
                                 std::span<std::uint64_t> out, std::uint64_t carry) {
  const std::size_t n = in.size();
  const __m256i zero = _mm256_setzero_si256();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256i x = load(in.data() + i);
    // [a b c d] -> [0 a b c]
    __m256i t = _mm256_blend_epi32(_mm256_permute4x64_epi64(x, _MM_SHUFFLE(2, 1, 0, 0)), zero, 0x03);
    __m256i p = _mm256_add_epi64(x, t);
    // [p0 p1 p2 p3] -> [0 0 p0 p1]
    t = _mm256_blend_epi32(_mm256_permute4x64_epi64(p, _MM_SHUFFLE(1, 0, 0, 0)), zero, 0x0f);
    p = _mm256_add_epi64(p, t);
    const __m256i base = _mm256_set1_epi64x(static_cast<long long>(carry));
    const __m256i excl = _mm256_add_epi64(_mm256_sub_epi64(p, x), base);
    _mm256_storeu_si256(reinterpret_cast<__m256i*>(out.data() + i), excl);
    carry += static_cast<std::uint64_t>(_mm256_extract_epi64(p, 3));
  }
  for (; i < n; ++i) {
    const std::uint64_t v = in[i];
    out[i] = carry;
    carry += v;
  }
  return carry;
}

void tabulate16x4(const std::uint64_t* tables, std::span<const std::uint64_t> keys,
                  std::span<std::uint64_t> out) {
  const std::size_t n = keys.size();
  const auto* t0 = reinterpret_cast<const long long*>(tables);
  const auto* t1 = t0 + kTabTableSize;
  const auto* t2 = t0 + 2 * kTabTableSize;
  const auto* t3 = t0 + 3 * kTabTableSize;
  const __m256i low16 = _mm256_set1_epi64x(0xffff);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256i x = load(keys.data() + i);
    const __m256i c0 = _mm256_and_si256(x, low16);
    const __m256i c1 = _mm256_and_si256(_mm256_srli_epi64(x, 16), low16);
    const __m256i c2 = _mm256_and_si256(_mm256_srli_epi64(x, 32), low16);
    const __m256i c3 = _mm256_srli_epi64(x, 48);
    __m256i h = _mm256_i64gather_epi64(t0, c0, 8);
    h = _mm256_xor_si256(h, _mm256_i64gather_epi64(t1, c1, 8));
    h = _mm256_xor_si256(h, _mm256_i64gather_epi64(t2, c2, 8));
    h = _mm256_xor_si256(h, _mm256_i64gather_epi64(t3, c3, 8));
    _mm256_storeu_si256(reinterpret_cast<__m256i*>(out.data() + i), h);
  }
  if (i < n) scalar::tabulate16x4(tables, keys.subspan(i), out.subspan(i));
}

bool adjacent_collision(std::span<const std::uint64_t> hashes,
                        std::span<const std::uint64_t> keys) {
  const std::size_t n = hashes.size();
  std::size_t i = 1;
  for (; i + 4 <= n; i += 4) {
    const __m256i eq_h = _mm256_cmpeq_epi64(load(hashes.data() + i), load(hashes.data() + i - 1));
    const __m256i eq_k = _mm256_cmpeq_epi64(load(keys.data() + i), load(keys.data() + i - 1));
    if (_mm256_movemask_epi8(_mm256_andnot_si256(eq_k, eq_h)) != 0) return true;
  }
  for (; i < n; ++i) {
    if (hashes[i] == hashes[i - 1] && keys[i] != keys[i - 1]) return true;
  }
  return false;
}

}  // namespace hpwe::simd::avx2
