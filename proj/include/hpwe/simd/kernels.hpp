#pragma once

// Data-parallel inner loops. Each kernel has a scalar reference in
// `hpwe::simd::scalar` and, on x86-64 builds, an AVX2 variant in
// `hpwe::simd::avx2`. The unqualified entry points dispatch once at startup
// based on CPUID; setting HPWE_SIMD=scalar in the environment forces the
// reference path.

#include <cstddef>
#include <cstdint>
#include <span>

namespace hpwe::simd {

enum class Isa { kScalar, kAvx2 };

Isa active_isa();
const char* isa_name(Isa isa);
bool cpu_has_avx2();
// Overrides the dispatch choice; requesting kAvx2 on a host without it
// falls back to scalar. Intended for tests and benchmarks.
void force_isa(Isa isa);

// Character layout of the default tabulation hash: four 16-bit characters.
inline constexpr unsigned kTabChars = 4;
inline constexpr unsigned kTabCharBits = 16;
inline constexpr std::size_t kTabTableSize = std::size_t{1} << kTabCharBits;

#define HPWE_KERNEL_DECLS                                                             \
  std::uint64_t sum_u64(std::span<const std::uint64_t> values);                      \
  std::uint64_t sum_u32(std::span<const std::uint32_t> values);                      \
  std::uint64_t max_u64(std::span<const std::uint64_t> values);                      \
  std::uint32_t max_u32(std::span<const std::uint32_t> values);                      \
  std::uint64_t exclusive_scan_u64(std::span<const std::uint64_t> in,                \
                                   std::span<std::uint64_t> out, std::uint64_t carry); \
  void tabulate16x4(const std::uint64_t* tables, std::span<const std::uint64_t> keys, \
                    std::span<std::uint64_t> out);                                    \
  bool adjacent_collision(std::span<const std::uint64_t> hashes,                      \
                          std::span<const std::uint64_t> keys);

// `out` in exclusive_scan_u64 may alias `in`. `tables` for tabulate16x4 is
// four consecutive tables of kTabTableSize entries; character i of a key is
// bits [16i, 16i+16). adjacent_collision reports whether some i has
// hashes[i] == hashes[i+1] and keys[i] != keys[i+1].
HPWE_KERNEL_DECLS

namespace scalar {
HPWE_KERNEL_DECLS
}

#if defined(HPWE_HAVE_AVX2)
namespace avx2 {
HPWE_KERNEL_DECLS
}
#endif

#undef HPWE_KERNEL_DECLS

}  // namespace hpwe::simd
