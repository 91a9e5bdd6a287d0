#include "hpwe/simd/kernels.hpp"

#include <atomic>
#include <cstdlib>
#include <cstring>

namespace hpwe::simd {
namespace {

Isa detect() {
  if (const char* env = std::getenv("HPWE_SIMD"); env != nullptr && std::strcmp(env, "scalar") == 0) {
    return Isa::kScalar;
  }
  return cpu_has_avx2() ? Isa::kAvx2 : Isa::kScalar;
}

std::atomic<Isa>& isa_slot() {
  static std::atomic<Isa> isa{detect()};
  return isa;
}

#if defined(HPWE_HAVE_AVX2)
inline bool use_avx2() { return isa_slot().load(std::memory_order_relaxed) == Isa::kAvx2; }
#define HPWE_DISPATCH(fn, ...) return use_avx2() ? avx2::fn(__VA_ARGS__) : scalar::fn(__VA_ARGS__)
#else
#define HPWE_DISPATCH(fn, ...) return scalar::fn(__VA_ARGS__)
#endif

}  // namespace

bool cpu_has_avx2() {
#if defined(HPWE_HAVE_AVX2)
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

Isa active_isa() { return isa_slot().load(std::memory_order_relaxed); }

const char* isa_name(Isa isa) { return isa == Isa::kAvx2 ? "avx2" : "scalar"; }

void force_isa(Isa isa) {
  if (isa == Isa::kAvx2 && !cpu_has_avx2()) isa = Isa::kScalar;
  isa_slot().store(isa, std::memory_order_relaxed);
}

std::uint64_t sum_u64(std::span<const std::uint64_t> values) { HPWE_DISPATCH(sum_u64, values); }

std::uint64_t sum_u32(std::span<const std::uint32_t> values) { HPWE_DISPATCH(sum_u32, values); }

std::uint64_t max_u64(std::span<const std::uint64_t> values) { HPWE_DISPATCH(max_u64, values); }

std::uint32_t max_u32(std::span<const std::uint32_t> values) { HPWE_DISPATCH(max_u32, values); }

std::uint64_t exclusive_scan_u64(std::span<const std::uint64_t> in,
                                 std::span<std::uint64_t> out, std::uint64_t carry) {
  HPWE_DISPATCH(exclusive_scan_u64, in, out, carry);
}

void tabulate16x4(const std::uint64_t* tables, std::span<const std::uint64_t> keys,
                  std::span<std::uint64_t> out) {
  HPWE_DISPATCH(tabulate16x4, tables, keys, out);
}

bool adjacent_collision(std::span<const std::uint64_t> hashes,
                        std::span<const std::uint64_t> keys) {
  HPWE_DISPATCH(adjacent_collision, hashes, keys);
}

}  // namespace hpwe::simd
