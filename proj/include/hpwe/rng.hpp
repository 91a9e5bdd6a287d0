#pragma once

// Counter-based randomness. Every draw is a pure function of
// (seed, stream, counter), so per-block and per-vertex streams are replayable
// and independent of scheduling.

#include <cstdint>
#include <limits>

namespace hpwe {

constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

// splitmix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t x) {
  x ^= x >> 30;
  x *= 0xbf58476d1ce4e5b9ULL;
  x ^= x >> 27;
  x *= 0x94d049bb133111ebULL;
  x ^= x >> 31;
  return x;
}

constexpr std::uint64_t stream_value(std::uint64_t seed, std::uint64_t stream,
                                     std::uint64_t counter) {
  return mix64(mix64(seed + kGolden * (stream + 1)) ^ (counter * kGolden + 0x632be59bd9b4e019ULL));
}

constexpr std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) {
  return stream_value(base, 0x5eed0000ULL + index, 0);
}

// Maps a uniform 64-bit word onto [0, range) by multiply-shift.
inline std::uint64_t bounded(std::uint64_t word, std::uint64_t range) {
  return static_cast<std::uint64_t>((static_cast<unsigned __int128>(word) * range) >> 64);
}

inline double unit_interval(std::uint64_t word) {
  return static_cast<double>(word >> 11) * 0x1.0p-53;
}

// UniformRandomBitGenerator over one counter stream.
class CounterRng {
 public:
  using result_type = std::uint64_t;

  CounterRng(std::uint64_t seed, std::uint64_t stream) : seed_(seed), stream_(stream) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }
  result_type operator()() { return stream_value(seed_, stream_, counter_++); }

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
  std::uint64_t counter_ = 0;
};

constexpr unsigned ceil_log2(std::uint64_t x) {
  unsigned r = 0;
  while ((std::uint64_t{1} << r) < x && r < 64) ++r;
  return r;
}

}  // namespace hpwe
