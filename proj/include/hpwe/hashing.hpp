#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "hpwe/work_meter.hpp"

namespace hpwe {

// Simple tabulation: a key is split into `chars` characters of `char_bits`
// bits each and hashed to T_1[x_1] ^ ... ^ T_c[x_c], every entry w bits wide.
// The default layout is four 16-bit characters over 64-bit keys.
class TabulationHash {
 public:
  static constexpr unsigned kDefaultChars = 4;
  static constexpr unsigned kDefaultCharBits = 16;

  // Tables filled from a counter stream seeded by `seed`; throws
  // std::invalid_argument unless 1 <= out_bits <= 64.
  TabulationHash(std::uint64_t seed, unsigned out_bits);

  // Explicit tables, table i holding 2^char_bits entries. Keys are expected to
  // fit in chars * char_bits bits.
  static TabulationHash from_tables(unsigned char_bits, std::vector<std::vector<std::uint64_t>> tables,
                                    unsigned out_bits);

  std::uint64_t operator()(std::uint64_t key) const {
    std::uint64_t h = 0;
    const std::uint64_t mask = (std::uint64_t{1} << char_bits_) - 1;
    for (unsigned i = 0; i < chars_; ++i) {
      h ^= entries_[(std::size_t{i} << char_bits_) + ((key >> (i * char_bits_)) & mask)];
    }
    return h;
  }

  // Hashes a batch; charges keys.size() to the meter.
  void hash_batch(std::span<const std::uint64_t> keys, std::span<std::uint64_t> out,
                  WorkMeter* meter = nullptr) const;

  unsigned chars() const { return chars_; }
  unsigned char_bits() const { return char_bits_; }
  unsigned out_bits() const { return out_bits_; }
  std::uint64_t entry(unsigned table, std::uint64_t index) const {
    return entries_[(std::size_t{table} << char_bits_) + index];
  }
  std::span<const std::uint64_t> raw_tables() const { return entries_; }

 private:
  TabulationHash(unsigned chars, unsigned char_bits, unsigned out_bits,
                 std::vector<std::uint64_t> entries);

  unsigned chars_;
  unsigned char_bits_;
  unsigned out_bits_;
  std::vector<std::uint64_t> entries_;
};

// Reduces a w-bit hash onto [0, bins) by multiply-shift: (h * bins) >> w.
// Requires bins <= 2^w.
inline std::uint64_t range_reduce(std::uint64_t h, std::uint64_t bins, unsigned out_bits) {
  return static_cast<std::uint64_t>((static_cast<unsigned __int128>(h) * bins) >> out_bits);
}

// Bin count B -> output width ceil(log2 B), at least 1.
unsigned tabulation_width_for(std::uint64_t bins);

// h(x) = ((a*x + b) mod p) mod m with p = 2^64 - 59, so every 64-bit key is
// a residue and distinct keys collide with probability at most 1/m.
class UniversalHash {
 public:
  static constexpr std::uint64_t kPrime = 0xFFFFFFFFFFFFFFC5ULL;  // 2^64 - 59

  // Throws std::invalid_argument when range == 0.
  UniversalHash(std::uint64_t seed, std::uint64_t range);
  // Explicit coefficients; throws std::invalid_argument unless
  // 0 < a < p, b < p and range >= 1.
  UniversalHash(std::uint64_t a, std::uint64_t b, std::uint64_t range);

  std::uint64_t operator()(std::uint64_t key) const {
    return mod_prime(static_cast<unsigned __int128>(a_) * key + b_) % range_;
  }

  std::uint64_t a() const { return a_; }
  std::uint64_t b() const { return b_; }
  std::uint64_t range() const { return range_; }

  // Exact x mod (2^64 - 59) for any 128-bit x.
  static std::uint64_t mod_prime(unsigned __int128 x) {
    constexpr std::uint64_t kFold = 59;  // 2^64 = 59 (mod p)
    auto hi = static_cast<std::uint64_t>(x >> 64);
    auto lo = static_cast<std::uint64_t>(x);
    unsigned __int128 t = static_cast<unsigned __int128>(hi) * kFold + lo;
    hi = static_cast<std::uint64_t>(t >> 64);
    lo = static_cast<std::uint64_t>(t);
    t = static_cast<unsigned __int128>(hi) * kFold + lo;
    auto r = static_cast<std::uint64_t>(t);
    if ((t >> 64) != 0) r += kFold;  // at most one more wrap
    if (r >= kPrime) r -= kPrime;
    return r;
  }

 private:
  std::uint64_t a_;
  std::uint64_t b_;
  std::uint64_t range_;
};

// True iff some adjacent pair of the (hash, key) sequence has equal hashes
// and distinct keys. The input is expected to be sorted by hash.
bool detect_collision(std::span<const std::pair<std::uint64_t, std::uint64_t>> sorted_by_hash,
                      WorkMeter* meter = nullptr);
// Structure-of-arrays form used on the hot path.
bool detect_collision(std::span<const std::uint64_t> hashes, std::span<const std::uint64_t> keys,
                      WorkMeter* meter = nullptr);

}  // namespace hpwe
