#include "hpwe/hashing.hpp"

#include "hpwe/rng.hpp"
#include "hpwe/simd/kernels.hpp"

namespace hpwe {

namespace {

std::uint64_t out_mask(unsigned out_bits) {
  return out_bits >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << out_bits) - 1;
}

}  // namespace

TabulationHash::TabulationHash(unsigned chars, unsigned char_bits, unsigned out_bits,
                               std::vector<std::uint64_t> entries)
    : chars_(chars), char_bits_(char_bits), out_bits_(out_bits), entries_(std::move(entries)) {}

TabulationHash::TabulationHash(std::uint64_t seed, unsigned out_bits)
    : chars_(kDefaultChars), char_bits_(kDefaultCharBits), out_bits_(out_bits) {
  if (out_bits < 1 || out_bits > 64) {
    throw std::invalid_argument("tabulation output width must lie in [1, 64]");
  }
  const std::uint64_t mask = out_mask(out_bits);
  entries_.resize(std::size_t{chars_} << char_bits_);
  for (unsigned t = 0; t < chars_; ++t) {
    CounterRng rng(seed, t);
    const std::size_t base = std::size_t{t} << char_bits_;
    for (std::size_t i = 0; i < (std::size_t{1} << char_bits_); ++i) entries_[base + i] = rng() & mask;
  }
}

TabulationHash TabulationHash::from_tables(unsigned char_bits,
                                           std::vector<std::vector<std::uint64_t>> tables,
                                           unsigned out_bits) {
  if (out_bits < 1 || out_bits > 64) {
    throw std::invalid_argument("tabulation output width must lie in [1, 64]");
  }
  if (tables.empty() || char_bits < 1 || tables.size() * char_bits > 64) {
    throw std::invalid_argument("tabulation layout must cover at most 64 key bits");
  }
  const std::size_t size = std::size_t{1} << char_bits;
  const std::uint64_t mask = out_mask(out_bits);
  std::vector<std::uint64_t> entries;
  entries.reserve(tables.size() * size);
  for (const auto& table : tables) {
    if (table.size() != size) throw std::invalid_argument("tabulation table has wrong size");
    for (auto e : table) {
      if ((e & ~mask) != 0) throw std::invalid_argument("tabulation entry exceeds output width");
      entries.push_back(e);
    }
  }
  return TabulationHash(static_cast<unsigned>(tables.size()), char_bits, out_bits, std::move(entries));
}

void TabulationHash::hash_batch(std::span<const std::uint64_t> keys, std::span<std::uint64_t> out,
                                WorkMeter* meter) const {
  charge(meter, keys.size());
  if (chars_ == simd::kTabChars && char_bits_ == simd::kTabCharBits) {
    simd::tabulate16x4(entries_.data(), keys, out);
    return;
  }
  for (std::size_t i = 0; i < keys.size(); ++i) out[i] = (*this)(keys[i]);
}

unsigned tabulation_width_for(std::uint64_t bins) { return bins <= 2 ? 1 : ceil_log2(bins); }

UniversalHash::UniversalHash(std::uint64_t seed, std::uint64_t range) : range_(range) {
  if (range == 0) throw std::invalid_argument("universal hash range must be >= 1");
  CounterRng rng(seed, 0x0a11ULL);
  a_ = 1 + bounded(rng(), kPrime - 1);
  b_ = bounded(rng(), kPrime);
}

UniversalHash::UniversalHash(std::uint64_t a, std::uint64_t b, std::uint64_t range)
    : a_(a), b_(b), range_(range) {
  if (range == 0) throw std::invalid_argument("universal hash range must be >= 1");
  if (a == 0 || a >= kPrime || b >= kPrime) {
    throw std::invalid_argument("universal hash coefficients out of range");
  }
}

bool detect_collision(std::span<const std::pair<std::uint64_t, std::uint64_t>> sorted_by_hash,
                      WorkMeter* meter) {
  charge(meter, sorted_by_hash.size());
  for (std::size_t i = 1; i < sorted_by_hash.size(); ++i) {
    const auto& [h0, k0] = sorted_by_hash[i - 1];
    const auto& [h1, k1] = sorted_by_hash[i];
    if (h0 == h1 && k0 != k1) return true;
  }
  return false;
}

bool detect_collision(std::span<const std::uint64_t> hashes, std::span<const std::uint64_t> keys,
                      WorkMeter* meter) {
  charge(meter, hashes.size());
  return simd::adjacent_collision(hashes, keys);
}

}  // namespace hpwe
