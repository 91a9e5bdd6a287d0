#pragma once

// Residual palettes: every vertex of a piece starts from the universe
// [0, universe) and carries a small hash set of forbidden colors, so memory
// is proportional to the edges seen rather than to n * universe.

#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <vector>

namespace hpwe {

inline constexpr std::uint32_t kUncolored = std::numeric_limits<std::uint32_t>::max();

class PaletteDeficit : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

class PaletteSet {
 public:
  PaletteSet() = default;
  // capacity_hint[v] bounds how many colors v may ever have forbidden.
  PaletteSet(std::uint32_t universe, std::span<const std::uint64_t> capacity_hint);

  std::uint64_t vertices() const { return forbidden_count_.size(); }
  std::uint32_t universe() const { return universe_; }
  std::uint64_t size(std::uint64_t v) const { return universe_ - forbidden_count_[v]; }
  bool allows(std::uint64_t v, std::uint32_t color) const;

  // Removes `color` from v's palette; returns true if it was still present.
  // Not safe for concurrent calls on the same vertex.
  bool forbid(std::uint64_t v, std::uint32_t color);

  // Uniform color from v's palette. Rejection sampling while at least half
  // the universe is allowed, otherwise a rank scan. `words` supplies
  // independent uniform 64-bit values; `cost` receives the operations spent.
  template <class Words>
  std::uint32_t sample(std::uint64_t v, Words&& words, std::uint64_t& cost) const {
    const std::uint64_t avail = size(v);
    if (avail == 0) throw PaletteDeficit("sampling from an empty palette");
    if (2 * avail >= universe_) {
      for (;;) {
        ++cost;
        const auto c = static_cast<std::uint32_t>(bounded_word(words(), universe_));
        if (allows(v, c)) return c;
      }
    }
    std::uint64_t rank = bounded_word(words(), avail);
    for (std::uint32_t c = 0; c < universe_; ++c) {
      ++cost;
      if (allows(v, c) && rank-- == 0) return c;
    }
    throw PaletteDeficit("palette bookkeeping out of sync");
  }

  std::vector<std::uint32_t> allowed(std::uint64_t v) const;

 private:
  static std::uint64_t bounded_word(std::uint64_t word, std::uint64_t range) {
    return static_cast<std::uint64_t>((static_cast<unsigned __int128>(word) * range) >> 64);
  }
  std::uint64_t slot_of(std::uint32_t color, std::uint64_t mask) const;

  std::uint32_t universe_ = 0;
  std::vector<std::uint64_t> table_begin_;
  std::vector<std::uint32_t> slots_;
  std::vector<std::uint32_t> forbidden_count_;
};

}  // namespace hpwe
