#include "hpwe/palette.hpp"

#include <algorithm>

#include "hpwe/rng.hpp"

namespace hpwe {
namespace {

constexpr std::uint32_t kFree = std::numeric_limits<std::uint32_t>::max();

std::uint64_t table_size(std::uint64_t hint) {
  if (hint == 0) return 0;
  std::uint64_t cap = 2;
  while (cap < 2 * hint) cap *= 2;
  return cap;
}

}  // namespace

PaletteSet::PaletteSet(std::uint32_t universe, std::span<const std::uint64_t> capacity_hint)
    : universe_(universe), table_begin_(capacity_hint.size() + 1, 0),
      forbidden_count_(capacity_hint.size(), 0) {
  if (universe == 0 || universe == kFree) throw std::invalid_argument("palette universe out of range");
  for (std::size_t v = 0; v < capacity_hint.size(); ++v) {
    table_begin_[v + 1] = table_begin_[v] + table_size(std::min<std::uint64_t>(capacity_hint[v], universe));
  }
  slots_.assign(table_begin_.back(), kFree);
}

std::uint64_t PaletteSet::slot_of(std::uint32_t color, std::uint64_t mask) const {
  return mix64(color) & mask;
}

bool PaletteSet::allows(std::uint64_t v, std::uint32_t color) const {
  if (color >= universe_) return false;
  const std::uint64_t base = table_begin_[v];
  const std::uint64_t cap = table_begin_[v + 1] - base;
  if (cap == 0) return true;
  for (std::uint64_t s = slot_of(color, cap - 1);; s = (s + 1) & (cap - 1)) {
    const std::uint32_t x = slots_[base + s];
    if (x == kFree) return true;
    if (x == color) return false;
  }
}

bool PaletteSet::forbid(std::uint64_t v, std::uint32_t color) {
  if (color >= universe_) return false;
  const std::uint64_t base = table_begin_[v];
  const std::uint64_t cap = table_begin_[v + 1] - base;
  if (cap == 0) throw PaletteDeficit("vertex has no room for forbidden colors");
  for (std::uint64_t s = slot_of(color, cap - 1);; s = (s + 1) & (cap - 1)) {
    std::uint32_t& x = slots_[base + s];
    if (x == color) return false;
    if (x == kFree) {
      if (2 * (forbidden_count_[v] + 1) > cap) {
        throw PaletteDeficit("forbidden-color table of a vertex exceeded its capacity hint");
      }
      x = color;
      ++forbidden_count_[v];
      return true;
    }
  }
}

std::vector<std::uint32_t> PaletteSet::allowed(std::uint64_t v) const {
  std::vector<std::uint32_t> out;
  for (std::uint32_t c = 0; c < universe_; ++c) {
    if (allows(v, c)) out.push_back(c);
  }
  return out;
}

}  // namespace hpwe
