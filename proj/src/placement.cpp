#include "hpwe/placement.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numeric>

#include "hpwe/parallel.hpp"
#include "hpwe/primitives.hpp"
#include "hpwe/rng.hpp"

namespace hpwe {
namespace {

// Lowers the slot to `tag` while it holds either the empty marker or a larger
// tag from the current round. Committed record indices are < every tag, so
// they are never overwritten.
void claim_min(std::uint32_t& slot, std::uint32_t tag) {
  std::atomic_ref<std::uint32_t> ref(slot);
  std::uint32_t cur = ref.load(std::memory_order_relaxed);
  while (cur > tag && !ref.compare_exchange_weak(cur, tag, std::memory_order_relaxed)) {
  }
}

}  // namespace

std::uint64_t default_round_cap(std::uint64_t n, std::uint64_t factor) {
  return factor * std::max(1u, ceil_log2(n));
}

std::uint64_t place_into(std::span<const std::uint32_t> target_of,
                         std::span<const PlacementTarget> targets, std::uint64_t block_size,
                         std::uint64_t round_cap, std::uint64_t seed, std::span<std::uint32_t> arena,
                         PlacementResult& result, WorkMeter* meter) {
  const std::uint64_t k = target_of.size();
  result.slot_of.assign(k, std::numeric_limits<std::uint64_t>::max());
  result.rounds_used = 0;
  result.probes = 0;
  result.max_probes_per_round = 0;
  if (k == 0) return 0;

  const std::uint64_t d = std::max<std::uint64_t>(1, block_size);
  const std::uint64_t blocks = std::max<std::uint64_t>(1, k / d);
  auto block_begin = [&](std::uint64_t b) { return b * d; };
  auto block_end = [&](std::uint64_t b) { return b + 1 == blocks ? k : (b + 1) * d; };

  std::vector<std::uint64_t> cursor(blocks);
  std::vector<std::uint64_t> probe_slot(blocks);
  std::vector<std::uint32_t> active(blocks);
  for (std::uint64_t b = 0; b < blocks; ++b) {
    cursor[b] = block_begin(b);
    active[b] = static_cast<std::uint32_t>(b);
  }
  charge(meter, blocks);

  // Tags identify a block's tentative claim within a round.
  const auto tag_of = [k](std::uint64_t b) { return static_cast<std::uint32_t>(k + b); };

  for (std::uint64_t round = 0; round < round_cap && !active.empty(); ++round) {
    const std::size_t live = active.size();
    parallel_for(0, live, [&](std::size_t i) {
      const std::uint64_t b = active[i];
      const std::uint64_t r = cursor[b];
      const PlacementTarget& t = targets[target_of[r]];
      if (t.capacity == 0) {  // can never succeed; burns rounds until the cap
        probe_slot[b] = std::numeric_limits<std::uint64_t>::max();
        return;
      }
      const std::uint64_t slot = t.base + bounded(stream_value(seed, b, round), t.capacity);
      probe_slot[b] = slot;
      if (std::atomic_ref<std::uint32_t>(arena[slot]).load(std::memory_order_relaxed) == kEmptySlot) {
        claim_min(arena[slot], tag_of(b));
      }
    });
    parallel_for(0, live, [&](std::size_t i) {
      const std::uint64_t b = active[i];
      const std::uint64_t slot = probe_slot[b];
      if (slot < arena.size() && arena[slot] == tag_of(b)) {
        const std::uint64_t r = cursor[b];
        arena[slot] = static_cast<std::uint32_t>(r);
        result.slot_of[r] = slot;
        ++cursor[b];
      }
    });
    result.probes += live;
    result.max_probes_per_round = std::max<std::uint64_t>(result.max_probes_per_round, live);
    ++result.rounds_used;
    charge(meter, 2 * live);
    add_rounds(meter, 1);
    active = filter(std::span<const std::uint32_t>(active),
                    [&](std::uint32_t b) { return cursor[b] < block_end(b); }, meter);
  }

  std::uint64_t unplaced = 0;
  for (auto b : active) unplaced += block_end(b) - cursor[b];
  return unplaced;
}

PlacementOutcome place(const PlacementInstance& inst, std::uint64_t round_cap, std::uint64_t seed,
                       WorkMeter* meter) {
  if (round_cap < 1) throw InvalidInstance("round cap must be >= 1");
  if (inst.alpha < 2.0) throw InvalidInstance("slack factor alpha must be >= 2");
  if (inst.block_size < 1) throw InvalidInstance("block size must be >= 1");
  if (inst.target_of.size() >= kMaxPlacementRecords) throw InvalidInstance("too many records");

  const std::size_t t = inst.targets.size();
  std::vector<std::uint64_t> load(t, 0);
  for (auto id : inst.target_of) {
    if (id >= t) throw InvalidInstance("record refers to an unknown target");
    ++load[id];
  }
  std::uint64_t arena_size = 0;
  for (std::size_t i = 0; i < t; ++i) {
    const auto& tg = inst.targets[i];
    if (static_cast<double>(tg.capacity) < inst.alpha * static_cast<double>(load[i])) {
      throw InvalidInstance("target capacity below alpha times its record count");
    }
    arena_size = std::max(arena_size, tg.base + tg.capacity);
  }
  std::vector<std::size_t> by_base(t);
  std::iota(by_base.begin(), by_base.end(), std::size_t{0});
  std::sort(by_base.begin(), by_base.end(),
            [&](std::size_t a, std::size_t b) { return inst.targets[a].base < inst.targets[b].base; });
  for (std::size_t i = 1; i < t; ++i) {
    const auto& prev = inst.targets[by_base[i - 1]];
    if (prev.capacity > 0 && prev.base + prev.capacity > inst.targets[by_base[i]].base &&
        inst.targets[by_base[i]].capacity > 0) {
      throw InvalidInstance("target slot ranges overlap");
    }
  }
  charge(meter, inst.target_of.size() + t);

  PlacementOutcome outcome;
  outcome.result.arena.assign(arena_size, kEmptySlot);
  charge(meter, arena_size);
  const std::uint64_t unplaced = place_into(inst.target_of, inst.targets, inst.block_size, round_cap,
                                            seed, outcome.result.arena, outcome.result, meter);
  outcome.status = unplaced == 0 ? PlacementStatus::kPlaced : PlacementStatus::kTimedOut;
  return outcome;
}

bool audit_placement(const PlacementInstance& inst, const PlacementResult& result) {
  if (result.slot_of.size() != inst.target_of.size()) return false;
  std::vector<std::uint64_t> seen;
  seen.reserve(result.slot_of.size());
  for (std::size_t r = 0; r < result.slot_of.size(); ++r) {
    const std::uint64_t s = result.slot_of[r];
    const auto& t = inst.targets[inst.target_of[r]];
    if (s < t.base || s >= t.base + t.capacity) return false;
    if (!result.arena.empty() && (s >= result.arena.size() || result.arena[s] != r)) return false;
    seen.push_back(s);
  }
  std::sort(seen.begin(), seen.end());
  return std::adjacent_find(seen.begin(), seen.end()) == seen.end();
}

}  // namespace hpwe
