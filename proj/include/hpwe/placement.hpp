#pragma once

// Randomized placement: inject records into slack-capacity target arrays.
//
// Records are cut into blocks of `block_size` (the last block absorbs the
// remainder, so it holds fewer than 2 * block_size). Each round every block
// that still has an unplaced record probes one uniformly random slot of that
// record's target, attempting records in array order. A probe succeeds only
// on an empty slot; when several blocks probe the same empty slot in one
// round the lowest block id wins, so exactly one claimant succeeds and the
// outcome does not depend on thread interleaving.

#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <vector>

#include "hpwe/work_meter.hpp"

namespace hpwe {

struct PlacementTarget {
  std::uint64_t capacity = 0;
  std::uint64_t base = 0;  // first slot in the shared arena
};

struct PlacementInstance {
  std::vector<std::uint32_t> target_of;  // per record
  std::vector<PlacementTarget> targets;
  double alpha = 2.0;
  std::uint64_t block_size = 1;
};

inline constexpr std::uint32_t kEmptySlot = std::numeric_limits<std::uint32_t>::max();

struct PlacementResult {
  std::vector<std::uint64_t> slot_of;  // arena slot per record
  std::vector<std::uint32_t> arena;    // record index per slot, kEmptySlot if free
  std::uint64_t rounds_used = 0;
  std::uint64_t probes = 0;
  std::uint64_t max_probes_per_round = 0;
};

enum class PlacementStatus { kPlaced, kTimedOut };

struct PlacementOutcome {
  PlacementStatus status = PlacementStatus::kPlaced;
  PlacementResult result;

  bool placed() const { return status == PlacementStatus::kPlaced; }
};

class InvalidInstance : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Largest record count accepted; record indices and block tags share the
// 32-bit slot word.
inline constexpr std::uint64_t kMaxPlacementRecords = std::uint64_t{1} << 31;

// Validates the instance (throws InvalidInstance) and places every record.
// round_cap must be >= 1.
PlacementOutcome place(const PlacementInstance& inst, std::uint64_t round_cap, std::uint64_t seed,
                       WorkMeter* meter = nullptr);

// Unchecked core used by semisort. `arena` must be pre-filled with
// kEmptySlot and cover every target. Returns the number of unplaced records
// (0 on success); `result.arena` is left empty since the caller owns it.
std::uint64_t place_into(std::span<const std::uint32_t> target_of,
                         std::span<const PlacementTarget> targets, std::uint64_t block_size,
                         std::uint64_t round_cap, std::uint64_t seed, std::span<std::uint32_t> arena,
                         PlacementResult& result, WorkMeter* meter = nullptr);

// Default round cap: factor * ceil(log2 n).
std::uint64_t default_round_cap(std::uint64_t n, std::uint64_t factor = 8);

// Post-run audit: slot_of injective, inside each record's target, and the
// arena agrees with slot_of. Returns false on any violation.
bool audit_placement(const PlacementInstance& inst, const PlacementResult& result);

}  // namespace hpwe
