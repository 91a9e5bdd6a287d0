#include "hpwe/semisort.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <limits>
#include <cmath>
#include <numeric>
#include <unordered_set>

#include "hpwe/hashing.hpp"
#include "hpwe/parallel.hpp"
#include "hpwe/placement.hpp"
#include "hpwe/rng.hpp"

namespace hpwe {
namespace {

// Stream tags for per-attempt randomness.
constexpr std::uint64_t kSampleStream = 1;
constexpr std::uint64_t kHeavyPlaceStream = 2;
constexpr std::uint64_t kLightPlaceStream = 3;
constexpr std::uint64_t kTabulationStream = 4;
constexpr std::uint64_t kBucketStream = 5;
constexpr std::uint64_t kTableSaltStream = 6;
constexpr std::uint64_t kRehashStream = 0xb0c4e7ULL;

constexpr std::uint32_t kLight = std::numeric_limits<std::uint32_t>::max();

// Open-addressing map from heavy key to its dense id.
class HeavyKeyTable {
 public:
  HeavyKeyTable(std::span<const std::uint64_t> keys, std::uint64_t salt) : salt_(salt) {
    std::size_t cap = 2;
    while (cap < 2 * keys.size()) cap *= 2;
    mask_ = cap - 1;
    slots_.assign(cap, Slot{0, kLight});
    for (std::size_t i = 0; i < keys.size(); ++i) {
      std::size_t s = mix64(keys[i] ^ salt_) & mask_;
      while (slots_[s].id != kLight) s = (s + 1) & mask_;
      slots_[s] = Slot{keys[i], static_cast<std::uint32_t>(i)};
    }
  }

  // Returns the heavy id or kLight; adds the probe count to `probes`.
  std::uint32_t find(std::uint64_t key, std::uint64_t& probes) const {
    std::size_t s = mix64(key ^ salt_) & mask_;
    for (;;) {
      ++probes;
      const Slot& slot = slots_[s];
      if (slot.id == kLight) return kLight;
      if (slot.key == key) return slot.id;
      s = (s + 1) & mask_;
    }
  }

 private:
  struct Slot {
    std::uint64_t key;
    std::uint32_t id;
  };
  std::uint64_t salt_;
  std::size_t mask_ = 0;
  std::vector<Slot> slots_;
};

std::uint64_t capacity_for(double sigma, const SemisortParams& params) {
  return static_cast<std::uint64_t>(std::ceil(params.alpha * f_alloc(sigma, params)));
}

// Builds contiguous targets from per-target sample counts.
struct Allocation {
  std::vector<PlacementTarget> targets;
  std::uint64_t slots = 0;
  double exact = 0.0;
};

Allocation allocate(std::span<const std::uint64_t> sigma, const SemisortParams& params,
                    WorkMeter* meter) {
  Allocation alloc;
  std::vector<std::uint64_t> caps(sigma.size());
  parallel_for(0, sigma.size(), [&](std::size_t i) {
    caps[i] = capacity_for(static_cast<double>(sigma[i]), params);
  });
  charge(meter, sigma.size());
  for (auto s : sigma) alloc.exact += params.alpha * f_alloc(static_cast<double>(s), params);
  auto bases = scan(std::span<const std::uint64_t>(caps), std::plus<>{}, std::uint64_t{0}, meter);
  alloc.slots = bases.total;
  alloc.targets.resize(sigma.size());
  for (std::size_t i = 0; i < sigma.size(); ++i) alloc.targets[i] = {caps[i], bases.prefix[i]};
  return alloc;
}

struct AttemptOutput {
  std::vector<Record> heavy;
  std::vector<Record> light;
};

bool run_attempt(std::span<const Record> input, const SemisortParams& params, std::uint64_t seed,
                 WorkMeter* meter, SemisortTrace& trace, AttemptOutput& out) {
  const std::size_t n = input.size();
  const double few = static_cast<double>(n) / params.log_n;

  // Step 1: independent sampling.
  std::vector<std::uint32_t> sampled;
  {
    WorkMeter::Scope scope(meter, "sample");
    const double p = params.sample_prob;
    const bool take_all = p >= 1.0;
    const auto cut = static_cast<std::uint64_t>(std::ldexp(p, 64));
    sampled = pack_indices(n, [&](std::size_t i) {
      return take_all || stream_value(seed, kSampleStream, i) < cut;
    }, meter);
  }

  // Step 2: sort the sample, count multiplicities.
  std::vector<std::uint64_t> sample_keys;
  std::vector<std::uint64_t> distinct;
  std::vector<std::uint64_t> sigma;
  {
    WorkMeter::Scope scope(meter, "sample_sort");
    sample_keys.resize(sampled.size());
    for (std::size_t i = 0; i < sampled.size(); ++i) sample_keys[i] = input[sampled[i]].key;
    charge(meter, sampled.size());
    sort_in_place(std::span<std::uint64_t>(sample_keys), std::less<>{}, meter);
    for (std::size_t i = 0; i < sample_keys.size();) {
      std::size_t j = i;
      while (j < sample_keys.size() && sample_keys[j] == sample_keys[i]) ++j;
      distinct.push_back(sample_keys[i]);
      sigma.push_back(j - i);
      i = j;
    }
    charge(meter, sample_keys.size());
  }
  trace.sample_size = sample_keys.size();

  // Step 3: heavy / light classification.
  std::vector<std::uint64_t> heavy_keys, heavy_sigma;
  std::vector<std::uint64_t> light_sample_keys, light_sample_sigma;
  for (std::size_t i = 0; i < distinct.size(); ++i) {
    if (sigma[i] >= params.tau) {
      heavy_keys.push_back(distinct[i]);
      heavy_sigma.push_back(sigma[i]);
    } else {
      light_sample_keys.push_back(distinct[i]);
      light_sample_sigma.push_back(sigma[i]);
    }
  }
  std::vector<std::uint32_t> heavy_id(n, kLight);
  std::vector<std::uint32_t> heavy_idx, light_idx;
  {
    WorkMeter::Scope scope(meter, "classify");
    charge(meter, distinct.size());
    if (!heavy_keys.empty()) {
      HeavyKeyTable table(heavy_keys, stream_value(seed, kTableSaltStream, 0));
      charge(meter, 2 * heavy_keys.size());
      std::uint64_t probes = 0;
      parallel_blocks(0, n, [&](std::size_t lo, std::size_t hi) {
        std::uint64_t local = 0;
        for (std::size_t i = lo; i < hi; ++i) heavy_id[i] = table.find(input[i].key, local);
        std::atomic_ref<std::uint64_t>(probes).fetch_add(local, std::memory_order_relaxed);
      });
      charge(meter, probes);
    }
    heavy_idx = pack_indices(n, [&](std::size_t i) { return heavy_id[i] != kLight; }, meter);
    light_idx = pack_indices(n, [&](std::size_t i) { return heavy_id[i] == kLight; }, meter);
  }
  trace.heavy_keys = heavy_keys.size();
  trace.heavy_records = heavy_idx.size();
  trace.light_records = light_idx.size();

  // Step 4: heavy side.
  out.heavy.clear();
  trace.heavy_placed = false;
  if (!heavy_idx.empty()) {
    if (static_cast<double>(heavy_idx.size()) < few) {
      WorkMeter::Scope scope(meter, "heavy_sort");
      out.heavy.resize(heavy_idx.size());
      for (std::size_t i = 0; i < heavy_idx.size(); ++i) out.heavy[i] = input[heavy_idx[i]];
      charge(meter, heavy_idx.size());
      sort_in_place(std::span<Record>(out.heavy), KeyLess{}, meter);
    } else {
      WorkMeter::Scope scope(meter, "heavy_place");
      Allocation alloc = allocate(heavy_sigma, params, meter);
      trace.allocated_slots += alloc.slots;
      trace.allocated_exact += alloc.exact;
      std::vector<std::uint32_t> target_of(heavy_idx.size());
      for (std::size_t j = 0; j < heavy_idx.size(); ++j) target_of[j] = heavy_id[heavy_idx[j]];
      charge(meter, heavy_idx.size());
      std::vector<std::uint32_t> arena(alloc.slots, kEmptySlot);
      charge(meter, alloc.slots);
      PlacementResult placed;
      const std::uint64_t unplaced =
          place_into(target_of, alloc.targets, params.block_size, params.round_cap,
                     stream_value(seed, kHeavyPlaceStream, 0), arena, placed, meter);
      trace.placement_rounds += placed.rounds_used;
      trace.placement_probes += placed.probes;
      if (unplaced != 0) return false;
      // Each heavy array holds one key, so packing the arena in slot order is
      // already grouped.
      const auto occupied = filter(std::span<const std::uint32_t>(arena),
                                   [](std::uint32_t s) { return s != kEmptySlot; }, meter);
      out.heavy.resize(occupied.size());
      for (std::size_t i = 0; i < occupied.size(); ++i) out.heavy[i] = input[heavy_idx[occupied[i]]];
      charge(meter, occupied.size());
      trace.heavy_placed = true;
    }
  }

  // Step 5 and 6: light side.
  out.light.clear();
  trace.light_placed = false;
  trace.bucket_sizes.clear();
  trace.bucket_attempts.clear();
  trace.max_bucket_size = 0;
  if (!light_idx.empty()) {
    if (static_cast<double>(light_idx.size()) < few) {
      WorkMeter::Scope scope(meter, "light_sort");
      out.light.resize(light_idx.size());
      for (std::size_t i = 0; i < light_idx.size(); ++i) out.light[i] = input[light_idx[i]];
      charge(meter, light_idx.size());
      sort_in_place(std::span<Record>(out.light), KeyLess{}, meter);
    } else {
      const std::uint64_t buckets = params.buckets;
      const unsigned width = tabulation_width_for(buckets);
      std::vector<std::uint32_t> bucket_of(light_idx.size());
      std::vector<std::uint64_t> sigma_b(buckets, 0);
      {
        WorkMeter::Scope scope(meter, "light_hash");
        const TabulationHash tab(stream_value(seed, kTabulationStream, 0), width);
        std::vector<std::uint64_t> keys(light_idx.size());
        for (std::size_t i = 0; i < light_idx.size(); ++i) keys[i] = input[light_idx[i]].key;
        charge(meter, light_idx.size());
        std::vector<std::uint64_t> h(keys.size());
        tab.hash_batch(keys, h, meter);
        for (std::size_t i = 0; i < h.size(); ++i) {
          bucket_of[i] = static_cast<std::uint32_t>(range_reduce(h[i], buckets, width));
        }
        charge(meter, h.size());
        std::vector<std::uint64_t> hs(light_sample_keys.size());
        tab.hash_batch(light_sample_keys, hs, meter);
        for (std::size_t i = 0; i < hs.size(); ++i) {
          sigma_b[range_reduce(hs[i], buckets, width)] += light_sample_sigma[i];
        }
        charge(meter, buckets + hs.size());
      }

      Allocation alloc;
      std::vector<std::uint32_t> arena;
      {
        WorkMeter::Scope scope(meter, "light_place");
        alloc = allocate(sigma_b, params, meter);
        trace.allocated_slots += alloc.slots;
        trace.allocated_exact += alloc.exact;
        arena.assign(alloc.slots, kEmptySlot);
        charge(meter, alloc.slots);
        PlacementResult placed;
        const std::uint64_t unplaced =
            place_into(bucket_of, alloc.targets, params.block_size, params.round_cap,
                       stream_value(seed, kLightPlaceStream, 0), arena, placed, meter);
        trace.placement_rounds += placed.rounds_used;
        trace.placement_probes += placed.probes;
        if (unplaced != 0) return false;
      }

      WorkMeter::Scope scope(meter, "local_semisort");
      std::vector<std::uint64_t> sizes(buckets, 0);
      parallel_for(0, buckets, [&](std::size_t b) {
        const auto& t = alloc.targets[b];
        std::uint64_t c = 0;
        for (std::uint64_t s = t.base; s < t.base + t.capacity; ++s) c += arena[s] != kEmptySlot ? 1 : 0;
        sizes[b] = c;
      }, 64);
      charge(meter, alloc.slots);
      auto offsets = scan(std::span<const std::uint64_t>(sizes), std::plus<>{}, std::uint64_t{0}, meter);
      out.light.resize(offsets.total);
      trace.bucket_sizes.resize(buckets);
      trace.bucket_attempts.resize(buckets);
      parallel_for(0, buckets, [&](std::size_t b) {
        const auto& t = alloc.targets[b];
        std::uint64_t pos = offsets.prefix[b];
        for (std::uint64_t s = t.base; s < t.base + t.capacity; ++s) {
          if (arena[s] != kEmptySlot) out.light[pos++] = input[light_idx[arena[s]]];
        }
        std::span<Record> bucket(out.light.data() + offsets.prefix[b], sizes[b]);
        trace.bucket_sizes[b] = static_cast<std::uint32_t>(sizes[b]);
        trace.bucket_attempts[b] =
            sizes[b] == 0 ? 0
                          : local_semisort(bucket, params.radix_passes,
                                           stream_value(seed, kBucketStream, b), meter);
      }, 16);
      charge(meter, alloc.slots);
      trace.max_bucket_size = simd::max_u64(sizes);
      trace.light_placed = true;
    }
  }
  return true;
}

WorkMeter::Breakdown diff(const WorkMeter::Breakdown& after, const WorkMeter::Breakdown& before) {
  WorkMeter::Breakdown d;
  for (const auto& [k, v] : after) {
    auto it = before.find(k);
    const std::uint64_t prev = it == before.end() ? 0 : it->second;
    if (v > prev) d[k] = v - prev;
  }
  return d;
}

}  // namespace

SemisortParams SemisortParams::for_size(std::uint64_t n) {
  const std::uint64_t lg = std::max(1u, ceil_log2(n));
  SemisortParams p;
  p.log_n = static_cast<double>(lg);
  p.sample_prob = 1.0 / static_cast<double>(lg);
  p.tau = 2 * lg;
  p.alpha = 2.0;
  p.c_alloc = 3.0;
  p.radix_passes = 3;
  p.buckets = std::max<std::uint64_t>(1, (n + lg * lg - 1) / (lg * lg));
  p.block_size = lg;
  p.round_cap = 8 * lg;
  p.max_restarts = 3;
  p.small_n_cutoff = 1024;
  return p;
}

void SemisortParams::validate() const {
  if (!(sample_prob > 0.0 && sample_prob <= 1.0)) throw std::invalid_argument("p_s must lie in (0, 1]");
  if (tau < 1) throw std::invalid_argument("tau must be >= 1");
  if (!(alpha >= 2.0)) throw std::invalid_argument("alpha must be >= 2");
  if (!(c_alloc > 0.0)) throw std::invalid_argument("c_alloc must be > 0");
  if (radix_passes < 3) throw std::invalid_argument("K must be >= 3");
  if (buckets < 1) throw std::invalid_argument("B must be >= 1");
  if (buckets > (std::uint64_t{1} << 32)) throw std::invalid_argument("B must fit in 32 bits");
  if (block_size < 1) throw std::invalid_argument("block size must be >= 1");
  if (round_cap < 1) throw std::invalid_argument("round cap must be >= 1");
  if (max_restarts < 1) throw std::invalid_argument("max_restarts must be >= 1");
  if (!(log_n > 0.0)) throw std::invalid_argument("log_n must be > 0");
}

double f_alloc(double s, const SemisortParams& params) {
  const double cl = params.c_alloc * params.log_n;
  return (s + cl + std::sqrt(cl * cl + 2.0 * s * cl)) / params.sample_prob;
}

double f_alloc(double s, const SemisortParams& params, std::uint64_t n) {
  SemisortParams p = params;
  p.log_n = static_cast<double>(std::max(1u, ceil_log2(n)));
  return f_alloc(s, p);
}

unsigned local_semisort(std::span<Record> bucket, unsigned radix_passes, std::uint64_t seed,
                        WorkMeter* meter) {
  const std::size_t m = bucket.size();
  if (m <= 1) {
    charge(meter, 1);
    return 1;
  }
  // Range m^K, capped so the 2-universal family stays well defined.
  std::vector<std::uint64_t> power(radix_passes + 1, 1);
  for (unsigned p = 1; p <= radix_passes; ++p) {
    const unsigned __int128 next = static_cast<unsigned __int128>(power[p - 1]) * m;
    power[p] = next > (std::uint64_t{1} << 63) ? (std::uint64_t{1} << 63) : static_cast<std::uint64_t>(next);
  }
  const std::uint64_t range = power[radix_passes];

  std::vector<std::uint64_t> keys(m), hashes(m), sorted_hashes(m), sorted_keys(m);
  std::vector<std::uint32_t> order(m), scratch(m), count(m + 1);
  for (std::size_t i = 0; i < m; ++i) keys[i] = bucket[i].key;
  charge(meter, m);

  for (unsigned attempt = 1;; ++attempt) {
    const UniversalHash g(stream_value(seed, kRehashStream, attempt), range);
    for (std::size_t i = 0; i < m; ++i) hashes[i] = g(keys[i]);
    std::iota(order.begin(), order.end(), 0u);
    charge(meter, 2 * m);
    // LSD radix sort at base m: K stable counting passes.
    for (unsigned p = 0; p < radix_passes; ++p) {
      std::fill(count.begin(), count.end(), 0u);
      const std::uint64_t div = power[p];
      for (std::size_t i = 0; i < m; ++i) ++count[(hashes[order[i]] / div) % m + 1];
      for (std::size_t d = 1; d <= m; ++d) count[d] += count[d - 1];
      for (std::size_t i = 0; i < m; ++i) scratch[count[(hashes[order[i]] / div) % m]++] = order[i];
      std::swap(order, scratch);
      charge(meter, 3 * m);
    }
    for (std::size_t i = 0; i < m; ++i) {
      sorted_hashes[i] = hashes[order[i]];
      sorted_keys[i] = keys[order[i]];
    }
    charge(meter, m);
    if (!detect_collision(sorted_hashes, sorted_keys, meter)) {
      std::vector<Record> tmp(m);
      for (std::size_t i = 0; i < m; ++i) tmp[i] = bucket[order[i]];
      std::copy(tmp.begin(), tmp.end(), bucket.begin());
      charge(meter, m);
      add_rounds(meter, attempt);
      return attempt;
    }
  }
}

SemisortResult semisort(std::span<const Record> input, const SemisortParams& params,
                        std::uint64_t seed, WorkMeter* meter) {
  params.validate();
  if (input.size() >= kMaxPlacementRecords) throw std::invalid_argument("input too large");
  WorkMeter local;
  WorkMeter* m = meter != nullptr ? meter : &local;
  const std::uint64_t work_before = m->total_ops();
  const std::uint64_t rounds_before = m->rounds();
  const auto phases_before = m->phase_breakdown();

  SemisortResult result;
  SemisortTrace& trace = result.trace;
  trace.params = params;
  trace.n = input.size();

  auto finish = [&] {
    trace.work = m->total_ops() - work_before;
    trace.rounds = m->rounds() - rounds_before;
    trace.phase_work = diff(m->phase_breakdown(), phases_before);
  };

  if (input.size() < params.small_n_cutoff) {
    WorkMeter::Scope scope(m, "small_sort");
    result.records = comparison_sort(input, KeyLess{}, m);
    trace.small_input = true;
    trace.light_records = input.size();
    finish();
    return result;
  }

  for (unsigned attempt = 0;; ++attempt) {
    trace.allocated_slots = 0;
    trace.allocated_exact = 0.0;
    AttemptOutput out;
    if (run_attempt(input, params, derive_seed(seed, attempt), m, trace, out)) {
      WorkMeter::Scope scope(m, "pack");
      const std::array<std::uint64_t, 2> sizes{out.heavy.size(), out.light.size()};
      auto offsets = scan(std::span<const std::uint64_t>(sizes), std::plus<>{}, std::uint64_t{0}, m);
      result.records.resize(offsets.total);
      std::copy(out.heavy.begin(), out.heavy.end(), result.records.begin() + offsets.prefix[0]);
      std::copy(out.light.begin(), out.light.end(), result.records.begin() + offsets.prefix[1]);
      charge(m, offsets.total);
      break;
    }
    if (attempt >= params.max_restarts) {
      throw RestartExceeded("semisort placement timed out on every attempt");
    }
    ++trace.restarts;
  }
  finish();
  return result;
}

SemisortResult semisort(std::span<const Record> input, std::uint64_t seed, WorkMeter* meter) {
  return semisort(input, SemisortParams::for_size(input.size()), seed, meter);
}

std::vector<Record> integer_sort(std::span<const Record> input, std::uint64_t key_bound,
                                 std::uint64_t seed, WorkMeter* meter) {
  const std::size_t n = input.size();
  for (const auto& r : input) {
    if (r.key >= key_bound) throw KeyOutOfRange("integer sort key outside [0, key_bound)");
  }
  charge(meter, n);
  if (n == 0) return {};

  const auto grouped = semisort(input, seed, meter).records;

  WorkMeter::Scope scope(meter, "counting_sort");
  const auto starts = pack_indices<std::uint64_t>(n, [&](std::size_t i) {
    return i == 0 || grouped[i].key != grouped[i - 1].key;
  }, meter);
  std::vector<std::uint64_t> counts(key_bound, 0);
  parallel_for(0, starts.size(), [&](std::size_t g) {
    const std::uint64_t end = g + 1 < starts.size() ? starts[g + 1] : n;
    counts[grouped[starts[g]].key] = end - starts[g];
  });
  charge(meter, starts.size() + key_bound);
  auto offsets = scan(std::span<const std::uint64_t>(counts), std::plus<>{}, std::uint64_t{0}, meter);
  std::vector<Record> out(n);
  parallel_for(0, starts.size(), [&](std::size_t g) {
    const std::uint64_t end = g + 1 < starts.size() ? starts[g + 1] : n;
    std::copy(grouped.begin() + starts[g], grouped.begin() + end,
              out.begin() + offsets.prefix[grouped[starts[g]].key]);
  });
  charge(meter, n);
  return out;
}

std::vector<Record> integer_sort(std::span<const Record> input, std::uint64_t seed, WorkMeter* meter) {
  return integer_sort(input, input.size(), seed, meter);
}

bool is_semisorted(std::span<const Record> records) {
  std::unordered_set<std::uint64_t> closed;
  for (std::size_t i = 0; i < records.size(); ++i) {
    if (i > 0 && records[i].key == records[i - 1].key) continue;
    if (!closed.insert(records[i].key).second) return false;
  }
  return true;
}

}  // namespace hpwe
