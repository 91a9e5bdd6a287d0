#pragma once

// Sampling-based semisort with linear work with high probability, plus the
// unstable integer sort built on top of it.
//
// Pipeline per attempt:
//   1. sample each record independently with probability p_s
//   2. sort the sample, count sigma_x per sampled key
//   3. heavy keys: sigma_x >= tau; everything else is light
//   4. heavy records: comparison sort if few, else place into per-key arrays
//      sized ceil(alpha * f(sigma_x))
//   5. light records: comparison sort if few, else tabulation-hash into B
//      buckets and place into per-bucket arrays sized ceil(alpha * f(sigma_b))
//   6. each light bucket is packed and semisorted locally by rehashing with a
//      2-universal g : U -> [m_b^K] and radix sorting until collision free
//   7. segments are packed into the output by prefix sums
// A placement that exceeds its round cap restarts the attempt with a fresh
// seed.

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "hpwe/primitives.hpp"
#include "hpwe/work_meter.hpp"

namespace hpwe {

struct SemisortParams {
  double sample_prob = 1.0;    // p_s
  std::uint64_t tau = 1;       // heavy threshold on sigma_x
  double alpha = 2.0;          // slack
  double c_alloc = 3.0;        // constant c in the allocation function
  unsigned radix_passes = 3;   // K, hash range m_b^K
  std::uint64_t buckets = 1;   // B
  std::uint64_t block_size = 1;
  std::uint64_t round_cap = 8;
  unsigned max_restarts = 3;
  std::uint64_t small_n_cutoff = 1024;
  double log_n = 1.0;          // ceil(log2 n), the log used throughout
  double light_mult_const = 4.0;  // light keys expected to have <= C * log^2 n copies

  // Defaults for input size n: p_s = 1/L, tau = 2L, alpha = 2, c = 3, K = 3,
  // B = max(1, ceil(n / L^2)), d = L, round cap = 8L, where L = ceil(log2 n).
  static SemisortParams for_size(std::uint64_t n);

  // Throws std::invalid_argument on a violated parameter invariant.
  void validate() const;
};

struct SemisortTrace {
  SemisortParams params;
  unsigned restarts = 0;
  std::uint64_t n = 0;
  std::uint64_t sample_size = 0;
  std::uint64_t heavy_keys = 0;
  std::uint64_t heavy_records = 0;
  std::uint64_t light_records = 0;
  bool heavy_placed = false;  // false: heavy side comparison sorted (or empty)
  bool light_placed = false;
  std::uint64_t max_bucket_size = 0;
  std::vector<std::uint32_t> bucket_sizes;     // m_b, light placement path only
  std::vector<std::uint32_t> bucket_attempts;  // rehash attempts per bucket
  std::uint64_t allocated_slots = 0;           // sum of ceil(alpha * f(sigma))
  double allocated_exact = 0.0;                // alpha * sum f(sigma)
  std::uint64_t placement_rounds = 0;
  std::uint64_t placement_probes = 0;
  std::uint64_t work = 0;    // meter delta over the whole call, restarts included
  std::uint64_t rounds = 0;
  bool small_input = false;  // handled by the small-n comparison sort
  WorkMeter::Breakdown phase_work;
};

struct SemisortResult {
  std::vector<Record> records;
  SemisortTrace trace;
};

class RestartExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class KeyOutOfRange : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

// f(s) = (s + c L + sqrt(c^2 L^2 + 2 s c L)) / p_s with L = params.log_n.
double f_alloc(double s, const SemisortParams& params);
// Same with L = ceil(log2 n) taken from n.
double f_alloc(double s, const SemisortParams& params, std::uint64_t n);

// Equal keys end up contiguous; output is a permutation of the input.
// Throws RestartExceeded after more than params.max_restarts restarts.
SemisortResult semisort(std::span<const Record> input, const SemisortParams& params,
                        std::uint64_t seed, WorkMeter* meter = nullptr);
SemisortResult semisort(std::span<const Record> input, std::uint64_t seed,
                        WorkMeter* meter = nullptr);

// Semisorts one packed bucket in place by rehash-and-radix-sort; returns the
// number of attempts (>= 1).
unsigned local_semisort(std::span<Record> bucket, unsigned radix_passes, std::uint64_t seed,
                        WorkMeter* meter = nullptr);

// Unstable counting sort for keys in [key_bound) (key_bound defaults to the
// input size). Semisort, then a boundary scan, per-key counts, prefix sum and
// group copy. Throws KeyOutOfRange.
std::vector<Record> integer_sort(std::span<const Record> input, std::uint64_t seed,
                                 WorkMeter* meter = nullptr);
std::vector<Record> integer_sort(std::span<const Record> input, std::uint64_t key_bound,
                                 std::uint64_t seed, WorkMeter* meter);

// Contract check: every distinct key occupies exactly one contiguous run.
bool is_semisorted(std::span<const Record> records);

}  // namespace hpwe
