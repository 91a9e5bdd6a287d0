#pragma once

// Seeded trial runner behind the benchmark CLI: key generation, per-trial
// verification, CSV / JSON emission and tail summaries.

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "hpwe/bounds.hpp"
#include "hpwe/primitives.hpp"
#include "hpwe/semisort.hpp"

namespace hpwe {

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class KeyDist { kUniform, kZipf, kAllEqual, kAllDistinct };

struct DistSpec {
  KeyDist kind = KeyDist::kUniform;
  double theta = 1.0;  // zipf only

  // "uniform", "all_equal", "all_distinct", "zipf", "zipf:1.2" or "zipf(1.2)".
  static DistSpec parse(std::string_view text);
  std::string name() const;
};

// Payload = index. uniform: keys in [n]; zipf: ranks in [n] with
// Pr[rank i] proportional to (i + 1)^-theta; all_equal: key 0;
// all_distinct: a permutation of [n].
std::vector<Record> gen_keys(const DistSpec& dist, std::uint64_t n, std::uint64_t seed);

struct ExperimentConfig {
  std::string algorithm;  // semisort intsort placement partition mis color bounds
  std::vector<std::uint64_t> sizes{1 << 14};
  std::uint64_t m = 0;   // graph edges; 0 means 16 n
  std::uint64_t k = 0;   // pieces; 0 means ceil(log2 n)
  std::string dist = "uniform";
  std::uint64_t trials = 1;
  std::uint64_t seed = 1;
  std::string out;       // empty: stdout
  std::string format = "csv";
  bool timing = false;
  std::string input;
  std::string save_input;
  std::map<std::string, std::string> params;  // --param KEY=VALUE overrides

  // Throws ConfigError.
  void validate() const;
  // Loads flat key=value lines ('#' comments). Keys outside the known flag
  // set become params. Throws ConfigError / IoError.
  void merge_file(const std::string& path);

  double param_double(const std::string& key, double fallback) const;
  std::uint64_t param_u64(const std::string& key, std::uint64_t fallback) const;
  std::string param_string(const std::string& key, const std::string& fallback) const;

  // Semisort defaults for n with overrides applied, validated.
  SemisortParams semisort_params(std::uint64_t n) const;
  std::uint64_t pieces(std::uint64_t n) const;
  std::uint64_t edges(std::uint64_t n) const;
};

struct TrialRecord {
  std::string algorithm;
  std::uint64_t trial = 0;
  std::uint64_t seed = 0;
  std::uint64_t n = 0;
  std::uint64_t m = 0;
  std::uint64_t k = 0;
  std::uint64_t work = 0;
  double work_per_elem = 0.0;
  std::uint64_t rounds = 0;
  std::uint64_t restarts = 0;
  std::uint64_t heavy_records = 0;
  std::uint64_t light_records = 0;
  std::uint64_t max_bucket = 0;
  std::uint64_t max_attempts = 0;
  std::uint64_t buckets = 0;
  std::vector<std::uint64_t> attempts_above;  // buckets with attempts > j, j = 1..5
  std::uint64_t allocated = 0;
  std::uint64_t placement_rounds = 0;
  std::uint64_t probes = 0;
  std::uint64_t culled = 0;
  std::uint64_t cull_phases = 0;
  std::uint64_t max_piece_edges = 0;
  std::uint64_t cut_edges = 0;
  std::uint64_t colors = 0;
  std::uint64_t set_size = 0;
  bool verified = false;
  std::string verdict;  // "ok" or the failure reason
  double wall_ms = 0.0;
};

struct ExperimentResult {
  std::vector<TrialRecord> records;
  bool all_verified() const;
};

// Runs every (size, trial) pair in order. Trial t uses derive_seed(seed, t).
ExperimentResult run_experiment(const ExperimentConfig& config);

// One "# ..." line with the resolved parameters, then the header and rows.
void write_csv(std::ostream& out, const ExperimentConfig& config, const ExperimentResult& result);
void write_json(std::ostream& out, const ExperimentConfig& config, const ExperimentResult& result);
std::string resolved_params(const ExperimentConfig& config);

struct MetricSummary {
  double min = 0, max = 0, mean = 0, p50 = 0, p90 = 0, p99 = 0;
  std::uint64_t count = 0;
};

struct Exceedance {
  std::uint64_t j = 0;
  double empirical = 0.0;  // fraction of buckets with attempts > j
  double bound = 0.0;      // 2^-j
};

struct TailSummary {
  std::map<std::string, MetricSummary> metrics;
  // max work-per-element at the largest size over that at the smallest
  // (1.0 with a single size).
  double slope_ratio = 1.0;
  std::vector<Exceedance> attempts;
};

MetricSummary summarize(std::vector<double> values);
// Throws std::invalid_argument on an empty record list.
TailSummary tail_report(const std::vector<TrialRecord>& records);
void write_report(std::ostream& out, const TailSummary& summary);

// "bounds" subcommand: evaluates the bound named by param "bound".
double run_bound(const ExperimentConfig& config, BoundParams* resolved = nullptr);

}  // namespace hpwe
