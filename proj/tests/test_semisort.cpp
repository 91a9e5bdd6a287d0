#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <unordered_map>

#include "hpwe/experiment.hpp"
#include "hpwe/rng.hpp"
#include "hpwe/semisort.hpp"

using namespace hpwe;

namespace {

std::vector<Record> from_keys(std::initializer_list<std::uint64_t> keys) {
  std::vector<Record> r;
  for (auto k : keys) r.push_back({k, r.size()});
  return r;
}

bool same_multiset(std::vector<Record> a, std::vector<Record> b) {
  auto lt = [](const Record& x, const Record& y) {
    return x.key != y.key ? x.key < y.key : x.payload < y.payload;
  };
  std::sort(a.begin(), a.end(), lt);
  std::sort(b.begin(), b.end(), lt);
  return a == b;
}

std::map<std::uint64_t, std::uint64_t> group_counts(const std::vector<Record>& r) {
  std::map<std::uint64_t, std::uint64_t> out;
  for (std::size_t i = 0; i < r.size();) {
    std::size_t j = i;
    while (j < r.size() && r[j].key == r[i].key) ++j;
    out[r[i].key] += j - i;
    i = j;
  }
  return out;
}

}  // namespace

TEST(FAlloc, Examples) {
  SemisortParams p;
  p.c_alloc = 3;
  p.log_n = 16;
  p.sample_prob = 1.0 / 16;
  EXPECT_DOUBLE_EQ(f_alloc(0, p), 1536.0);
  EXPECT_NEAR(f_alloc(16, p), (16 + 48 + std::sqrt(48.0 * 48.0 + 2 * 16 * 48)) * 16, 1e-9);
  EXPECT_NEAR(f_alloc(16, p), 2015.5, 0.1);
  for (int s = 0; s < 10000; ++s) ASSERT_GE(f_alloc(s + 1, p), f_alloc(s, p));
  EXPECT_DOUBLE_EQ(f_alloc(0, p, 1 << 16), 1536.0);
}

TEST(Params, DefaultsAndValidation) {
  auto p = SemisortParams::for_size(1 << 16);
  EXPECT_DOUBLE_EQ(p.sample_prob, 1.0 / 16);
  EXPECT_EQ(p.tau, 32u);
  EXPECT_EQ(p.buckets, 256u);
  EXPECT_EQ(p.block_size, 16u);
  EXPECT_EQ(p.round_cap, 128u);
  EXPECT_EQ(p.radix_passes, 3u);
  EXPECT_EQ(p.max_restarts, 3u);
  EXPECT_NO_THROW(p.validate());
  EXPECT_EQ(SemisortParams::for_size(0).buckets, 1u);
  auto bad = p;
  bad.radix_passes = 2;
  EXPECT_THROW(bad.validate(), std::invalid_argument);
  bad = p;
  bad.alpha = 1.5;
  EXPECT_THROW(bad.validate(), std::invalid_argument);
  bad = p;
  bad.sample_prob = 0;
  EXPECT_THROW(bad.validate(), std::invalid_argument);
  bad = p;
  bad.max_restarts = 0;
  EXPECT_THROW(bad.validate(), std::invalid_argument);
}

TEST(Semisort, SmallExample) {
  auto in = from_keys({3, 1, 3, 2, 1});
  auto res = semisort(in, 1);
  EXPECT_TRUE(is_semisorted(res.records));
  EXPECT_TRUE(same_multiset(res.records, in));
  EXPECT_TRUE(res.trace.small_input);
  EXPECT_TRUE(semisort(std::vector<Record>{}, 1).records.empty());
}

TEST(Semisort, IsSemisortedOracle) {
  EXPECT_TRUE(is_semisorted(from_keys({1, 1, 3, 3, 2})));
  EXPECT_FALSE(is_semisorted(from_keys({1, 3, 1})));
  EXPECT_TRUE(is_semisorted({}));
}

TEST(Semisort, AllEqualTakesHeavyPath) {
  auto in = gen_keys(DistSpec::parse("all_equal"), 1 << 14, 1);
  auto res = semisort(in, 3);
  EXPECT_TRUE(same_multiset(res.records, in));
  EXPECT_EQ(res.trace.heavy_keys, 1u);
  EXPECT_EQ(res.trace.heavy_records, in.size());
  EXPECT_TRUE(res.trace.heavy_placed);
  EXPECT_EQ(res.trace.heavy_records + res.trace.light_records, in.size());
}

TEST(Semisort, UniformMatchesGroupCountOracle) {
  const std::uint64_t n = 1 << 16;
  auto in = gen_keys(DistSpec::parse("uniform"), n, 1);
  auto res = semisort(in, 1);
  ASSERT_TRUE(is_semisorted(res.records));
  ASSERT_TRUE(same_multiset(res.records, in));
  std::unordered_map<std::uint64_t, std::uint64_t> oracle;
  for (auto& r : in) ++oracle[r.key];
  auto groups = group_counts(res.records);
  ASSERT_EQ(groups.size(), oracle.size());
  for (auto& [k, c] : groups) ASSERT_EQ(oracle[k], c);
  EXPECT_TRUE(res.trace.light_placed);
  EXPECT_GT(res.trace.sample_size, 0u);
}

TEST(Semisort, TraceAccounting) {
  const std::uint64_t n = 1 << 15;
  auto in = gen_keys(DistSpec::parse("zipf:1.2"), n, 4);
  WorkMeter m;
  auto res = semisort(in, 9, &m);
  const auto& t = res.trace;
  EXPECT_EQ(t.heavy_records + t.light_records, n);
  EXPECT_EQ(t.work, m.total_ops());
  std::uint64_t phase_sum = 0;
  for (auto& [k, v] : t.phase_work) phase_sum += v;
  EXPECT_EQ(phase_sum, t.work);
  EXPECT_GE(static_cast<double>(t.allocated_slots), t.allocated_exact);
  EXPECT_LT(static_cast<double>(t.allocated_slots), t.allocated_exact + 2.0 * (t.heavy_keys + t.params.buckets));
  if (t.light_placed) {
    std::uint64_t sum = 0;
    for (auto b : t.bucket_sizes) sum += b;
    EXPECT_EQ(sum, t.light_records);
    for (auto a : t.bucket_attempts) EXPECT_LE(a, 64u);
  }
}

TEST(Semisort, DeterministicInSeed) {
  auto in = gen_keys(DistSpec::parse("uniform"), 50000, 2);
  auto a = semisort(in, 5), b = semisort(in, 5);
  EXPECT_EQ(a.records, b.records);
  EXPECT_EQ(a.trace.work, b.trace.work);
}

TEST(Semisort, RestartExceededOnImpossibleRoundCap) {
  auto in = gen_keys(DistSpec::parse("uniform"), 1 << 14, 1);
  auto p = SemisortParams::for_size(in.size());
  p.round_cap = 1;
  p.max_restarts = 1;
  EXPECT_THROW(semisort(in, p, 1), RestartExceeded);
}

TEST(Semisort, SampleEverythingStillCorrect) {
  auto in = gen_keys(DistSpec::parse("zipf:0.8"), 1 << 13, 6);
  auto p = SemisortParams::for_size(in.size());
  p.sample_prob = 1.0;
  auto res = semisort(in, p, 2);
  EXPECT_TRUE(is_semisorted(res.records));
  EXPECT_TRUE(same_multiset(res.records, in));
  EXPECT_EQ(res.trace.sample_size, in.size());
}

TEST(Semisort, ArbitraryKeysAcrossUniverse) {
  std::vector<Record> in;
  for (std::uint64_t i = 0; i < 20000; ++i) in.push_back({mix64(i % 3000) | (1ULL << 63), i});
  auto res = semisort(in, 8);
  EXPECT_TRUE(is_semisorted(res.records));
  EXPECT_TRUE(same_multiset(res.records, in));
}

TEST(Semisort, RandomizedAcrossDistributions) {
  for (const char* d : {"uniform", "zipf:0.8", "zipf:1.2", "all_equal", "all_distinct"}) {
    for (std::uint64_t t = 0; t < 6; ++t) {
      const std::uint64_t n = 1000 + t * 7000;
      auto in = gen_keys(DistSpec::parse(d), n, t);
      auto res = semisort(in, derive_seed(3, t));
      ASSERT_TRUE(is_semisorted(res.records)) << d << " " << n;
      ASSERT_TRUE(same_multiset(res.records, in)) << d << " " << n;
    }
  }
}

TEST(LocalSemisort, Examples) {
  auto one = from_keys({5});
  EXPECT_EQ(local_semisort(one, 3, 1), 1u);
  EXPECT_EQ(one, from_keys({5}));
  std::vector<Record> same(100, Record{7, 0});
  EXPECT_EQ(local_semisort(same, 3, 1), 1u);
  auto mixed = from_keys({4, 1, 4, 9, 1, 9, 4});
  auto copy = mixed;
  WorkMeter m;
  const unsigned attempts = local_semisort(mixed, 3, 2, &m);
  EXPECT_GE(attempts, 1u);
  EXPECT_TRUE(is_semisorted(mixed));
  EXPECT_TRUE(same_multiset(mixed, copy));
  EXPECT_LE(m.total_ops(), attempts * 20 * mixed.size());
}

TEST(LocalSemisort, AttemptsDominatedByGeometricHalf) {
  const int runs = 10000;
  std::vector<int> above(6, 0);
  for (int r = 0; r < runs; ++r) {
    std::vector<Record> b(64);
    for (std::uint64_t i = 0; i < 64; ++i) b[i] = {mix64(i + 64 * r), i};
    const unsigned a = local_semisort(b, 3, derive_seed(17, r));
    ASSERT_TRUE(is_semisorted(b));
    for (unsigned j = 1; j <= 5; ++j) above[j] += a > j;
  }
  for (unsigned j = 1; j <= 5; ++j) {
    EXPECT_LE(static_cast<double>(above[j]) / runs, std::ldexp(1.0, 1 - static_cast<int>(j)) + 0.01) << j;
  }
}

TEST(IntegerSort, Examples) {
  auto out = integer_sort(from_keys({3, 1, 3, 2, 1}), 4, 1, nullptr);
  std::vector<std::uint64_t> keys;
  for (auto& r : out) keys.push_back(r.key);
  EXPECT_EQ(keys, (std::vector<std::uint64_t>{1, 1, 2, 3, 3}));
  EXPECT_THROW(integer_sort(from_keys({5, 1}), 1), KeyOutOfRange);
  auto sorted = from_keys({0, 1, 1, 2, 3});
  auto again = integer_sort(sorted, 2);
  for (std::size_t i = 0; i < sorted.size(); ++i) EXPECT_EQ(again[i].key, sorted[i].key);
  EXPECT_TRUE(integer_sort(std::vector<Record>{}, 1).empty());
}

TEST(IntegerSort, MatchesComparisonSort) {
  const std::uint64_t n = 1 << 16;
  auto in = gen_keys(DistSpec::parse("uniform"), n, 5);
  auto out = integer_sort(in, 3);
  auto expect = comparison_sort(std::span<const Record>(in), KeyLess{});
  ASSERT_EQ(out.size(), n);
  for (std::size_t i = 0; i < n; ++i) ASSERT_EQ(out[i].key, expect[i].key);
  EXPECT_TRUE(same_multiset(out, in));
}
