#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "hpwe/bounds.hpp"
#include "hpwe/experiment.hpp"
#include "hpwe/record_io.hpp"

using namespace hpwe;

namespace {

std::filesystem::path temp_path(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("hpwe_bench_" + name);
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(HPWE_BENCH_PATH) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST(Bounds, Examples) {
  BoundParams p;
  p.lambda = 2;
  p.r = 10;
  EXPECT_NEAR(bound_eval(BoundKind::kGeomSum, p), std::exp(-2.5), 1e-15);
  BoundParams w;
  w.weights = {1, 1, 1, 1};
  w.t = 8;
  EXPECT_NEAR(bound_eval(BoundKind::kWeightedGeom, w), std::exp(-1.0), 1e-15);
  BoundParams c;
  c.delta = 0;
  c.mu = 123;
  EXPECT_DOUBLE_EQ(bound_eval(BoundKind::kChernoffUpper, c), 1.0);
  BoundParams l;
  l.delta = 0.5;
  l.mu = 8;
  EXPECT_NEAR(bound_eval(BoundKind::kChernoffLower, l), std::exp(-1.0), 1e-15);
  BoundParams m;
  m.t = 1;
  m.lipschitz = {1, 1};
  EXPECT_NEAR(bound_eval(BoundKind::kMcDiarmid, m), 2 * std::exp(-1.0), 1e-15);
  m.t = 0.1;
  EXPECT_DOUBLE_EQ(bound_eval(BoundKind::kMcDiarmid, m), 1.0);
}

TEST(Bounds, HypothesisViolations) {
  BoundParams p;
  p.lambda = 0.5;
  p.r = 3;
  EXPECT_THROW(bound_eval(BoundKind::kGeomSum, p), HypothesisViolated);
  BoundParams l;
  l.delta = 1.5;
  l.mu = 1;
  EXPECT_THROW(bound_eval(BoundKind::kChernoffLower, l), HypothesisViolated);
  BoundParams u;
  u.delta = -0.1;
  EXPECT_THROW(bound_eval(BoundKind::kChernoffUpper, u), HypothesisViolated);
  BoundParams w;
  w.t = 1;
  EXPECT_THROW(bound_eval(BoundKind::kWeightedGeom, w), HypothesisViolated);
  BoundParams m;
  m.t = 1;
  EXPECT_THROW(bound_eval(BoundKind::kMcDiarmid, m), HypothesisViolated);
}

TEST(Bounds, Monotone) {
  BoundParams p;
  p.lambda = 1.5;
  double prev = 2.0;
  for (int r = 0; r < 200; ++r) {
    p.r = r;
    const double v = bound_eval(BoundKind::kGeomSum, p);
    EXPECT_LE(v, prev);
    EXPECT_GE(v, 0.0);
    prev = v;
  }
  BoundParams c;
  c.mu = 10;
  prev = 2.0;
  for (int i = 0; i < 100; ++i) {
    c.delta = 0.05 * i;
    const double v = bound_eval(BoundKind::kChernoffUpper, c);
    EXPECT_LE(v, prev);
    prev = v;
  }
}

TEST(Bounds, KindNames) {
  for (auto k : {BoundKind::kChernoffUpper, BoundKind::kChernoffLower, BoundKind::kGeomSum,
                 BoundKind::kWeightedGeom, BoundKind::kMcDiarmid}) {
    EXPECT_EQ(parse_bound_kind(bound_kind_name(k)), k);
  }
  EXPECT_THROW(parse_bound_kind("hoeffding"), std::invalid_argument);
}

TEST(GenKeys, Examples) {
  auto eq = gen_keys(DistSpec::parse("all_equal"), 10, 1);
  ASSERT_EQ(eq.size(), 10u);
  for (std::size_t i = 0; i < eq.size(); ++i) {
    EXPECT_EQ(eq[i].key, eq[0].key);
    EXPECT_EQ(eq[i].payload, i);
  }
  auto d = gen_keys(DistSpec::parse("all_distinct"), 10, 1);
  std::set<std::uint64_t> keys;
  for (auto& r : d) keys.insert(r.key);
  EXPECT_EQ(keys.size(), 10u);
  EXPECT_EQ(*keys.rbegin(), 9u);
  auto z1 = gen_keys(DistSpec::parse("zipf(1)"), 1 << 16, 5);
  auto z2 = gen_keys(DistSpec::parse("zipf:1"), 1 << 16, 5);
  EXPECT_EQ(z1, z2);
  for (auto& r : gen_keys(DistSpec::parse("uniform"), 1000, 2)) EXPECT_LT(r.key, 1000u);
}

TEST(GenKeys, ZipfIsSkewed) {
  auto z = gen_keys(DistSpec::parse("zipf:1.2"), 1 << 14, 3);
  std::uint64_t zeros = 0;
  for (auto& r : z) zeros += r.key == 0;
  EXPECT_GT(zeros, z.size() / 10);
}

TEST(DistSpec, Parse) {
  EXPECT_EQ(DistSpec::parse("zipf").kind, KeyDist::kZipf);
  EXPECT_DOUBLE_EQ(DistSpec::parse("zipf:0.8").theta, 0.8);
  EXPECT_DOUBLE_EQ(DistSpec::parse("zipf(1.2)").theta, 1.2);
  EXPECT_THROW(DistSpec::parse("normal"), ConfigError);
  EXPECT_THROW(DistSpec::parse("zipf:-1"), ConfigError);
}

TEST(TailReport, Examples) {
  EXPECT_THROW(tail_report({}), std::invalid_argument);
  TrialRecord r;
  r.n = 100;
  r.work_per_elem = 7.5;
  auto s = tail_report({r});
  EXPECT_DOUBLE_EQ(s.metrics["work_per_elem"].max, 7.5);
  EXPECT_DOUBLE_EQ(s.metrics["work_per_elem"].mean, 7.5);
  EXPECT_DOUBLE_EQ(s.slope_ratio, 1.0);
  TrialRecord big = r;
  big.n = 10000;
  EXPECT_DOUBLE_EQ(tail_report({r, big}).slope_ratio, 1.0);
  big.work_per_elem = 15;
  EXPECT_DOUBLE_EQ(tail_report({r, big}).slope_ratio, 2.0);
}

TEST(TailReport, MatchesSequentialRecomputation) {
  std::vector<TrialRecord> recs(200);
  for (std::size_t i = 0; i < recs.size(); ++i) {
    recs[i].n = 1000;
    recs[i].work_per_elem = static_cast<double>((i * 37) % 200 + 1);  // a permutation of 1..200
    recs[i].buckets = 10;
    recs[i].attempts_above = {4, 2, 1, 0, 0};
  }
  auto s = tail_report(recs);
  const auto& m = s.metrics["work_per_elem"];
  EXPECT_EQ(m.count, 200u);
  EXPECT_DOUBLE_EQ(m.min, 1);
  EXPECT_DOUBLE_EQ(m.max, 200);
  EXPECT_DOUBLE_EQ(m.mean, 100.5);
  EXPECT_DOUBLE_EQ(m.p50, 100);
  EXPECT_DOUBLE_EQ(m.p90, 180);
  EXPECT_DOUBLE_EQ(m.p99, 198);
  ASSERT_EQ(s.attempts.size(), 5u);
  EXPECT_DOUBLE_EQ(s.attempts[0].empirical, 0.4);
  EXPECT_DOUBLE_EQ(s.attempts[0].bound, 0.5);
  EXPECT_DOUBLE_EQ(s.attempts[2].empirical, 0.1);
  std::ostringstream out;
  write_report(out, s);
  EXPECT_NE(out.str().find("slope_ratio,"), std::string::npos);
}

TEST(Config, Validation) {
  ExperimentConfig c;
  c.algorithm = "semisort";
  EXPECT_NO_THROW(c.validate());
  c.trials = 0;
  EXPECT_THROW(c.validate(), ConfigError);
  c.trials = 1;
  c.params["tau"] = "abc";
  EXPECT_THROW(c.validate(), ConfigError);
  c.params["tau"] = "4";
  EXPECT_NO_THROW(c.validate());
  c.params["graph"] = "gnm";
  EXPECT_THROW(c.validate(), ConfigError);
  c.params.clear();
  c.params["alpha"] = "1.5";
  EXPECT_THROW(c.validate(), ConfigError);
  c.params.clear();
  c.algorithm = "intsort";
  c.params["tau"] = "4";
  EXPECT_THROW(c.validate(), ConfigError);
  c.params.clear();
  c.algorithm = "sorting";
  EXPECT_THROW(c.validate(), ConfigError);
  c.algorithm = "bounds";
  EXPECT_THROW(c.validate(), ConfigError);
  c.params["bound"] = "geom_sum";
  EXPECT_NO_THROW(c.validate());
  c.algorithm = "color";
  c.params.clear();
  c.params["graph"] = "torus";
  EXPECT_THROW(c.validate(), ConfigError);
  c.format = "xml";
  c.params.clear();
  EXPECT_THROW(c.validate(), ConfigError);
}

TEST(Config, DefaultsResolveFromSize) {
  ExperimentConfig c;
  c.algorithm = "color";
  EXPECT_EQ(c.edges(1024), 16u * 1024);
  EXPECT_EQ(c.pieces(1024), 10u);
  c.m = 77;
  c.k = 3;
  EXPECT_EQ(c.edges(1024), 77u);
  EXPECT_EQ(c.pieces(1024), 3u);
  ExperimentConfig s;
  s.algorithm = "semisort";
  s.params["tau"] = "9";
  EXPECT_EQ(s.semisort_params(1 << 16).tau, 9u);
  EXPECT_EQ(s.semisort_params(1 << 16).buckets, 256u);
}

TEST(Config, MergeFile) {
  auto p = temp_path("cfg.txt");
  {
    std::ofstream f(p);
    f << "# sample\nalgorithm = semisort\nn = 1024, 2048\ntrials=3\nseed=9\ndist=zipf:1.2\ntau=5\n";
  }
  ExperimentConfig c;
  c.merge_file(p.string());
  EXPECT_EQ(c.algorithm, "semisort");
  EXPECT_EQ(c.sizes, (std::vector<std::uint64_t>{1024, 2048}));
  EXPECT_EQ(c.trials, 3u);
  EXPECT_EQ(c.seed, 9u);
  EXPECT_EQ(c.dist, "zipf:1.2");
  EXPECT_EQ(c.params.at("tau"), "5");
  EXPECT_NO_THROW(c.validate());
  {
    std::ofstream f(p);
    f << "no equals sign\n";
  }
  EXPECT_THROW(c.merge_file(p.string()), ConfigError);
  std::filesystem::remove(p);
  EXPECT_THROW(c.merge_file(p.string()), IoError);
}

TEST(Experiment, RunsAndVerifiesEveryAlgorithm) {
  for (const char* alg : {"semisort", "intsort", "placement", "partition", "mis", "color"}) {
    ExperimentConfig c;
    c.algorithm = alg;
    c.sizes = {1 << 11};
    c.trials = 2;
    auto res = run_experiment(c);
    ASSERT_EQ(res.records.size(), 2u) << alg;
    EXPECT_TRUE(res.all_verified()) << alg;
    for (const auto& r : res.records) {
      EXPECT_EQ(r.verdict, "ok") << alg;
      EXPECT_GT(r.work, 0u) << alg;
    }
    EXPECT_NE(res.records[0].seed, res.records[1].seed);
  }
}

TEST(Experiment, CsvHeaderAndDeterminism) {
  ExperimentConfig c;
  c.algorithm = "semisort";
  c.sizes = {1 << 12};
  c.trials = 3;
  std::ostringstream a, b;
  write_csv(a, c, run_experiment(c));
  write_csv(b, c, run_experiment(c));
  EXPECT_EQ(a.str(), b.str());
  EXPECT_EQ(a.str().rfind("# ", 0), 0u);
  EXPECT_EQ(a.str().find("wall_ms"), std::string::npos);
  c.timing = true;
  std::ostringstream t;
  write_csv(t, c, run_experiment(c));
  EXPECT_NE(t.str().find("wall_ms"), std::string::npos);
  std::ostringstream j;
  write_json(j, c, run_experiment(c));
  EXPECT_NE(j.str().find("\"trials\""), std::string::npos);
}

TEST(Experiment, RunBound) {
  ExperimentConfig c;
  c.algorithm = "bounds";
  c.params = {{"bound", "weighted_geom"}, {"weights", "1,1,1,1"}, {"t", "8"}};
  EXPECT_NEAR(run_bound(c), std::exp(-1.0), 1e-15);
}

TEST(Cli, ExitCodes) {
  EXPECT_EQ(run_cli("semisort --n 2048 --trials 2"), 0);
  EXPECT_EQ(run_cli("color --n 1024 --param graph=power_law"), 0);
  EXPECT_EQ(run_cli("bounds --param bound=geom_sum --param lambda=2 --param r=10"), 0);
  EXPECT_EQ(run_cli("semisort --n 4096 --param round_cap=1 --param max_restarts=1"), 1);
  EXPECT_EQ(run_cli("semisort --n 2048 --trials 0"), 2);
  EXPECT_EQ(run_cli("semisort --n 2048 --dist gaussian"), 2);
  EXPECT_EQ(run_cli("semisort --n 2048 --bogus-flag"), 2);
  EXPECT_EQ(run_cli("bounds --param bound=geom_sum --param lambda=0.5"), 2);
  EXPECT_EQ(run_cli("semisort --n 2048 --out /nonexistent_dir/x.csv"), 3);
  EXPECT_EQ(run_cli("semisort --input /nonexistent_dir/in.bin"), 3);
  EXPECT_EQ(run_cli("semisort --config /nonexistent_dir/cfg"), 3);
}

TEST(Cli, ReproducibleCsv) {
  auto a = temp_path("a.csv"), b = temp_path("b.csv");
  ASSERT_EQ(run_cli("mis --n 2048 --trials 3 --seed 5 --out " + a.string()), 0);
  ASSERT_EQ(run_cli("mis --n 2048 --trials 3 --seed 5 --out " + b.string()), 0);
  const auto sa = slurp(a);
  EXPECT_FALSE(sa.empty());
  EXPECT_EQ(sa, slurp(b));
  std::filesystem::remove(a);
  std::filesystem::remove(b);
}

TEST(Cli, SaveAndReloadInput) {
  auto in = temp_path("keys.psrt"), o1 = temp_path("o1.csv"), o2 = temp_path("o2.csv");
  ASSERT_EQ(run_cli("semisort --n 3000 --seed 2 --save-input " + in.string() + " --out " + o1.string()), 0);
  auto recs = read_records(in);
  EXPECT_EQ(recs.size(), 3000u);
  ASSERT_EQ(run_cli("semisort --input " + in.string() + " --seed 2 --out " + o2.string()), 0);
  std::filesystem::remove(in);
  std::filesystem::remove(o1);
  std::filesystem::remove(o2);
}
