#include "hpwe/experiment.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <numeric>
#include <ostream>
#include <random>
#include <set>
#include <sstream>

#include <json.hpp>

#include "hpwe/graph.hpp"
#include "hpwe/graph_algos.hpp"
#include "hpwe/partition.hpp"
#include "hpwe/placement.hpp"
#include "hpwe/record_io.hpp"
#include "hpwe/rng.hpp"

namespace hpwe {
namespace {

const std::set<std::string> kAlgorithms = {"semisort", "intsort", "placement", "partition",
                                           "mis", "color", "bounds"};

const std::set<std::string> kSemisortKeys = {"p_s", "tau", "alpha", "c_alloc", "K", "B", "d",
                                             "round_cap", "max_restarts", "small_n_cutoff", "log_n"};
const std::set<std::string> kPlacementKeys = {"alpha", "d", "round_cap", "round_cap_factor", "targets"};
const std::set<std::string> kGraphKeys = {"graph", "exponent"};
const std::set<std::string> kBoundKeys = {"bound", "delta", "mu", "lambda", "r", "t", "weights",
                                          "lipschitz"};

const std::set<std::string>& keys_for(const std::string& algorithm) {
  static const std::set<std::string> none;
  if (algorithm == "semisort") return kSemisortKeys;
  if (algorithm == "placement") return kPlacementKeys;
  if (algorithm == "partition" || algorithm == "mis" || algorithm == "color") return kGraphKeys;
  if (algorithm == "bounds") return kBoundKeys;
  return none;
}

double parse_double(const std::string& key, const std::string& text) {
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("parameter " + key + ": expected a number, got '" + text + "'");
  }
}

std::uint64_t parse_u64(const std::string& key, const std::string& text) {
  std::uint64_t v = 0;
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end) {
    throw ConfigError("parameter " + key + ": expected an unsigned integer, got '" + text + "'");
  }
  return v;
}

std::vector<double> parse_list(const std::string& key, const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_double(key, item));
  return out;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::uint64_t max_attempts_of(const SemisortTrace& t) {
  std::uint64_t best = 0;
  for (auto a : t.bucket_attempts) best = std::max<std::uint64_t>(best, a);
  return best;
}

void fill_from_trace(TrialRecord& rec, const SemisortTrace& t) {
  rec.work = t.work;
  rec.rounds = t.rounds;
  rec.restarts = t.restarts;
  rec.heavy_records = t.heavy_records;
  rec.light_records = t.light_records;
  rec.max_bucket = t.max_bucket_size;
  rec.max_attempts = max_attempts_of(t);
  rec.allocated = t.allocated_slots;
  rec.placement_rounds = t.placement_rounds;
  rec.probes = t.placement_probes;
  rec.attempts_above.assign(5, 0);
  for (auto a : t.bucket_attempts) {
    if (a == 0) continue;
    ++rec.buckets;
    for (std::uint64_t j = 1; j <= 5; ++j) {
      if (a > j) ++rec.attempts_above[j - 1];
    }
  }
}

bool same_multiset(std::vector<Record> a, std::vector<Record> b) {
  if (a.size() != b.size()) return false;
  auto by_both = [](const Record& x, const Record& y) {
    return x.key != y.key ? x.key < y.key : x.payload < y.payload;
  };
  std::sort(a.begin(), a.end(), by_both);
  std::sort(b.begin(), b.end(), by_both);
  return a == b;
}

std::vector<Record> input_records(const ExperimentConfig& c, std::uint64_t n, std::uint64_t seed) {
  if (!c.input.empty()) return read_records(c.input);
  auto records = gen_keys(DistSpec::parse(c.dist), n, seed);
  if (!c.save_input.empty()) write_records(c.save_input, records);
  return records;
}

Graph input_graph(const ExperimentConfig& c, std::uint64_t n, std::uint64_t seed) {
  Graph g;
  if (!c.input.empty()) {
    std::ifstream probe(c.input, std::ios::binary);
    if (!probe) throw IoError("cannot open " + c.input);
    char magic[4] = {};
    probe.read(magic, 4);
    g = std::string(magic, 4) == "PCSR" ? read_csr(c.input) : read_edge_list(c.input);
  } else {
    const auto kind = parse_graph_kind(c.param_string("graph", "gnm"));
    if (kind == GraphKind::kPowerLaw) {
      g = power_law(n, c.edges(n), seed, c.param_double("exponent", 2.5));
    } else {
      g = generate(kind, n, c.edges(n), seed);
    }
  }
  if (!c.save_input.empty()) write_csr(c.save_input, g);
  return g;
}

PlacementInstance placement_instance(const ExperimentConfig& c, std::uint64_t n, std::uint64_t seed) {
  const std::uint64_t lg = std::max(1u, ceil_log2(n));
  const std::uint64_t targets = std::max<std::uint64_t>(1, c.param_u64("targets", std::max<std::uint64_t>(1, n / lg)));
  PlacementInstance inst;
  inst.alpha = c.param_double("alpha", 2.0);
  inst.block_size = c.param_u64("d", lg);
  const auto records = input_records(c, n, seed);
  inst.target_of.resize(records.size());
  std::vector<std::uint64_t> load(targets, 0);
  for (std::size_t i = 0; i < records.size(); ++i) {
    inst.target_of[i] = static_cast<std::uint32_t>(records[i].key % targets);
    ++load[inst.target_of[i]];
  }
  std::uint64_t base = 0;
  inst.targets.resize(targets);
  for (std::uint64_t t = 0; t < targets; ++t) {
    const auto cap = static_cast<std::uint64_t>(std::ceil(inst.alpha * static_cast<double>(load[t])));
    inst.targets[t] = {cap, base};
    base += cap;
  }
  return inst;
}

void run_trial(const ExperimentConfig& c, std::uint64_t n, TrialRecord& rec) {
  const std::uint64_t seed = rec.seed;
  if (c.algorithm == "semisort") {
    const auto input = input_records(c, n, seed);
    rec.n = input.size();
    WorkMeter meter;
    const auto res = semisort(input, c.semisort_params(input.size()), seed, &meter);
    fill_from_trace(rec, res.trace);
    const bool ok = is_semisorted(res.records) && same_multiset(res.records, input);
    rec.verified = ok;
    rec.verdict = ok ? "ok" : "not_semisorted";
  } else if (c.algorithm == "intsort") {
    const auto input = input_records(c, n, seed);
    rec.n = input.size();
    WorkMeter meter;
    const auto out = integer_sort(input, std::max<std::uint64_t>(input.size(), 1), seed, &meter);
    rec.work = meter.total_ops();
    rec.rounds = meter.rounds();
    auto expect = input;
    std::stable_sort(expect.begin(), expect.end(), KeyLess{});
    bool ok = out.size() == expect.size() && same_multiset(out, input);
    for (std::size_t i = 0; ok && i < out.size(); ++i) ok = out[i].key == expect[i].key;
    rec.verified = ok;
    rec.verdict = ok ? "ok" : "not_sorted";
  } else if (c.algorithm == "placement") {
    const auto inst = placement_instance(c, n, seed);
    rec.n = inst.target_of.size();
    const std::uint64_t cap = c.params.count("round_cap")
                                  ? c.param_u64("round_cap", 1)
                                  : default_round_cap(rec.n, c.param_u64("round_cap_factor", 8));
    WorkMeter meter;
    const auto outcome = place(inst, cap, seed, &meter);
    rec.work = meter.total_ops();
    rec.rounds = meter.rounds();
    rec.placement_rounds = outcome.result.rounds_used;
    rec.probes = outcome.result.probes;
    rec.allocated = outcome.result.arena.size();
    const bool injective = audit_placement(inst, outcome.result);
    rec.verified = outcome.placed() && injective;
    rec.verdict = !outcome.placed() ? "timed_out" : injective ? "ok" : "not_injective";
  } else {
    const Graph g = input_graph(c, n, seed);
    rec.n = g.n;
    rec.m = g.m();
    rec.k = c.pieces(g.n);
    WorkMeter meter;
    if (c.algorithm == "partition") {
      const auto p = cull_partition(g, rec.k, seed, &meter);
      const auto r = reorganize(g, p, seed, &meter);
      rec.work = meter.total_ops();
      rec.rounds = meter.rounds();
      rec.culled = p.culled.size();
      rec.cull_phases = p.phases;
      const auto edges = p.piece_edges(g);
      rec.max_piece_edges = edges.empty() ? 0 : *std::max_element(edges.begin(), edges.end());
      rec.verified = audit_reorganized(g, p, r);
      rec.verdict = rec.verified ? "ok" : "bad_reorganization";
    } else if (c.algorithm == "mis") {
      const auto res = boosted_mis(g, rec.k, seed, &meter);
      rec.work = res.stats.work;
      rec.rounds = res.stats.rounds;
      rec.culled = res.stats.culled;
      rec.cull_phases = res.stats.cull_phases;
      rec.max_piece_edges = res.stats.max_piece_edges;
      rec.cut_edges = res.stats.cut_edges;
      rec.set_size = std::accumulate(res.in_set.begin(), res.in_set.end(), std::uint64_t{0});
      rec.verified = verify_mis(g, res.in_set);
      rec.verdict = rec.verified ? "ok" : "not_mis";
    } else {
      const auto res = boosted_coloring(g, rec.k, seed, &meter);
      rec.work = res.stats.work;
      rec.rounds = res.stats.rounds;
      rec.culled = res.stats.culled;
      rec.cull_phases = res.stats.cull_phases;
      rec.max_piece_edges = res.stats.max_piece_edges;
      rec.cut_edges = res.stats.cut_edges;
      std::set<std::uint32_t> used(res.color.begin(), res.color.end());
      rec.colors = used.size();
      rec.verified = verify_coloring(g, res.color, res.delta);
      rec.verdict = rec.verified ? "ok" : "not_proper";
    }
  }
  const std::uint64_t size = rec.m > 0 ? rec.m : rec.n;
  rec.work_per_elem = size == 0 ? 0.0 : static_cast<double>(rec.work) / static_cast<double>(size);
}

std::string fmt_double(double x) {
  std::ostringstream os;
  os.precision(6);
  os << std::fixed << x;
  return os.str();
}

std::vector<std::string> csv_columns(bool timing) {
  std::vector<std::string> cols = {
      "algorithm", "trial", "seed", "n", "m", "k", "work", "work_per_elem", "rounds", "restarts",
      "heavy_records", "light_records", "max_bucket", "max_attempts", "buckets", "attempts_gt1",
      "attempts_gt2", "attempts_gt3", "attempts_gt4", "attempts_gt5", "allocated",
      "placement_rounds", "probes", "culled", "cull_phases", "max_piece_edges", "cut_edges",
      "colors", "set_size", "verified", "verdict"};
  if (timing) cols.push_back("wall_ms");
  return cols;
}

nlohmann::ordered_json record_json(const TrialRecord& r, bool timing) {
  nlohmann::ordered_json j;
  j["algorithm"] = r.algorithm;
  j["trial"] = r.trial;
  j["seed"] = r.seed;
  j["n"] = r.n;
  j["m"] = r.m;
  j["k"] = r.k;
  j["work"] = r.work;
  j["work_per_elem"] = r.work_per_elem;
  j["rounds"] = r.rounds;
  j["restarts"] = r.restarts;
  j["heavy_records"] = r.heavy_records;
  j["light_records"] = r.light_records;
  j["max_bucket"] = r.max_bucket;
  j["max_attempts"] = r.max_attempts;
  j["buckets"] = r.buckets;
  for (std::size_t i = 0; i < 5; ++i) {
    j["attempts_gt" + std::to_string(i + 1)] = i < r.attempts_above.size() ? r.attempts_above[i] : 0;
  }
  j["allocated"] = r.allocated;
  j["placement_rounds"] = r.placement_rounds;
  j["probes"] = r.probes;
  j["culled"] = r.culled;
  j["cull_phases"] = r.cull_phases;
  j["max_piece_edges"] = r.max_piece_edges;
  j["cut_edges"] = r.cut_edges;
  j["colors"] = r.colors;
  j["set_size"] = r.set_size;
  j["verified"] = r.verified;
  j["verdict"] = r.verdict;
  if (timing) j["wall_ms"] = r.wall_ms;
  return j;
}

double quantile(const std::vector<double>& sorted, double q) {
  // Nearest-rank quantile.
  const auto rank = static_cast<std::size_t>(std::ceil(q * static_cast<double>(sorted.size())));
  return sorted[std::min(sorted.size() - 1, rank == 0 ? 0 : rank - 1)];
}

}  // namespace

DistSpec DistSpec::parse(std::string_view text) {
  DistSpec d;
  std::string s(text);
  if (s == "uniform") {
    d.kind = KeyDist::kUniform;
  } else if (s == "all_equal") {
    d.kind = KeyDist::kAllEqual;
  } else if (s == "all_distinct") {
    d.kind = KeyDist::kAllDistinct;
  } else if (s.rfind("zipf", 0) == 0) {
    d.kind = KeyDist::kZipf;
    std::string rest = s.substr(4);
    if (!rest.empty()) {
      if (rest.front() == ':') {
        rest = rest.substr(1);
      } else if (rest.front() == '(' && rest.back() == ')') {
        rest = rest.substr(1, rest.size() - 2);
      } else {
        throw ConfigError("bad zipf spec: " + s);
      }
      d.theta = parse_double("dist", rest);
    }
    if (!(d.theta > 0.0) || !std::isfinite(d.theta)) throw ConfigError("zipf theta must be > 0");
  } else {
    throw ConfigError("unknown distribution: " + s);
  }
  return d;
}

std::string DistSpec::name() const {
  switch (kind) {
    case KeyDist::kUniform: return "uniform";
    case KeyDist::kAllEqual: return "all_equal";
    case KeyDist::kAllDistinct: return "all_distinct";
    case KeyDist::kZipf: {
      std::ostringstream os;
      os << "zipf:" << theta;
      return os.str();
    }
  }
  return "?";
}

std::vector<Record> gen_keys(const DistSpec& dist, std::uint64_t n, std::uint64_t seed) {
  std::vector<Record> out(n);
  for (std::uint64_t i = 0; i < n; ++i) out[i].payload = i;
  switch (dist.kind) {
    case KeyDist::kUniform:
      for (std::uint64_t i = 0; i < n; ++i) out[i].key = bounded(stream_value(seed, 0x6b, i), n);
      break;
    case KeyDist::kAllEqual:
      break;
    case KeyDist::kAllDistinct: {
      std::vector<std::uint64_t> keys(n);
      std::iota(keys.begin(), keys.end(), std::uint64_t{0});
      std::mt19937_64 rng(seed);
      std::shuffle(keys.begin(), keys.end(), rng);
      for (std::uint64_t i = 0; i < n; ++i) out[i].key = keys[i];
      break;
    }
    case KeyDist::kZipf: {
      if (n == 0) break;
      std::vector<double> weights(n);
      for (std::uint64_t i = 0; i < n; ++i) weights[i] = std::pow(static_cast<double>(i + 1), -dist.theta);
      std::discrete_distribution<std::uint64_t> rank(weights.begin(), weights.end());
      std::mt19937_64 rng(seed);
      for (std::uint64_t i = 0; i < n; ++i) out[i].key = rank(rng);
      break;
    }
  }
  return out;
}

void ExperimentConfig::validate() const {
  if (!kAlgorithms.count(algorithm)) throw ConfigError("unknown algorithm: " + algorithm);
  if (trials < 1) throw ConfigError("trials must be >= 1");
  if (format != "csv" && format != "json") throw ConfigError("format must be csv or json");
  if (algorithm != "bounds") {
    if (sizes.empty()) throw ConfigError("at least one size is required");
    for (auto n : sizes) {
      if (n >= kMaxPlacementRecords) throw ConfigError("n must be below 2^31");
    }
  }
  const auto& known = keys_for(algorithm);
  for (const auto& [key, value] : params) {
    if (!known.count(key)) throw ConfigError("parameter '" + key + "' does not apply to " + algorithm);
  }
  DistSpec::parse(dist);
  if (algorithm == "semisort" || algorithm == "intsort") {
    for (auto n : sizes) semisort_params(n);
  }
  if (algorithm == "placement") {
    if (param_double("alpha", 2.0) < 2.0) throw ConfigError("alpha must be >= 2");
    if (params.count("d") && param_u64("d", 1) < 1) throw ConfigError("d must be >= 1");
    if (params.count("round_cap") && param_u64("round_cap", 1) < 1) throw ConfigError("round_cap must be >= 1");
    if (params.count("targets") && param_u64("targets", 1) < 1) throw ConfigError("targets must be >= 1");
  }
  if (algorithm == "partition" || algorithm == "mis" || algorithm == "color") {
    try {
      parse_graph_kind(param_string("graph", "gnm"));
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what());
    }
    if (params.count("exponent") && !(param_double("exponent", 2.5) > 2.0)) {
      throw ConfigError("exponent must exceed 2");
    }
  }
  if (algorithm == "bounds") {
    if (!params.count("bound")) throw ConfigError("bounds needs --param bound=NAME");
    try {
      parse_bound_kind(params.at("bound"));
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what());
    }
  }
}

void ExperimentConfig::merge_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config " + path);
  std::string line;
  std::uint64_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(path + ":" + std::to_string(lineno) + ": expected key=value");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key == "algorithm") {
      algorithm = value;
    } else if (key == "n") {
      sizes.clear();
      std::stringstream ss(value);
      std::string item;
      while (std::getline(ss, item, ',')) sizes.push_back(parse_u64("n", trim(item)));
    } else if (key == "m") {
      m = parse_u64(key, value);
    } else if (key == "k") {
      k = parse_u64(key, value);
    } else if (key == "dist") {
      dist = value;
    } else if (key == "trials") {
      trials = parse_u64(key, value);
    } else if (key == "seed") {
      seed = parse_u64(key, value);
    } else if (key == "out") {
      out = value;
    } else if (key == "format") {
      format = value;
    } else if (key == "timing") {
      timing = value == "1" || value == "true";
    } else {
      params[key] = value;
    }
  }
}

double ExperimentConfig::param_double(const std::string& key, double fallback) const {
  auto it = params.find(key);
  return it == params.end() ? fallback : parse_double(key, it->second);
}

std::uint64_t ExperimentConfig::param_u64(const std::string& key, std::uint64_t fallback) const {
  auto it = params.find(key);
  return it == params.end() ? fallback : parse_u64(key, it->second);
}

std::string ExperimentConfig::param_string(const std::string& key, const std::string& fallback) const {
  auto it = params.find(key);
  return it == params.end() ? fallback : it->second;
}

SemisortParams ExperimentConfig::semisort_params(std::uint64_t n) const {
  SemisortParams p = SemisortParams::for_size(n);
  p.sample_prob = param_double("p_s", p.sample_prob);
  p.tau = param_u64("tau", p.tau);
  p.alpha = param_double("alpha", p.alpha);
  p.c_alloc = param_double("c_alloc", p.c_alloc);
  p.radix_passes = static_cast<unsigned>(param_u64("K", p.radix_passes));
  p.buckets = param_u64("B", p.buckets);
  p.block_size = param_u64("d", p.block_size);
  p.round_cap = param_u64("round_cap", p.round_cap);
  p.max_restarts = static_cast<unsigned>(param_u64("max_restarts", p.max_restarts));
  p.small_n_cutoff = param_u64("small_n_cutoff", p.small_n_cutoff);
  p.log_n = param_double("log_n", p.log_n);
  try {
    p.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  return p;
}

std::uint64_t ExperimentConfig::pieces(std::uint64_t n) const {
  return k != 0 ? k : std::max<std::uint64_t>(1, ceil_log2(n));
}

std::uint64_t ExperimentConfig::edges(std::uint64_t n) const { return m != 0 ? m : 16 * n; }

bool ExperimentResult::all_verified() const {
  return std::all_of(records.begin(), records.end(), [](const TrialRecord& r) { return r.verified; });
}

ExperimentResult run_experiment(const ExperimentConfig& config) {
  config.validate();
  if (config.algorithm == "bounds") throw ConfigError("bounds has no trials; use run_bound");
  ExperimentResult result;
  for (auto n : config.sizes) {
    for (std::uint64_t t = 0; t < config.trials; ++t) {
      TrialRecord rec;
      rec.algorithm = config.algorithm;
      rec.trial = t;
      rec.seed = derive_seed(config.seed, t);
      rec.n = n;
      const auto start = std::chrono::steady_clock::now();
      try {
        run_trial(config, n, rec);
      } catch (const RestartExceeded&) {
        rec.verified = false;
        rec.verdict = "restart_exceeded";
      }
      rec.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
      result.records.push_back(std::move(rec));
    }
  }
  return result;
}

std::string resolved_params(const ExperimentConfig& c) {
  std::ostringstream os;
  os << "algorithm=" << c.algorithm << " n=";
  for (std::size_t i = 0; i < c.sizes.size(); ++i) os << (i ? "," : "") << c.sizes[i];
  os << " trials=" << c.trials << " seed=" << c.seed;
  if (c.algorithm == "semisort" || c.algorithm == "intsort" || c.algorithm == "placement") {
    os << " dist=" << DistSpec::parse(c.dist).name();
  }
  if (c.algorithm == "semisort" || c.algorithm == "intsort") {
    for (std::size_t i = 0; i < c.sizes.size(); ++i) {
      const auto p = c.semisort_params(c.sizes[i]);
      os << " [n=" << c.sizes[i] << " p_s=" << p.sample_prob << " tau=" << p.tau << " alpha=" << p.alpha
         << " c_alloc=" << p.c_alloc << " K=" << p.radix_passes << " B=" << p.buckets
         << " d=" << p.block_size << " round_cap=" << p.round_cap << " max_restarts=" << p.max_restarts
         << " small_n_cutoff=" << p.small_n_cutoff << " log_n=" << p.log_n << "]";
    }
  } else if (c.algorithm == "partition" || c.algorithm == "mis" || c.algorithm == "color") {
    os << " graph=" << c.param_string("graph", "gnm");
    if (c.params.count("exponent")) os << " exponent=" << c.param_double("exponent", 2.5);
    for (auto n : c.sizes) os << " [n=" << n << " m=" << c.edges(n) << " k=" << c.pieces(n) << "]";
  } else {
    for (const auto& [key, value] : c.params) os << " " << key << "=" << value;
  }
  if (!c.input.empty()) os << " input=" << c.input;
  return os.str();
}

void write_csv(std::ostream& out, const ExperimentConfig& config, const ExperimentResult& result) {
  out << "# " << resolved_params(config) << '\n';
  const auto cols = csv_columns(config.timing);
  for (std::size_t i = 0; i < cols.size(); ++i) out << (i ? "," : "") << cols[i];
  out << '\n';
  for (const auto& r : result.records) {
    out << r.algorithm << ',' << r.trial << ',' << r.seed << ',' << r.n << ',' << r.m << ',' << r.k
        << ',' << r.work << ',' << fmt_double(r.work_per_elem) << ',' << r.rounds << ','
        << r.restarts << ',' << r.heavy_records << ',' << r.light_records << ',' << r.max_bucket
        << ',' << r.max_attempts << ',' << r.buckets;
    for (std::size_t i = 0; i < 5; ++i) out << ',' << (i < r.attempts_above.size() ? r.attempts_above[i] : 0);
    out << ',' << r.allocated << ',' << r.placement_rounds << ',' << r.probes << ',' << r.culled
        << ',' << r.cull_phases << ',' << r.max_piece_edges << ',' << r.cut_edges << ','
        << r.colors << ',' << r.set_size << ',' << (r.verified ? 1 : 0) << ',' << r.verdict;
    if (config.timing) out << ',' << fmt_double(r.wall_ms);
    out << '\n';
  }
}

void write_json(std::ostream& out, const ExperimentConfig& config, const ExperimentResult& result) {
  nlohmann::ordered_json doc;
  doc["config"]["algorithm"] = config.algorithm;
  doc["config"]["n"] = config.sizes;
  doc["config"]["m"] = config.m;
  doc["config"]["k"] = config.k;
  doc["config"]["dist"] = config.dist;
  doc["config"]["trials"] = config.trials;
  doc["config"]["seed"] = config.seed;
  doc["config"]["params"] = config.params;
  doc["config"]["resolved"] = resolved_params(config);
  doc["trials"] = nlohmann::ordered_json::array();
  for (const auto& r : result.records) doc["trials"].push_back(record_json(r, config.timing));
  out << doc.dump(2) << '\n';
}

MetricSummary summarize(std::vector<double> values) {
  MetricSummary s;
  if (values.empty()) return s;
  std::sort(values.begin(), values.end());
  s.count = values.size();
  s.min = values.front();
  s.max = values.back();
  s.mean = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
  s.p50 = quantile(values, 0.50);
  s.p90 = quantile(values, 0.90);
  s.p99 = quantile(values, 0.99);
  return s;
}

TailSummary tail_report(const std::vector<TrialRecord>& records) {
  if (records.empty()) throw std::invalid_argument("tail_report needs at least one record");
  TailSummary out;
  auto metric = [&](const std::string& name, auto get) {
    std::vector<double> v;
    for (const auto& r : records) v.push_back(static_cast<double>(get(r)));
    out.metrics[name] = summarize(std::move(v));
  };
  metric("work_per_elem", [](const TrialRecord& r) { return r.work_per_elem; });
  metric("rounds", [](const TrialRecord& r) { return r.rounds; });
  metric("restarts", [](const TrialRecord& r) { return r.restarts; });
  metric("max_bucket", [](const TrialRecord& r) { return r.max_bucket; });
  metric("max_attempts", [](const TrialRecord& r) { return r.max_attempts; });
  metric("placement_rounds", [](const TrialRecord& r) { return r.placement_rounds; });
  metric("wall_ms", [](const TrialRecord& r) { return r.wall_ms; });

  std::map<std::uint64_t, double> worst;
  for (const auto& r : records) {
    const std::uint64_t size = r.m > 0 ? r.m : r.n;
    worst[size] = std::max(worst[size], r.work_per_elem);
  }
  if (worst.size() >= 2 && worst.begin()->second > 0.0) {
    out.slope_ratio = worst.rbegin()->second / worst.begin()->second;
  }

  std::uint64_t buckets = 0;
  std::vector<std::uint64_t> above(5, 0);
  for (const auto& r : records) {
    buckets += r.buckets;
    for (std::size_t j = 0; j < r.attempts_above.size() && j < 5; ++j) above[j] += r.attempts_above[j];
  }
  if (buckets > 0) {
    for (std::uint64_t j = 1; j <= 5; ++j) {
      out.attempts.push_back({j, static_cast<double>(above[j - 1]) / static_cast<double>(buckets),
                              std::ldexp(1.0, -static_cast<int>(j))});
    }
  }
  return out;
}

void write_report(std::ostream& out, const TailSummary& s) {
  out << "metric,count,min,mean,p50,p90,p99,max\n";
  for (const auto& [name, m] : s.metrics) {
    out << name << ',' << m.count << ',' << fmt_double(m.min) << ',' << fmt_double(m.mean) << ','
        << fmt_double(m.p50) << ',' << fmt_double(m.p90) << ',' << fmt_double(m.p99) << ','
        << fmt_double(m.max) << '\n';
  }
  out << "slope_ratio," << fmt_double(s.slope_ratio) << '\n';
  for (const auto& e : s.attempts) {
    out << "attempts_gt" << e.j << ",empirical=" << fmt_double(e.empirical)
        << ",bound=" << fmt_double(e.bound) << '\n';
  }
}

double run_bound(const ExperimentConfig& c, BoundParams* resolved) {
  c.validate();
  BoundParams p;
  p.delta = c.param_double("delta", p.delta);
  p.mu = c.param_double("mu", p.mu);
  p.lambda = c.param_double("lambda", p.lambda);
  p.r = c.param_double("r", p.r);
  p.t = c.param_double("t", p.t);
  if (c.params.count("weights")) p.weights = parse_list("weights", c.params.at("weights"));
  if (c.params.count("lipschitz")) p.lipschitz = parse_list("lipschitz", c.params.at("lipschitz"));
  if (resolved != nullptr) *resolved = p;
  return bound_eval(parse_bound_kind(c.params.at("bound")), p);
}

}  // namespace hpwe
