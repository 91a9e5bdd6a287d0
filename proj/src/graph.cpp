#include "hpwe/graph.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <numeric>
#include <sstream>
#include <string>

#include "hpwe/record_io.hpp"
#include "hpwe/rng.hpp"

namespace hpwe {
namespace {

constexpr std::uint64_t kMaxVertices = std::uint64_t{1} << 32;

std::uint64_t pack(std::uint32_t u, std::uint32_t v) {
  if (u > v) std::swap(u, v);
  return (std::uint64_t{u} << 32) | v;
}

Edge unpack(std::uint64_t e) {
  return {static_cast<std::uint32_t>(e >> 32), static_cast<std::uint32_t>(e)};
}

std::uint64_t max_edges(std::uint64_t n) { return n < 2 ? 0 : n * (n - 1) / 2; }

void check_vertices(std::uint64_t n) {
  if (n >= kMaxVertices) throw InvalidGraph("vertex count must be below 2^32");
}

// Draws candidate edges until `m` distinct ones are collected or the draw
// budget runs out. `draw(i)` returns the i-th candidate (possibly a loop).
template <class Draw>
std::vector<std::uint64_t> collect_distinct(std::uint64_t m, std::uint64_t budget, Draw draw) {
  std::vector<std::uint64_t> edges;
  edges.reserve(m);
  std::uint64_t drawn = 0;
  while (edges.size() < m && drawn < budget) {
    const std::uint64_t want = std::min(budget - drawn, (m - edges.size()) + (m - edges.size()) / 8 + 16);
    for (std::uint64_t i = 0; i < want; ++i) {
      const Edge e = draw(drawn++);
      if (e.first != e.second) edges.push_back(pack(e.first, e.second));
    }
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  }
  if (edges.size() > m) {
    // Keep a seed-determined subset rather than the smallest ids.
    CounterRng rng(budget, 0xed9e);
    std::shuffle(edges.begin(), edges.end(), rng);
    edges.resize(m);
    std::sort(edges.begin(), edges.end());
  }
  return edges;
}

Graph from_packed(std::uint64_t n, const std::vector<std::uint64_t>& packed) {
  std::vector<Edge> edges(packed.size());
  std::transform(packed.begin(), packed.end(), edges.begin(), unpack);
  return Graph::from_edges(n, edges);
}

}  // namespace

std::uint64_t Graph::max_degree() const {
  std::uint64_t best = 0;
  for (std::uint64_t v = 0; v < n; ++v) best = std::max(best, degree(v));
  return best;
}

Graph Graph::from_edges(std::uint64_t n, std::span<const Edge> edges) {
  check_vertices(n);
  std::vector<std::uint64_t> packed;
  packed.reserve(edges.size());
  for (const auto& [u, v] : edges) {
    if (u >= n || v >= n) throw InvalidGraph("edge endpoint out of range");
    if (u != v) packed.push_back(pack(u, v));
  }
  std::sort(packed.begin(), packed.end());
  packed.erase(std::unique(packed.begin(), packed.end()), packed.end());

  Graph g;
  g.n = n;
  g.offsets.assign(n + 1, 0);
  for (auto e : packed) {
    const auto [u, v] = unpack(e);
    ++g.offsets[u + 1];
    ++g.offsets[v + 1];
  }
  std::partial_sum(g.offsets.begin(), g.offsets.end(), g.offsets.begin());
  g.neighbors.resize(2 * packed.size());
  std::vector<std::uint64_t> cursor(g.offsets.begin(), g.offsets.end() - 1);
  for (auto e : packed) {
    const auto [u, v] = unpack(e);
    g.neighbors[cursor[u]++] = v;
    g.neighbors[cursor[v]++] = u;
  }
  for (std::uint64_t v = 0; v < n; ++v) {
    std::sort(g.neighbors.begin() + g.offsets[v], g.neighbors.begin() + g.offsets[v + 1]);
  }
  return g;
}

std::vector<Edge> Graph::edge_list() const {
  std::vector<Edge> out;
  out.reserve(m());
  for (std::uint64_t u = 0; u < n; ++u) {
    for (auto v : adj(u)) {
      if (u < v) out.emplace_back(static_cast<std::uint32_t>(u), v);
    }
  }
  return out;
}

void Graph::validate() const {
  if (offsets.size() != n + 1) throw InvalidGraph("offsets must have n + 1 entries");
  if (offsets[0] != 0) throw InvalidGraph("offsets must start at 0");
  for (std::uint64_t v = 0; v < n; ++v) {
    if (offsets[v + 1] < offsets[v]) throw InvalidGraph("offsets must be non-decreasing");
  }
  if (offsets[n] != neighbors.size() || neighbors.size() % 2 != 0) {
    throw InvalidGraph("offsets[n] must equal 2m");
  }
  std::vector<std::uint64_t> directed;
  directed.reserve(neighbors.size());
  for (std::uint64_t v = 0; v < n; ++v) {
    for (auto u : adj(v)) {
      if (u >= n) throw InvalidGraph("neighbor id out of range");
      if (u == v) throw InvalidGraph("self-loop");
      directed.push_back((v << 32) | u);
    }
  }
  std::sort(directed.begin(), directed.end());
  if (std::adjacent_find(directed.begin(), directed.end()) != directed.end()) {
    throw InvalidGraph("repeated edge");
  }
  for (auto e : directed) {
    const std::uint64_t back = (e << 32) | (e >> 32);
    if (!std::binary_search(directed.begin(), directed.end(), back)) {
      throw InvalidGraph("adjacency is not symmetric");
    }
  }
}

GraphKind parse_graph_kind(std::string_view name) {
  if (name == "gnm") return GraphKind::kGnm;
  if (name == "star") return GraphKind::kStar;
  if (name == "path") return GraphKind::kPath;
  if (name == "power_law" || name == "powerlaw") return GraphKind::kPowerLaw;
  throw std::invalid_argument("unknown graph kind: " + std::string(name));
}

std::string_view graph_kind_name(GraphKind kind) {
  switch (kind) {
    case GraphKind::kGnm: return "gnm";
    case GraphKind::kStar: return "star";
    case GraphKind::kPath: return "path";
    case GraphKind::kPowerLaw: return "power_law";
  }
  return "?";
}

Graph gnm(std::uint64_t n, std::uint64_t m, std::uint64_t seed) {
  check_vertices(n);
  const std::uint64_t cap = max_edges(n);
  if (m > cap) throw InvalidGraph("gnm: m exceeds n(n-1)/2");
  if (m == 0) return from_packed(n, {});
  if (2 * m > cap) {
    if (cap > (std::uint64_t{1} << 28)) throw InvalidGraph("gnm: dense instance too large");
    std::vector<std::uint64_t> all;
    all.reserve(cap);
    for (std::uint32_t u = 0; u < n; ++u) {
      for (std::uint32_t v = u + 1; v < n; ++v) all.push_back(pack(u, v));
    }
    CounterRng rng(seed, 0x6e6d);
    for (std::uint64_t i = 0; i < m; ++i) std::swap(all[i], all[i + bounded(rng(), cap - i)]);
    all.resize(m);
    return from_packed(n, all);
  }
  auto edges = collect_distinct(m, 64 * m + 1024, [&](std::uint64_t i) {
    return Edge{static_cast<std::uint32_t>(bounded(stream_value(seed, 0x6e6d, 2 * i), n)),
                static_cast<std::uint32_t>(bounded(stream_value(seed, 0x6e6d, 2 * i + 1), n))};
  });
  if (edges.size() < m) throw InvalidGraph("gnm: could not draw m distinct edges");
  return from_packed(n, edges);
}

Graph star(std::uint64_t n) {
  check_vertices(n);
  std::vector<Edge> edges;
  for (std::uint64_t v = 1; v < n; ++v) edges.emplace_back(0, static_cast<std::uint32_t>(v));
  return Graph::from_edges(n, edges);
}

Graph path(std::uint64_t n) {
  check_vertices(n);
  std::vector<Edge> edges;
  for (std::uint64_t v = 1; v < n; ++v) {
    edges.emplace_back(static_cast<std::uint32_t>(v - 1), static_cast<std::uint32_t>(v));
  }
  return Graph::from_edges(n, edges);
}

Graph power_law(std::uint64_t n, std::uint64_t m, std::uint64_t seed, double exponent) {
  check_vertices(n);
  if (!(exponent > 2.0)) throw InvalidGraph("power_law: exponent must exceed 2");
  if (m > max_edges(n)) throw InvalidGraph("power_law: m exceeds n(n-1)/2");
  if (m == 0) return from_packed(n, {});
  std::vector<double> cumulative(n);
  double total = 0.0;
  for (std::uint64_t i = 0; i < n; ++i) {
    total += std::pow(static_cast<double>(i + 1), -1.0 / (exponent - 1.0));
    cumulative[i] = total;
  }
  auto pick = [&](std::uint64_t word) {
    const double x = unit_interval(word) * total;
    const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), x);
    return static_cast<std::uint32_t>(std::min<std::uint64_t>(n - 1, it - cumulative.begin()));
  };
  auto edges = collect_distinct(m, 64 * m + 1024, [&](std::uint64_t i) {
    return Edge{pick(stream_value(seed, 0x706c, 2 * i)), pick(stream_value(seed, 0x706c, 2 * i + 1))};
  });
  if (edges.size() < m) throw InvalidGraph("power_law: could not draw m distinct edges");
  return from_packed(n, edges);
}

Graph generate(GraphKind kind, std::uint64_t n, std::uint64_t m, std::uint64_t seed) {
  switch (kind) {
    case GraphKind::kGnm: return gnm(n, m, seed);
    case GraphKind::kStar: return star(n);
    case GraphKind::kPath: return path(n);
    case GraphKind::kPowerLaw: return power_law(n, m, seed);
  }
  throw InvalidGraph("unknown graph kind");
}

Graph read_edge_list(const std::filesystem::path& file, std::uint64_t n) {
  std::ifstream in(file);
  if (!in) throw IoError("cannot open " + file.string());
  std::vector<Edge> edges;
  std::uint64_t top = 0;
  std::string line;
  std::uint64_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream fields(line);
    std::uint64_t u = 0, v = 0;
    if (!(fields >> u >> v) || u >= kMaxVertices || v >= kMaxVertices) {
      throw IoError(file.string() + ":" + std::to_string(lineno) + ": expected \"u v\"");
    }
    top = std::max({top, u + 1, v + 1});
    edges.emplace_back(static_cast<std::uint32_t>(u), static_cast<std::uint32_t>(v));
  }
  if (n == 0) n = top;
  if (n < top) throw InvalidGraph("edge list refers to a vertex beyond n");
  return Graph::from_edges(n, edges);
}

void write_edge_list(const std::filesystem::path& file, const Graph& g) {
  std::ofstream out(file, std::ios::trunc);
  if (!out) throw IoError("cannot open " + file.string() + " for writing");
  for (const auto& [u, v] : g.edge_list()) out << u << ' ' << v << '\n';
  if (!out) throw IoError("write failed for " + file.string());
}

Graph read_csr(const std::filesystem::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw IoError("cannot open " + file.string());
  char magic[4];
  if (!in.read(magic, 4) || std::memcmp(magic, "PCSR", 4) != 0) {
    throw IoError(file.string() + ": not a CSR graph file");
  }
  Graph g;
  g.n = le::get_u64(in);
  const std::uint64_t m = le::get_u64(in);
  const auto size = std::filesystem::file_size(file);
  if (g.n >= kMaxVertices || size != 20 + 8 * (g.n + 1) + 8 * m) {
    throw IoError(file.string() + ": size does not match header");
  }
  g.offsets.resize(g.n + 1);
  for (auto& o : g.offsets) o = le::get_u64(in);
  g.neighbors.resize(2 * m);
  for (auto& u : g.neighbors) u = le::get_u32(in);
  try {
    g.validate();
  } catch (const InvalidGraph& e) {
    throw IoError(file.string() + ": " + e.what());
  }
  return g;
}

void write_csr(const std::filesystem::path& file, const Graph& g) {
  std::ofstream out(file, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + file.string() + " for writing");
  out.write("PCSR", 4);
  le::put_u64(out, g.n);
  le::put_u64(out, g.m());
  for (auto o : g.offsets) le::put_u64(out, o);
  for (auto u : g.neighbors) le::put_u32(out, u);
  if (!out) throw IoError("write failed for " + file.string());
}

}  // namespace hpwe
