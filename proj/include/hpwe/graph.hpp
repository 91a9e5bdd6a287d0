#pragma once

// Undirected simple graphs in compressed adjacency form: offsets (n + 1
// entries) and neighbors (2m entries, each edge stored in both directions).

#include <cstdint>
#include <filesystem>
#include <span>
#include <stdexcept>
#include <string_view>
#include <utility>
#include <vector>

namespace hpwe {

class InvalidGraph : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

using Edge = std::pair<std::uint32_t, std::uint32_t>;

struct Graph {
  std::uint64_t n = 0;
  std::vector<std::uint64_t> offsets{0};
  std::vector<std::uint32_t> neighbors;

  std::uint64_t m() const { return neighbors.size() / 2; }
  std::uint64_t degree(std::uint64_t v) const { return offsets[v + 1] - offsets[v]; }
  std::span<const std::uint32_t> adj(std::uint64_t v) const {
    return std::span<const std::uint32_t>(neighbors).subspan(offsets[v], degree(v));
  }
  std::uint64_t max_degree() const;

  // Builds the graph on [n] from an edge list; self-loops and repeated edges
  // are dropped. Throws InvalidGraph on an endpoint >= n.
  static Graph from_edges(std::uint64_t n, std::span<const Edge> edges);

  // Each undirected edge once, as (u, v) with u < v.
  std::vector<Edge> edge_list() const;

  // Throws InvalidGraph on any violated invariant (monotone offsets,
  // offsets[n] = 2m, ids < n, no self-loops, no repeats, symmetry).
  void validate() const;
};

enum class GraphKind { kGnm, kStar, kPath, kPowerLaw };

GraphKind parse_graph_kind(std::string_view name);
std::string_view graph_kind_name(GraphKind kind);

// Deterministic in the seed. Throws InvalidGraph on infeasible parameters.
Graph gnm(std::uint64_t n, std::uint64_t m, std::uint64_t seed);
Graph star(std::uint64_t n);
Graph path(std::uint64_t n);
// Chung-Lu style: endpoints drawn with probability proportional to
// (i + 1)^(-1 / (exponent - 1)); exactly m distinct edges.
Graph power_law(std::uint64_t n, std::uint64_t m, std::uint64_t seed, double exponent = 2.5);
// m is ignored for star and path.
Graph generate(GraphKind kind, std::uint64_t n, std::uint64_t m, std::uint64_t seed);

// Text edge lists: one "u v" pair per line, 0-indexed; blank lines and lines
// starting with '#' are skipped. n is one past the largest id unless given.
Graph read_edge_list(const std::filesystem::path& path, std::uint64_t n = 0);
void write_edge_list(const std::filesystem::path& path, const Graph& g);

// Binary: "PCSR", n u64, m u64, offsets (n + 1) x u64, neighbors 2m x u32.
Graph read_csr(const std::filesystem::path& path);
void write_csr(const std::filesystem::path& path, const Graph& g);

}  // namespace hpwe
