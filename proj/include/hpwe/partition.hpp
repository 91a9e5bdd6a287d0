#pragma once

// Culled balanced partition and partition-aware reorganization.
//
// Culling repeatedly removes every vertex whose degree exceeds half the
// threshold tau(H) = e(H) / (k^4 * ceil(log2 n0)) until max degree <= tau or
// no edges remain. Survivors are then spread uniformly over k pieces.

#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <vector>

#include "hpwe/assertions.hpp"
#include "hpwe/graph.hpp"
#include "hpwe/work_meter.hpp"

namespace hpwe {

inline constexpr std::uint32_t kCulledPiece = std::numeric_limits<std::uint32_t>::max();

class InconsistentPartition : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// The graph induced by the vertices still alive. Degrees count alive
// neighbors only.
struct CullView {
  const Graph* graph = nullptr;
  std::vector<std::uint8_t> alive;
  std::vector<std::uint64_t> degree;
  std::uint64_t edges = 0;

  explicit CullView(const Graph& g);
  std::uint64_t max_degree() const;
  // Drops `removed` and recomputes degrees with one pass over the surviving
  // adjacency.
  void remove(std::span<const std::uint32_t> removed, WorkMeter* meter = nullptr);
};

double cull_threshold(std::uint64_t edges, std::uint64_t k, std::uint64_t n0);

// Vertices with degree > tau / 2, all judged against the entry degrees.
// Throws std::invalid_argument on an edgeless view.
std::vector<std::uint32_t> phase_cull(const CullView& h, std::uint64_t k, std::uint64_t n0,
                                      WorkMeter* meter = nullptr);

struct CullPhase {
  std::uint64_t entry_edges = 0;
  std::uint64_t exit_edges = 0;
  std::uint64_t entry_max_degree = 0;
  std::uint64_t exit_max_degree = 0;
  double tau = 0.0;
  std::uint64_t removed = 0;
};

struct CulledPartition {
  std::uint64_t k = 1;
  std::vector<std::uint32_t> piece;   // per vertex, kCulledPiece if culled
  std::vector<std::uint32_t> culled;  // ascending
  std::uint64_t phases = 0;
  std::vector<CullPhase> phase_log;
  std::uint64_t remaining_edges = 0;  // e(G') after culling

  // Edges with both endpoints in piece i, for i in [k].
  std::vector<std::uint64_t> piece_edges(const Graph& g) const;
  // phases * 4 k^4 ceil(log2 n), the bound on |culled|.
  double culled_bound(std::uint64_t n) const;
};

// Throws AssertionFailure if a phase neither meets the degree condition nor
// halves the edge count, if the phase count exceeds ceil(log2 m) + 1, or if
// |culled| exceeds culled_bound.
CulledPartition cull_partition(const Graph& g, std::uint64_t k, std::uint64_t seed,
                               WorkMeter* meter = nullptr);

// Vertices regrouped so each piece is contiguous (culled vertices last), and
// every adjacency list starts with its internal neighbors. Neighbor ids are
// new positions.
struct ReorganizedGraph {
  std::uint64_t k = 1;
  std::vector<std::uint32_t> vertex_at;       // position -> original id
  std::vector<std::uint32_t> position_of;     // original id -> position
  std::vector<std::uint64_t> piece_begin;     // k + 2 entries; piece k is the culled set
  std::vector<std::uint64_t> offsets;         // by position
  std::vector<std::uint32_t> neighbors;       // positions
  std::vector<std::uint64_t> internal_degree; // by position

  std::uint64_t n() const { return vertex_at.size(); }
  std::uint64_t pieces() const { return k + 1; }
  std::uint64_t piece_of_position(std::uint64_t pos) const;
};

// Throws InconsistentPartition if `p` does not describe `g`.
ReorganizedGraph reorganize(const Graph& g, const CulledPartition& p, std::uint64_t seed,
                            WorkMeter* meter = nullptr);

// Full audit: positions form a permutation grouped by piece, every split is
// exact, and the edge set maps back onto g.
bool audit_reorganized(const Graph& g, const CulledPartition& p, const ReorganizedGraph& r);

}  // namespace hpwe
