#pragma once

// Luby MIS, palette-sampling coloring, the deterministic extenders across a
// cut, and the boosted MIS / (Delta+1)-coloring over a culled partition.

#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "hpwe/graph.hpp"
#include "hpwe/palette.hpp"
#include "hpwe/partition.hpp"
#include "hpwe/work_meter.hpp"

namespace hpwe {

// Vertices [begin, end) of a compressed adjacency; local index = id - begin.
// With internal_degree set, only the first internal_degree[id] neighbors of
// each vertex belong to the view and all of them lie in [begin, end);
// otherwise the view is a whole graph.
struct GraphView {
  std::uint64_t begin = 0;
  std::uint64_t end = 0;
  std::span<const std::uint64_t> offsets;
  std::span<const std::uint32_t> neighbors;
  std::span<const std::uint64_t> internal_degree;

  static GraphView whole(const Graph& g);
  static GraphView piece(const ReorganizedGraph& r, std::uint64_t i);

  std::uint64_t size() const { return end - begin; }
  std::uint64_t degree(std::uint64_t local) const {
    const std::uint64_t id = begin + local;
    return internal_degree.empty() ? offsets[id + 1] - offsets[id] : internal_degree[id];
  }
  // Neighbor ids (not local indices).
  std::span<const std::uint32_t> adj(std::uint64_t local) const {
    return neighbors.subspan(offsets[begin + local], degree(local));
  }
};

struct MisResult {
  std::vector<std::uint8_t> in_set;
  std::uint64_t rounds = 0;
};

struct ColoringResult {
  std::vector<std::uint32_t> color;  // kUncolored never survives a finished run
  std::uint64_t rounds = 0;
};

// Excluded vertices (exclude[v] != 0) are treated as absent.
MisResult luby_mis(const GraphView& h, std::uint64_t seed, WorkMeter* meter = nullptr,
                   std::span<const std::uint8_t> exclude = {});

// Throws PaletteDeficit if some vertex has fewer allowed colors than its
// uncolored degree plus one. `palettes` is consumed as the residual state.
ColoringResult palette_color(const GraphView& h, PaletteSet& palettes, std::uint64_t seed,
                             WorkMeter* meter = nullptr);

class UncoloredCutEndpoint : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Edge between an already-processed vertex (index into phi / m0) and a local
// vertex of the next piece.
struct CutEdge {
  std::uint32_t done = 0;
  std::uint32_t local = 0;
};

// Palettes [delta + 1] minus the colors of each vertex's cut neighbors.
// Charges 2 |cut| to phase "extend" (count pass, insert pass) and the
// h1_size table setup to "extend_init".
PaletteSet extend_palettes(std::span<const std::uint32_t> phi, std::span<const CutEdge> cut,
                           std::uint64_t h1_size, std::uint64_t delta,
                           std::span<const std::uint64_t> internal_degree,
                           WorkMeter* meter = nullptr);

// keep[v] = 0 iff local vertex v has a cut neighbor in m0.
std::vector<std::uint8_t> mis_extend_prune(std::span<const std::uint8_t> m0,
                                           std::span<const CutEdge> cut, std::uint64_t h1_size,
                                           WorkMeter* meter = nullptr);

struct BoostedStats {
  std::uint64_t work = 0;
  std::uint64_t rounds = 0;
  std::uint64_t cut_edges = 0;      // sum over pieces
  std::uint64_t culled = 0;
  std::uint64_t cull_phases = 0;
  std::uint64_t max_piece_rounds = 0;
  std::uint64_t max_piece_edges = 0;  // excluding the culled set
  std::uint64_t culled_edges = 0;     // edges inside the culled set
  WorkMeter::Breakdown phase_work;
};

struct BoostedColoring {
  std::vector<std::uint32_t> color;
  std::uint64_t delta = 0;
  BoostedStats stats;
};

struct BoostedMis {
  std::vector<std::uint8_t> in_set;
  BoostedStats stats;
};

BoostedColoring boosted_coloring(const Graph& g, std::uint64_t k, std::uint64_t seed,
                                 WorkMeter* meter = nullptr);
BoostedMis boosted_mis(const Graph& g, std::uint64_t k, std::uint64_t seed,
                       WorkMeter* meter = nullptr);

bool verify_mis(const Graph& g, std::span<const std::uint8_t> in_set);
bool verify_coloring(const Graph& g, std::span<const std::uint32_t> color, std::uint64_t delta);

}  // namespace hpwe
