#include "hpwe/partition.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "hpwe/parallel.hpp"
#include "hpwe/primitives.hpp"
#include "hpwe/rng.hpp"
#include "hpwe/semisort.hpp"

namespace hpwe {
namespace {

constexpr std::uint64_t kAssignStream = 0xa551;
constexpr std::uint64_t kVertexSortStream = 1;
constexpr std::uint64_t kEdgeSortStream = 2;

double k4(std::uint64_t k) {
  const double kd = static_cast<double>(k);
  return kd * kd * kd * kd;
}

double log_n0(std::uint64_t n0) { return static_cast<double>(std::max(1u, ceil_log2(n0))); }

}  // namespace

CullView::CullView(const Graph& g) : graph(&g), alive(g.n, 1), degree(g.n), edges(g.m()) {
  for (std::uint64_t v = 0; v < g.n; ++v) degree[v] = g.degree(v);
}

std::uint64_t CullView::max_degree() const {
  return degree.empty() ? 0 : simd::max_u64(degree);
}

void CullView::remove(std::span<const std::uint32_t> removed, WorkMeter* meter) {
  for (auto v : removed) alive[v] = 0;
  charge(meter, removed.size());
  const Graph& g = *graph;
  std::uint64_t touched = 0;
  parallel_blocks(0, g.n, [&](std::size_t lo, std::size_t hi) {
    std::uint64_t local = 0;
    for (std::size_t v = lo; v < hi; ++v) {
      if (!alive[v]) {
        degree[v] = 0;
        continue;
      }
      std::uint64_t d = 0;
      for (auto u : g.adj(v)) d += alive[u];
      degree[v] = d;
      local += g.degree(v);
    }
    std::atomic_ref<std::uint64_t>(touched).fetch_add(local, std::memory_order_relaxed);
  });
  charge(meter, g.n + touched);
  add_rounds(meter, ceil_log2(std::max<std::uint64_t>(g.n, 2)) + 1);
  edges = reduce(std::span<const std::uint64_t>(degree), std::plus<>{}, std::uint64_t{0}, meter) / 2;
}

double cull_threshold(std::uint64_t edges, std::uint64_t k, std::uint64_t n0) {
  return static_cast<double>(edges) / (k4(k) * log_n0(n0));
}

std::vector<std::uint32_t> phase_cull(const CullView& h, std::uint64_t k, std::uint64_t n0,
                                      WorkMeter* meter) {
  if (h.edges == 0) throw std::invalid_argument("phase_cull needs at least one edge");
  const double half = cull_threshold(h.edges, k, n0) / 2.0;
  return pack_indices(h.degree.size(), [&](std::size_t v) {
    return h.alive[v] && static_cast<double>(h.degree[v]) > half;
  }, meter);
}

std::vector<std::uint64_t> CulledPartition::piece_edges(const Graph& g) const {
  std::vector<std::uint64_t> count(k, 0);
  for (std::uint64_t v = 0; v < g.n; ++v) {
    if (piece[v] == kCulledPiece) continue;
    for (auto u : g.adj(v)) {
      if (u > v && piece[u] == piece[v]) ++count[piece[v]];
    }
  }
  return count;
}

double CulledPartition::culled_bound(std::uint64_t n) const {
  return static_cast<double>(phases) * 4.0 * k4(k) * log_n0(n);
}

CulledPartition cull_partition(const Graph& g, std::uint64_t k, std::uint64_t seed,
                               WorkMeter* meter) {
  if (k < 1) throw std::invalid_argument("k must be >= 1");
  if (k >= kCulledPiece) throw std::invalid_argument("k must fit in 32 bits");
  WorkMeter::Scope scope(meter, "cull");
  CulledPartition p;
  p.k = k;
  CullView h(g);
  charge(meter, g.n);
  const std::uint64_t phase_limit = ceil_log2(std::max<std::uint64_t>(g.m(), 1)) + 1;

  for (;;) {
    if (h.edges == 0) break;
    const double tau = cull_threshold(h.edges, k, g.n);
    const std::uint64_t delta = h.max_degree();
    charge(meter, g.n);
    if (static_cast<double>(delta) <= tau) break;

    CullPhase log;
    log.entry_edges = h.edges;
    log.entry_max_degree = delta;
    log.tau = tau;
    const auto removed = phase_cull(h, k, g.n, meter);
    log.removed = removed.size();
    h.remove(removed, meter);
    log.exit_edges = h.edges;
    log.exit_max_degree = h.max_degree();
    ++p.phases;
    p.phase_log.push_back(log);

    const bool degree_ok = h.edges == 0 ||
                           static_cast<double>(log.exit_max_degree) <= cull_threshold(h.edges, k, g.n);
    const bool halved = 2 * h.edges <= log.entry_edges;
    require(degree_ok || halved, "culling phase " + std::to_string(p.phases) +
                                     " neither met the degree condition nor halved the edges");
    require(p.phases <= phase_limit, "culling exceeded ceil(log2 m) + 1 phases");
  }
  p.remaining_edges = h.edges;

  p.piece.assign(g.n, kCulledPiece);
  parallel_for(0, g.n, [&](std::size_t v) {
    if (h.alive[v]) p.piece[v] = static_cast<std::uint32_t>(bounded(stream_value(seed, kAssignStream, v), k));
  });
  charge(meter, g.n);
  add_rounds(meter, 1);
  p.culled = pack_indices(g.n, [&](std::size_t v) { return !h.alive[v]; }, meter);

  require(static_cast<double>(p.culled.size()) <= p.culled_bound(g.n),
          "culled set exceeds phases * 4k^4 log n");
  if (h.edges > 0) {
    require(static_cast<double>(h.max_degree()) <= cull_threshold(h.edges, k, g.n),
            "post-cull max degree above e(G') / (k^4 log n)");
  }
  return p;
}

std::uint64_t ReorganizedGraph::piece_of_position(std::uint64_t pos) const {
  const auto it = std::upper_bound(piece_begin.begin(), piece_begin.end(), pos);
  return static_cast<std::uint64_t>(it - piece_begin.begin()) - 1;
}

ReorganizedGraph reorganize(const Graph& g, const CulledPartition& p, std::uint64_t seed,
                            WorkMeter* meter) {
  if (p.k < 1) throw InconsistentPartition("partition has k = 0");
  if (p.piece.size() != g.n) throw InconsistentPartition("partition covers a different vertex count");
  std::uint64_t culled = 0;
  for (auto x : p.piece) {
    if (x == kCulledPiece) {
      ++culled;
    } else if (x >= p.k) {
      throw InconsistentPartition("piece id outside [k]");
    }
  }
  if (culled != p.culled.size()) throw InconsistentPartition("culled list disagrees with piece ids");
  for (auto v : p.culled) {
    if (v >= g.n || p.piece[v] != kCulledPiece) {
      throw InconsistentPartition("culled list disagrees with piece ids");
    }
  }
  charge(meter, g.n + culled);

  WorkMeter::Scope scope(meter, "reorganize");
  const std::uint64_t k = p.k;
  auto group = [&](std::uint64_t v) -> std::uint64_t {
    return p.piece[v] == kCulledPiece ? k : p.piece[v];
  };

  ReorganizedGraph r;
  r.k = k;
  std::vector<Record> vertices(g.n);
  parallel_for(0, g.n, [&](std::size_t v) { vertices[v] = Record{group(v), v}; });
  charge(meter, g.n);
  const auto by_piece = integer_sort(vertices, std::max<std::uint64_t>(g.n, k + 1),
                                     derive_seed(seed, kVertexSortStream), meter);
  r.vertex_at.resize(g.n);
  r.position_of.resize(g.n);
  r.piece_begin.assign(k + 2, g.n);
  parallel_for(0, g.n, [&](std::size_t pos) {
    const auto v = static_cast<std::uint32_t>(by_piece[pos].payload);
    r.vertex_at[pos] = v;
    r.position_of[v] = static_cast<std::uint32_t>(pos);
  });
  for (std::uint64_t pos = g.n; pos-- > 0;) r.piece_begin[by_piece[pos].key] = pos;
  for (std::uint64_t i = k + 1; i-- > 0;) r.piece_begin[i] = std::min(r.piece_begin[i], r.piece_begin[i + 1]);
  charge(meter, 2 * g.n + k);

  std::vector<std::uint64_t> degree(g.n);
  parallel_for(0, g.n, [&](std::size_t pos) { degree[pos] = g.degree(r.vertex_at[pos]); });
  auto offs = scan(std::span<const std::uint64_t>(degree), std::plus<>{}, std::uint64_t{0}, meter);
  r.offsets = std::move(offs.prefix);
  r.offsets.push_back(offs.total);

  // Key of edge (v, u): v's new offset plus the neighbor's piece rank
  // (0 internal, 1 + piece otherwise), clamped into v's own slot range so all
  // keys stay below 2m. The clamp never merges internal with cut neighbors.
  const std::uint64_t slots = offs.total;
  std::vector<Record> edges(slots);
  r.internal_degree.assign(g.n, 0);
  parallel_for(0, g.n, [&](std::size_t pos) {
    const std::uint64_t v = r.vertex_at[pos];
    const std::uint64_t gv = group(v);
    const std::uint64_t deg = g.degree(v);
    std::uint64_t out = r.offsets[pos];
    std::uint64_t internal = 0;
    for (auto u : g.adj(v)) {
      const std::uint64_t gu = group(u);
      const std::uint64_t rank = gu == gv ? 0 : 1 + gu;
      internal += gu == gv ? 1 : 0;
      edges[out++] = Record{r.offsets[pos] + std::min(rank, deg - 1), r.position_of[u]};
    }
    r.internal_degree[pos] = internal;
  }, 256);
  charge(meter, slots + g.n);
  const auto sorted = integer_sort(edges, std::max<std::uint64_t>(slots, 1),
                                   derive_seed(seed, kEdgeSortStream), meter);
  r.neighbors.resize(slots);
  parallel_for(0, slots, [&](std::size_t i) { r.neighbors[i] = static_cast<std::uint32_t>(sorted[i].payload); });
  charge(meter, slots);
  return r;
}

bool audit_reorganized(const Graph& g, const CulledPartition& p, const ReorganizedGraph& r) {
  const std::uint64_t n = g.n;
  if (r.n() != n || r.position_of.size() != n || r.offsets.size() != n + 1) return false;
  if (r.neighbors.size() != g.neighbors.size() || r.piece_begin.size() != p.k + 2) return false;
  auto group = [&](std::uint64_t v) -> std::uint64_t {
    return p.piece[v] == kCulledPiece ? p.k : p.piece[v];
  };
  for (std::uint64_t pos = 0; pos < n; ++pos) {
    const std::uint64_t v = r.vertex_at[pos];
    if (v >= n || r.position_of[v] != pos) return false;
    if (r.piece_of_position(pos) != group(v)) return false;
    if (r.offsets[pos + 1] - r.offsets[pos] != g.degree(v)) return false;
    if (r.internal_degree[pos] > g.degree(v)) return false;
    std::vector<std::uint32_t> mapped;
    for (std::uint64_t j = r.offsets[pos]; j < r.offsets[pos + 1]; ++j) {
      const std::uint64_t u = r.neighbors[j];
      if (u >= n) return false;
      const bool internal = j < r.offsets[pos] + r.internal_degree[pos];
      if (internal != (group(r.vertex_at[u]) == group(v))) return false;
      mapped.push_back(r.vertex_at[u]);
    }
    std::sort(mapped.begin(), mapped.end());
    std::vector<std::uint32_t> expect(g.adj(v).begin(), g.adj(v).end());
    std::sort(expect.begin(), expect.end());
    if (mapped != expect) return false;
  }
  return true;
}

}  // namespace hpwe
