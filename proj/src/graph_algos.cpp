#include "hpwe/graph_algos.hpp"

#include <algorithm>
#include <atomic>
#include <string>

#include "hpwe/assertions.hpp"
#include "hpwe/parallel.hpp"
#include "hpwe/primitives.hpp"
#include "hpwe/rng.hpp"

namespace hpwe {
namespace {

constexpr std::uint64_t kRoundLimit = 100000;
constexpr std::uint64_t kPieceStream = 0x9ece;

// Sums per-vertex work over a vertex list in parallel.
template <class Fn>
std::uint64_t for_each_counted(std::span<const std::uint32_t> items, Fn fn) {
  std::uint64_t total = 0;
  parallel_blocks(0, items.size(), [&](std::size_t lo, std::size_t hi) {
    std::uint64_t local = 0;
    for (std::size_t i = lo; i < hi; ++i) local += fn(items[i]);
    std::atomic_ref<std::uint64_t>(total).fetch_add(local, std::memory_order_relaxed);
  }, 256);
  return total;
}

std::vector<std::uint32_t> all_vertices(std::uint64_t n) {
  std::vector<std::uint32_t> v(n);
  for (std::uint64_t i = 0; i < n; ++i) v[i] = static_cast<std::uint32_t>(i);
  return v;
}

WorkMeter::Breakdown diff(const WorkMeter::Breakdown& after, const WorkMeter::Breakdown& before) {
  WorkMeter::Breakdown d;
  for (const auto& [k, v] : after) {
    auto it = before.find(k);
    const std::uint64_t prev = it == before.end() ? 0 : it->second;
    if (v > prev) d[k] = v - prev;
  }
  return d;
}

// Edges from pieces before `i` into piece i, with per-piece bookkeeping.
std::vector<CutEdge> incoming_cut(const ReorganizedGraph& r, std::uint64_t i, WorkMeter* meter) {
  const std::uint64_t b = r.piece_begin[i];
  const std::uint64_t e = r.piece_begin[i + 1];
  std::vector<CutEdge> cut;
  std::uint64_t scanned = 0;
  for (std::uint64_t pos = b; pos < e; ++pos) {
    for (std::uint64_t j = r.offsets[pos] + r.internal_degree[pos]; j < r.offsets[pos + 1]; ++j) {
      ++scanned;
      if (r.neighbors[j] < b) cut.push_back({r.neighbors[j], static_cast<std::uint32_t>(pos - b)});
    }
  }
  charge(meter, scanned + (e - b));
  add_rounds(meter, ceil_log2(std::max<std::uint64_t>(scanned, 2)) + 1);
  return cut;
}

struct Pipeline {
  CulledPartition partition;
  ReorganizedGraph layout;
};

Pipeline prepare(const Graph& g, std::uint64_t k, std::uint64_t seed, WorkMeter* meter) {
  Pipeline p;
  p.partition = cull_partition(g, k, derive_seed(seed, 1), meter);
  p.layout = reorganize(g, p.partition, derive_seed(seed, 2), meter);
  return p;
}

void fill_partition_stats(const Graph& g, const Pipeline& p, BoostedStats& s) {
  s.culled = p.partition.culled.size();
  s.cull_phases = p.partition.phases;
  const auto edges = p.partition.piece_edges(g);
  s.max_piece_edges = edges.empty() ? 0 : *std::max_element(edges.begin(), edges.end());
  const auto& r = p.layout;
  std::uint64_t inside = 0;
  for (std::uint64_t pos = r.piece_begin[r.k]; pos < r.n(); ++pos) inside += r.internal_degree[pos];
  s.culled_edges = inside / 2;
}

}  // namespace

GraphView GraphView::whole(const Graph& g) {
  return GraphView{0, g.n, g.offsets, g.neighbors, {}};
}

GraphView GraphView::piece(const ReorganizedGraph& r, std::uint64_t i) {
  return GraphView{r.piece_begin[i], r.piece_begin[i + 1], r.offsets, r.neighbors, r.internal_degree};
}

MisResult luby_mis(const GraphView& h, std::uint64_t seed, WorkMeter* meter,
                   std::span<const std::uint8_t> exclude) {
  const std::uint64_t n = h.size();
  MisResult res;
  res.in_set.assign(n, 0);
  std::vector<std::uint8_t> live(n, 1), joined(n, 0), dropped(n, 0);
  std::vector<std::uint64_t> value(n, 0);
  if (!exclude.empty()) {
    for (std::uint64_t v = 0; v < n; ++v) live[v] = exclude[v] ? 0 : 1;
  }
  charge(meter, n);
  auto active = pack_indices(n, [&](std::size_t v) { return live[v] != 0; }, meter);

  for (std::uint64_t round = 0; !active.empty(); ++round) {
    require(round < kRoundLimit, "luby_mis exceeded its round limit");
    for (auto v : active) value[v] = stream_value(seed, h.begin + v, round);
    charge(meter, active.size());
    // v joins when (value, -id) beats every live neighbor.
    std::uint64_t work = for_each_counted(active, [&](std::uint32_t v) {
      bool best = true;
      for (auto w : h.adj(v)) {
        const std::uint64_t u = w - h.begin;
        if (!live[u]) continue;
        if (value[u] > value[v] || (value[u] == value[v] && u < v)) {
          best = false;
          break;
        }
      }
      joined[v] = best ? 1 : 0;
      return h.degree(v);
    });
    work += for_each_counted(active, [&](std::uint32_t v) {
      if (joined[v]) {
        res.in_set[v] = 1;
        dropped[v] = 1;
        return std::uint64_t{1};
      }
      for (auto w : h.adj(v)) {
        if (joined[w - h.begin]) {
          dropped[v] = 1;
          break;
        }
      }
      return h.degree(v);
    });
    for (auto v : active) {
      if (dropped[v]) live[v] = 0;
      joined[v] = 0;
      dropped[v] = 0;
    }
    charge(meter, work + active.size());
    add_rounds(meter, 2);
    active = filter(std::span<const std::uint32_t>(active), [&](std::uint32_t v) { return live[v] != 0; }, meter);
    ++res.rounds;
  }
  return res;
}

ColoringResult palette_color(const GraphView& h, PaletteSet& palettes, std::uint64_t seed,
                             WorkMeter* meter) {
  const std::uint64_t n = h.size();
  if (palettes.vertices() != n) throw std::invalid_argument("palette count differs from view size");
  ColoringResult res;
  res.color.assign(n, kUncolored);
  for (std::uint64_t v = 0; v < n; ++v) {
    if (palettes.size(v) < h.degree(v) + 1) {
      throw PaletteDeficit("vertex " + std::to_string(h.begin + v) + " starts with a palette below degree + 1");
    }
  }
  charge(meter, n);

  std::vector<std::uint32_t> proposal(n, kUncolored);
  std::vector<std::uint8_t> kept(n, 0);
  auto active = all_vertices(n);

  for (std::uint64_t round = 0; !active.empty(); ++round) {
    require(round < kRoundLimit, "palette_color exceeded its round limit");
    const std::uint64_t round_seed = seed ^ mix64(round + 1);
    std::uint64_t work = for_each_counted(active, [&](std::uint32_t v) {
      std::uint64_t draw = 0, cost = 0;
      auto words = [&] { return stream_value(round_seed, h.begin + v, draw++); };
      proposal[v] = palettes.sample(v, words, cost);
      return cost;
    });
    // Symmetric discard: both endpoints of a clash drop their proposal.
    work += for_each_counted(active, [&](std::uint32_t v) {
      bool clash = false;
      for (auto w : h.adj(v)) {
        const std::uint64_t u = w - h.begin;
        if (res.color[u] == kUncolored && proposal[u] == proposal[v]) {
          clash = true;
          break;
        }
      }
      kept[v] = clash ? 0 : 1;
      return h.degree(v);
    });
    for (auto v : active) {
      if (kept[v]) res.color[v] = proposal[v];
    }
    charge(meter, active.size());
    // Survivors pull the colors just fixed by their neighbors.
    work += for_each_counted(active, [&](std::uint32_t v) {
      if (kept[v]) return std::uint64_t{1};
      std::uint64_t uncolored = 0;
      for (auto w : h.adj(v)) {
        const std::uint64_t u = w - h.begin;
        if (kept[u]) {
          palettes.forbid(v, res.color[u]);
        } else if (res.color[u] == kUncolored) {
          ++uncolored;
        }
      }
      if (palettes.size(v) < uncolored + 1) {
        throw PaletteDeficit("residual palette fell below uncolored degree + 1");
      }
      return h.degree(v);
    });
    charge(meter, work);
    add_rounds(meter, 3);
    for (auto v : active) proposal[v] = kUncolored;
    auto next = filter(std::span<const std::uint32_t>(active), [&](std::uint32_t v) { return !kept[v]; }, meter);
    for (auto v : active) kept[v] = 0;
    active.swap(next);
    ++res.rounds;
  }
  return res;
}

PaletteSet extend_palettes(std::span<const std::uint32_t> phi, std::span<const CutEdge> cut,
                           std::uint64_t h1_size, std::uint64_t delta,
                           std::span<const std::uint64_t> internal_degree, WorkMeter* meter) {
  if (delta + 1 >= kUncolored) throw std::invalid_argument("delta too large");
  if (!internal_degree.empty() && internal_degree.size() != h1_size) {
    throw std::invalid_argument("internal degree array differs from piece size");
  }
  const auto universe = static_cast<std::uint32_t>(delta + 1);
  std::vector<std::uint64_t> hint(h1_size, 0);
  charge(meter, "extend_init", h1_size);
  for (const auto& e : cut) {
    if (e.local >= h1_size) throw std::invalid_argument("cut edge endpoint outside the piece");
    if (e.done >= phi.size() || phi[e.done] == kUncolored) {
      throw UncoloredCutEndpoint("cut edge from an uncolored vertex");
    }
    if (phi[e.done] >= universe) throw std::invalid_argument("color outside [delta + 1]");
    ++hint[e.local];
  }
  charge(meter, "extend", cut.size());
  if (!internal_degree.empty()) {
    for (std::uint64_t v = 0; v < h1_size; ++v) hint[v] += internal_degree[v];
  }
  PaletteSet palettes(universe, hint);
  for (const auto& e : cut) palettes.forbid(e.local, phi[e.done]);
  charge(meter, "extend", cut.size());
  add_rounds(meter, 2);
  if (!internal_degree.empty()) {
    for (std::uint64_t v = 0; v < h1_size; ++v) {
      if (palettes.size(v) < internal_degree[v] + 1) {
        throw PaletteDeficit("extended palette below internal degree + 1");
      }
    }
  }
  return palettes;
}

std::vector<std::uint8_t> mis_extend_prune(std::span<const std::uint8_t> m0,
                                           std::span<const CutEdge> cut, std::uint64_t h1_size,
                                           WorkMeter* meter) {
  std::vector<std::uint8_t> keep(h1_size, 1);
  for (const auto& e : cut) {
    if (e.local >= h1_size || e.done >= m0.size()) throw std::invalid_argument("cut edge out of range");
    if (m0[e.done]) keep[e.local] = 0;
  }
  charge(meter, h1_size + cut.size());
  add_rounds(meter, 1);
  return keep;
}

BoostedColoring boosted_coloring(const Graph& g, std::uint64_t k, std::uint64_t seed, WorkMeter* meter) {
  WorkMeter local;
  WorkMeter* m = meter != nullptr ? meter : &local;
  const std::uint64_t work0 = m->total_ops(), rounds0 = m->rounds();
  const auto phases0 = m->phase_breakdown();

  BoostedColoring out;
  out.delta = g.max_degree();
  charge(m, g.n);
  const Pipeline p = prepare(g, k, seed, m);
  const auto& r = p.layout;
  std::vector<std::uint32_t> phi(r.n(), kUncolored);

  for (std::uint64_t i = 0; i < r.pieces(); ++i) {
    const GraphView view = GraphView::piece(r, i);
    if (view.size() == 0) continue;
    std::vector<CutEdge> cut;
    {
      WorkMeter::Scope scope(m, "cut_scan");
      cut = incoming_cut(r, i, m);
    }
    out.stats.cut_edges += cut.size();
    WorkMeter::Scope scope(m, "color");
    PaletteSet palettes = extend_palettes(
        phi, cut, view.size(), out.delta,
        std::span<const std::uint64_t>(r.internal_degree).subspan(view.begin, view.size()), m);
    const auto colored = palette_color(view, palettes, stream_value(seed, kPieceStream, i), m);
    std::copy(colored.color.begin(), colored.color.end(), phi.begin() + view.begin);
    charge(m, view.size());
    out.stats.max_piece_rounds = std::max(out.stats.max_piece_rounds, colored.rounds);
  }
  require(out.stats.cut_edges <= g.m(), "cut edges summed over pieces exceed m");

  out.color.assign(g.n, kUncolored);
  for (std::uint64_t pos = 0; pos < r.n(); ++pos) out.color[r.vertex_at[pos]] = phi[pos];
  charge(m, g.n);
  fill_partition_stats(g, p, out.stats);
  out.stats.work = m->total_ops() - work0;
  out.stats.rounds = m->rounds() - rounds0;
  out.stats.phase_work = diff(m->phase_breakdown(), phases0);
  return out;
}

BoostedMis boosted_mis(const Graph& g, std::uint64_t k, std::uint64_t seed, WorkMeter* meter) {
  WorkMeter local;
  WorkMeter* m = meter != nullptr ? meter : &local;
  const std::uint64_t work0 = m->total_ops(), rounds0 = m->rounds();
  const auto phases0 = m->phase_breakdown();

  BoostedMis out;
  const Pipeline p = prepare(g, k, seed, m);
  const auto& r = p.layout;
  std::vector<std::uint8_t> member(r.n(), 0);

  for (std::uint64_t i = 0; i < r.pieces(); ++i) {
    const GraphView view = GraphView::piece(r, i);
    if (view.size() == 0) continue;
    std::vector<CutEdge> cut;
    {
      WorkMeter::Scope scope(m, "cut_scan");
      cut = incoming_cut(r, i, m);
    }
    out.stats.cut_edges += cut.size();
    WorkMeter::Scope scope(m, "mis");
    const auto keep = mis_extend_prune(member, cut, view.size(), m);
    std::vector<std::uint8_t> exclude(view.size());
    for (std::uint64_t v = 0; v < view.size(); ++v) exclude[v] = keep[v] ? 0 : 1;
    const auto mis = luby_mis(view, stream_value(seed, kPieceStream, i), m, exclude);
    std::copy(mis.in_set.begin(), mis.in_set.end(), member.begin() + view.begin);
    charge(m, 2 * view.size());
    out.stats.max_piece_rounds = std::max(out.stats.max_piece_rounds, mis.rounds);
  }
  require(out.stats.cut_edges <= g.m(), "cut edges summed over pieces exceed m");

  out.in_set.assign(g.n, 0);
  for (std::uint64_t pos = 0; pos < r.n(); ++pos) out.in_set[r.vertex_at[pos]] = member[pos];
  charge(m, g.n);
  fill_partition_stats(g, p, out.stats);
  out.stats.work = m->total_ops() - work0;
  out.stats.rounds = m->rounds() - rounds0;
  out.stats.phase_work = diff(m->phase_breakdown(), phases0);
  return out;
}

bool verify_mis(const Graph& g, std::span<const std::uint8_t> in_set) {
  if (in_set.size() != g.n) return false;
  for (std::uint64_t v = 0; v < g.n; ++v) {
    bool covered = in_set[v] != 0;
    for (auto u : g.adj(v)) {
      if (in_set[v] && in_set[u]) return false;
      covered = covered || in_set[u] != 0;
    }
    if (!covered) return false;
  }
  return true;
}

bool verify_coloring(const Graph& g, std::span<const std::uint32_t> color, std::uint64_t delta) {
  if (color.size() != g.n) return false;
  for (std::uint64_t v = 0; v < g.n; ++v) {
    if (color[v] == kUncolored || color[v] > delta) return false;
    for (auto u : g.adj(v)) {
      if (color[u] == color[v]) return false;
    }
  }
  return true;
}

}  // namespace hpwe
