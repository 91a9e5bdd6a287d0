#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "hpwe/graph.hpp"
#include "hpwe/graph_algos.hpp"
#include "hpwe/rng.hpp"

using namespace hpwe;

namespace {

Graph triangle() {
  std::vector<Edge> e{{0, 1}, {1, 2}, {0, 2}};
  return Graph::from_edges(3, e);
}

Graph complete(std::uint32_t n) {
  std::vector<Edge> e;
  for (std::uint32_t u = 0; u < n; ++u)
    for (std::uint32_t v = u + 1; v < n; ++v) e.push_back({u, v});
  return Graph::from_edges(n, e);
}

PaletteSet full_palettes(const Graph& g) {
  std::vector<std::uint64_t> hint(g.n);
  for (std::uint64_t v = 0; v < g.n; ++v) hint[v] = g.degree(v);
  return PaletteSet(static_cast<std::uint32_t>(g.max_degree() + 1), hint);
}


}  // namespace

TEST(Verifiers, Examples) {
  auto p = path(3);
  EXPECT_TRUE(verify_mis(p, std::vector<std::uint8_t>{0, 1, 0}));
  EXPECT_TRUE(verify_mis(p, std::vector<std::uint8_t>{1, 0, 1}));
  EXPECT_FALSE(verify_mis(p, std::vector<std::uint8_t>{1, 1, 0}));
  EXPECT_FALSE(verify_mis(p, std::vector<std::uint8_t>{1, 0, 0}));
  EXPECT_FALSE(verify_mis(p, std::vector<std::uint8_t>{0, 1}));
  auto t = triangle();
  EXPECT_FALSE(verify_coloring(t, std::vector<std::uint32_t>{0, 0, 1}, 2));
  EXPECT_TRUE(verify_coloring(t, std::vector<std::uint32_t>{0, 2, 1}, 2));
  EXPECT_FALSE(verify_coloring(t, std::vector<std::uint32_t>{0, 3, 1}, 2));
  EXPECT_FALSE(verify_coloring(t, std::vector<std::uint32_t>{0, kUncolored, 1}, 2));
}

TEST(Luby, Examples) {
  auto empty = Graph::from_edges(5, {});
  auto r = luby_mis(GraphView::whole(empty), 1);
  EXPECT_EQ(r.in_set, std::vector<std::uint8_t>(5, 1));
  for (std::uint64_t s = 0; s < 20; ++s) {
    auto p = path(3);
    auto m = luby_mis(GraphView::whole(p), s).in_set;
    EXPECT_TRUE(m == (std::vector<std::uint8_t>{0, 1, 0}) || m == (std::vector<std::uint8_t>{1, 0, 1}));
    auto t = luby_mis(GraphView::whole(triangle()), s).in_set;
    EXPECT_EQ(std::count(t.begin(), t.end(), 1), 1);
  }
}

TEST(Luby, ExcludeMask) {
  auto p = path(3);
  std::vector<std::uint8_t> exclude{0, 1, 0};
  auto m = luby_mis(GraphView::whole(p), 4, nullptr, exclude).in_set;
  EXPECT_EQ(m, (std::vector<std::uint8_t>{1, 0, 1}));
}

TEST(Luby, RandomGraphsWithinLogRounds) {
  const std::uint64_t n = 1 << 14;
  auto g = gnm(n, 1 << 17, 2);
  std::uint64_t worst = 0;
  for (std::uint64_t s = 0; s < 50; ++s) {
    WorkMeter meter;
    auto r = luby_mis(GraphView::whole(g), derive_seed(1, s), &meter);
    ASSERT_TRUE(verify_mis(g, r.in_set));
    worst = std::max(worst, r.rounds);
    EXPECT_GE(meter.rounds(), r.rounds);
  }
  EXPECT_LE(worst, 2 * ceil_log2(n));
}

TEST(PaletteColor, IsolatedVertexForcedColor) {
  auto g = Graph::from_edges(1, {});
  std::vector<std::uint64_t> hint{5};
  PaletteSet pal(6, hint);
  for (std::uint32_t c = 0; c < 5; ++c) pal.forbid(0, c);
  auto r = palette_color(GraphView::whole(g), pal, 1);
  EXPECT_EQ(r.color, std::vector<std::uint32_t>{5});
}

TEST(PaletteColor, TriangleAllDistinct) {
  for (std::uint64_t s = 0; s < 30; ++s) {
    auto t = triangle();
    auto pal = full_palettes(t);
    auto r = palette_color(GraphView::whole(t), pal, s);
    std::set<std::uint32_t> colors(r.color.begin(), r.color.end());
    EXPECT_EQ(colors.size(), 3u);
    EXPECT_TRUE(verify_coloring(t, r.color, 2));
  }
}

TEST(PaletteColor, RandomGraphsProperWithinLogRounds) {
  const std::uint64_t n = 1 << 12;
  auto g = gnm(n, 1 << 15, 3);
  std::uint64_t worst = 0;
  for (std::uint64_t s = 0; s < 50; ++s) {
    auto pal = full_palettes(g);
    auto r = palette_color(GraphView::whole(g), pal, derive_seed(5, s));
    ASSERT_TRUE(verify_coloring(g, r.color, g.max_degree()));
    worst = std::max(worst, r.rounds);
  }
  EXPECT_LE(worst, 4 * ceil_log2(n));
}

TEST(PaletteColor, DeficitDetected) {
  auto t = triangle();
  std::vector<std::uint64_t> hint(3, 2);
  PaletteSet pal(2, hint);  // two colors for degree-2 vertices
  EXPECT_THROW(palette_color(GraphView::whole(t), pal, 1), PaletteDeficit);
}

TEST(PaletteSet, SamplingAndForbid) {
  std::vector<std::uint64_t> hint{8};
  PaletteSet pal(10, hint);
  EXPECT_EQ(pal.size(0), 10u);
  EXPECT_TRUE(pal.forbid(0, 3));
  EXPECT_FALSE(pal.forbid(0, 3));
  EXPECT_FALSE(pal.allows(0, 3));
  EXPECT_FALSE(pal.allows(0, 10));
  for (std::uint32_t c : {0u, 1u, 2u, 4u, 5u, 6u, 7u}) pal.forbid(0, c);
  EXPECT_EQ(pal.allowed(0), (std::vector<std::uint32_t>{8, 9}));
  std::uint64_t state = 1, cost = 0;
  auto words = [&] { return mix64(++state); };
  for (int i = 0; i < 100; ++i) {
    auto c = pal.sample(0, words, cost);
    EXPECT_TRUE(c == 8 || c == 9);
  }
  EXPECT_GT(cost, 0u);
  std::vector<std::uint64_t> none{0};
  PaletteSet tight(4, none);
  EXPECT_THROW(tight.forbid(0, 1), PaletteDeficit);
}

TEST(ExtendPalettes, Examples) {
  // delta + 1 = 3 (colors 0, 1, 2); local 0 sees colors {0, 2}; local 1 has no
  // cut edges; local 2 sees color 1 twice.
  std::vector<std::uint32_t> phi{0, 2, 1, 1};
  std::vector<CutEdge> cut{{0, 0}, {1, 0}, {2, 2}, {3, 2}};
  WorkMeter meter;
  auto pal = extend_palettes(phi, cut, 3, 2, {}, &meter);
  EXPECT_EQ(pal.allowed(0), std::vector<std::uint32_t>{1});
  EXPECT_EQ(pal.allowed(1), (std::vector<std::uint32_t>{0, 1, 2}));
  EXPECT_EQ(pal.allowed(2), (std::vector<std::uint32_t>{0, 2}));
  EXPECT_EQ(pal.size(2), 2u);
  auto br = meter.phase_breakdown();
  EXPECT_EQ(br["extend"], 2 * cut.size());
  EXPECT_EQ(br["extend_init"], 3u);
}

TEST(ExtendPalettes, Errors) {
  std::vector<std::uint32_t> phi{kUncolored};
  std::vector<CutEdge> cut{{0, 0}};
  EXPECT_THROW(extend_palettes(phi, cut, 1, 2, {}), UncoloredCutEndpoint);
  std::vector<std::uint32_t> ok{0};
  std::vector<CutEdge> outside{{0, 4}};
  EXPECT_THROW(extend_palettes(ok, outside, 1, 2, {}), std::invalid_argument);
  // Internal degree 2 plus one cut color leaves 2 < 3 colors of [3].
  std::vector<std::uint64_t> internal{2};
  EXPECT_THROW(extend_palettes(ok, cut, 1, 2, internal), PaletteDeficit);
}

TEST(ExtendPalettes, MatchesSetDifferenceOracle) {
  for (std::uint64_t trial = 0; trial < 200; ++trial) {
    const std::uint64_t delta = 1 + mix64(trial) % 12, h0 = 1 + mix64(trial + 1000) % 20,
                        h1 = 1 + mix64(trial + 2000) % 20;
    std::vector<std::uint32_t> phi(h0);
    for (std::uint64_t i = 0; i < h0; ++i) phi[i] = mix64(trial * 77 + i) % (delta + 1);
    std::vector<CutEdge> cut;
    std::vector<std::set<std::uint32_t>> seen(h1);
    for (std::uint64_t v = 0; v < h1; ++v) {
      const std::uint64_t cnt = mix64(trial * 31 + v) % (delta + 1);
      for (std::uint64_t j = 0; j < cnt; ++j) {
        const auto u = static_cast<std::uint32_t>(mix64(trial * 131 + v * 17 + j) % h0);
        cut.push_back({u, static_cast<std::uint32_t>(v)});
        seen[v].insert(phi[u]);
      }
    }
    auto pal = extend_palettes(phi, cut, h1, delta, {});
    for (std::uint64_t v = 0; v < h1; ++v) {
      std::vector<std::uint32_t> expect;
      for (std::uint32_t c = 0; c <= delta; ++c)
        if (!seen[v].count(c)) expect.push_back(c);
      ASSERT_EQ(pal.allowed(v), expect);
    }
  }
}

TEST(MisExtendPrune, Examples) {
  std::vector<std::uint8_t> m0{1};
  EXPECT_EQ(mis_extend_prune(m0, {}, 3), std::vector<std::uint8_t>(3, 1));
  std::vector<CutEdge> all{{0, 0}, {0, 1}};
  EXPECT_EQ(mis_extend_prune(m0, all, 2), std::vector<std::uint8_t>(2, 0));
  // Path a-b-c with H0 = {a}, M0 = {a}; H1 = {b, c}, cut a-b.
  std::vector<CutEdge> ab{{0, 0}};
  auto keep = mis_extend_prune(m0, ab, 2);
  EXPECT_EQ(keep, (std::vector<std::uint8_t>{0, 1}));
  std::vector<std::uint8_t> not_member{0};
  EXPECT_EQ(mis_extend_prune(not_member, ab, 2), (std::vector<std::uint8_t>{1, 1}));
}

TEST(GraphView, PieceRestrictsToInternal) {
  auto g = gnm(500, 3000, 1);
  auto p = cull_partition(g, 2, 1);
  auto r = reorganize(g, p, 1);
  for (std::uint64_t i = 0; i < r.pieces(); ++i) {
    auto v = GraphView::piece(r, i);
    EXPECT_EQ(v.begin, r.piece_begin[i]);
    EXPECT_EQ(v.end, r.piece_begin[i + 1]);
    for (std::uint64_t x = 0; x < v.size(); ++x)
      for (auto u : v.adj(x)) ASSERT_TRUE(u >= v.begin && u < v.end);
  }
}

TEST(Boosted, EdgelessGraph) {
  auto g = Graph::from_edges(64, {});
  auto c = boosted_coloring(g, 3, 1);
  EXPECT_TRUE(verify_coloring(g, c.color, c.delta));
  EXPECT_EQ(c.delta, 0u);
  auto m = boosted_mis(g, 3, 1);
  EXPECT_EQ(m.in_set, std::vector<std::uint8_t>(64, 1));
}

TEST(Boosted, CompleteGraphUsesAllColors) {
  auto g = complete(9);
  for (std::uint64_t s = 0; s < 10; ++s) {
    auto c = boosted_coloring(g, 2, s);
    ASSERT_TRUE(verify_coloring(g, c.color, 8));
    EXPECT_EQ(std::set<std::uint32_t>(c.color.begin(), c.color.end()).size(), 9u);
    auto m = boosted_mis(g, 2, s);
    EXPECT_EQ(std::count(m.in_set.begin(), m.in_set.end(), 1), 1);
  }
}

TEST(Boosted, StarMis) {
  auto g = star(200);
  for (std::uint64_t s = 0; s < 10; ++s) {
    auto m = boosted_mis(g, 2, s);
    ASSERT_TRUE(verify_mis(g, m.in_set));
    const auto members = std::count(m.in_set.begin(), m.in_set.end(), 1);
    EXPECT_TRUE((members == 1 && m.in_set[0]) || (members == 199 && !m.in_set[0]));
  }
}

TEST(Boosted, RandomGraphsVerifyAndAccount) {
  for (auto kind : {GraphKind::kGnm, GraphKind::kPowerLaw, GraphKind::kStar}) {
    for (std::uint64_t k : {2u, 4u, 12u}) {
      auto g = generate(kind, 1 << 12, 1 << 15, 7);
      WorkMeter meter;
      auto c = boosted_coloring(g, k, 3, &meter);
      ASSERT_TRUE(verify_coloring(g, c.color, g.max_degree()));
      EXPECT_EQ(c.delta, g.max_degree());
      EXPECT_LE(c.stats.cut_edges, g.m());
      EXPECT_EQ(c.stats.work, meter.total_ops());
      auto m = boosted_mis(g, k, 3);
      ASSERT_TRUE(verify_mis(g, m.in_set));
      EXPECT_LE(m.stats.cut_edges, g.m());
    }
  }
}
