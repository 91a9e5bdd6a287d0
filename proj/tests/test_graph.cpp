#include <gtest/gtest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <set>

#include "hpwe/graph.hpp"
#include "hpwe/record_io.hpp"

using namespace hpwe;

namespace {

std::filesystem::path temp_path(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("hpwe_graph_" + name);
}

}  // namespace

TEST(Generators, Path) {
  auto g = path(3);
  g.validate();
  EXPECT_EQ(g.edge_list(), (std::vector<Edge>{{0, 1}, {1, 2}}));
  EXPECT_EQ(path(1).m(), 0u);
  EXPECT_EQ(path(0).n, 0u);
}

TEST(Generators, Star) {
  auto g = star(4);
  g.validate();
  EXPECT_EQ(g.degree(0), 3u);
  for (int v = 1; v < 4; ++v) EXPECT_EQ(g.degree(v), 1u);
  EXPECT_EQ(g.max_degree(), 3u);
}

TEST(Generators, GnmExactEdgeCount) {
  auto g = gnm(1 << 10, 1 << 13, 7);
  g.validate();
  EXPECT_EQ(g.m(), 1u << 13);
  auto edges = g.edge_list();
  std::set<Edge> distinct(edges.begin(), edges.end());
  EXPECT_EQ(distinct.size(), edges.size());
  for (auto [u, v] : edges) EXPECT_LT(u, v);
  EXPECT_EQ(gnm(1 << 10, 1 << 13, 7).neighbors, g.neighbors);
  EXPECT_NE(gnm(1 << 10, 1 << 13, 8).neighbors, g.neighbors);
}

TEST(Generators, GnmDenseAndInfeasible) {
  auto full = gnm(20, 190, 1);
  full.validate();
  EXPECT_EQ(full.m(), 190u);
  EXPECT_EQ(full.max_degree(), 19u);
  EXPECT_THROW(gnm(20, 191, 1), InvalidGraph);
}

TEST(Generators, PowerLawSkewed) {
  auto g = power_law(1 << 12, 1 << 15, 3);
  g.validate();
  EXPECT_EQ(g.m(), 1u << 15);
  EXPECT_GT(g.max_degree(), 8 * (2 * g.m() / g.n));
  EXPECT_THROW(power_law(100, 10, 1, 1.0), InvalidGraph);
}

TEST(Generators, KindNames) {
  for (auto k : {GraphKind::kGnm, GraphKind::kStar, GraphKind::kPath, GraphKind::kPowerLaw}) {
    EXPECT_EQ(parse_graph_kind(graph_kind_name(k)), k);
  }
  EXPECT_THROW(parse_graph_kind("torus"), std::invalid_argument);
  EXPECT_EQ(generate(GraphKind::kStar, 5, 999, 1).m(), 4u);
}

TEST(Graph, FromEdgesDropsLoopsAndRepeats) {
  std::vector<Edge> e{{0, 1}, {1, 0}, {2, 2}, {1, 2}, {0, 1}};
  auto g = Graph::from_edges(3, e);
  g.validate();
  EXPECT_EQ(g.m(), 2u);
  EXPECT_EQ(g.edge_list(), (std::vector<Edge>{{0, 1}, {1, 2}}));
  std::vector<Edge> bad{{0, 3}};
  EXPECT_THROW(Graph::from_edges(3, bad), InvalidGraph);
}

TEST(Graph, ValidateRejectsBrokenInvariants) {
  auto g = path(3);
  auto asym = g;
  asym.neighbors[0] = 2;  // 0 -> 2 without 2 -> 0
  EXPECT_THROW(asym.validate(), InvalidGraph);
  Graph loop{2, {0, 1, 2}, {0, 1}};
  EXPECT_THROW(loop.validate(), InvalidGraph);
  Graph repeat{2, {0, 2, 4}, {1, 1, 0, 0}};
  EXPECT_THROW(repeat.validate(), InvalidGraph);
  Graph range{2, {0, 1, 2}, {5, 0}};
  EXPECT_THROW(range.validate(), InvalidGraph);
  Graph offsets{2, {0, 2, 1}, {1, 0}};
  EXPECT_THROW(offsets.validate(), InvalidGraph);
}

TEST(GraphIo, EdgeListRoundTrip) {
  auto g = gnm(300, 2000, 4);
  auto p = temp_path("edges.txt");
  write_edge_list(p, g);
  auto h = read_edge_list(p, g.n);
  EXPECT_EQ(h.offsets, g.offsets);
  EXPECT_EQ(h.neighbors, g.neighbors);
  std::filesystem::remove(p);
}

TEST(GraphIo, EdgeListCommentsAndImplicitN) {
  auto p = temp_path("comments.txt");
  {
    std::ofstream f(p);
    f << "# header\n\n0 1\n1 4\n4 4\n";
  }
  auto g = read_edge_list(p);
  EXPECT_EQ(g.n, 5u);
  EXPECT_EQ(g.m(), 2u);
  {
    std::ofstream f(p);
    f << "0 x\n";
  }
  EXPECT_ANY_THROW(read_edge_list(p));
  std::filesystem::remove(p);
  EXPECT_THROW(read_edge_list(temp_path("missing.txt")), IoError);
}

TEST(GraphIo, CsrRoundTripAndTruncation) {
  auto g = power_law(500, 3000, 2);
  auto p = temp_path("g.pcsr");
  write_csr(p, g);
  auto h = read_csr(p);
  EXPECT_EQ(h.n, g.n);
  EXPECT_EQ(h.offsets, g.offsets);
  EXPECT_EQ(h.neighbors, g.neighbors);
  std::filesystem::resize_file(p, std::filesystem::file_size(p) - 3);
  EXPECT_THROW(read_csr(p), IoError);
  {
    std::ofstream f(p, std::ios::binary);
    f << "NOPE";
  }
  EXPECT_THROW(read_csr(p), IoError);
  std::filesystem::remove(p);
}
