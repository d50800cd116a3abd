#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "fixtures.hpp"
#include "structinfo/error.hpp"
#include "structinfo/graph.hpp"

namespace structinfo {
namespace {

using testing::barbell;
using testing::complete;
using testing::path;

Graph parse(const std::string& text) {
  std::istringstream in(text);
  return parse_edge_list(in);
}

// -sum (d/vol) log2(d/vol), written out independently of the library.
double degree_entropy(const std::vector<double>& degrees) {
  double vol = 0;
  for (double d : degrees) vol += d;
  double h = 0;
  for (double d : degrees) h -= d / vol * std::log2(d / vol);
  return h;
}

TEST(ParseEdgeList, TriangleFromThreeLines) {
  Graph g = parse("a b 1\nb c 1\na c 1\n");
  EXPECT_EQ(g.size(), 3u);
  EXPECT_EQ(g.edge_count(), 3u);
  EXPECT_DOUBLE_EQ(g.volume(), 6.0);
  EXPECT_EQ(g.ids(), (std::vector<std::string>{"a", "b", "c"}));
}

TEST(ParseEdgeList, TabsCommentsDefaultWeight) {
  Graph g = parse("# header\n\nx\ty\t2.5\n  # indented comment\ny\tz\n");
  EXPECT_DOUBLE_EQ(g.edge_weight(0, 1), 2.5);
  EXPECT_DOUBLE_EQ(g.edge_weight(1, 2), 1.0);
  EXPECT_DOUBLE_EQ(g.degree(1), 3.5);
}

TEST(ParseEdgeList, VertexOrderIsFirstAppearance) {
  Graph g = parse("q p\nr q\n");
  EXPECT_EQ(g.ids(), (std::vector<std::string>{"q", "p", "r"}));
  EXPECT_EQ(*g.find("r"), 2u);
  EXPECT_FALSE(g.find("zz").has_value());
}

TEST(ParseEdgeList, SelfLoopRejected) {
  EXPECT_THROW(parse("a b 1\na a 1\n"), InvariantError);
}

TEST(ParseEdgeList, DisconnectedRejected) {
  EXPECT_THROW(parse("a b\nb c\na c\nd e\ne f\nd f\n"), InvariantError);
}

TEST(ParseEdgeList, NonPositiveWeightRejected) {
  EXPECT_THROW(parse("a b 0\n"), InvariantError);
  EXPECT_THROW(parse("a b -1\n"), InvariantError);
}

TEST(ParseEdgeList, DuplicateEdgeRejectedEitherOrientation) {
  EXPECT_THROW(parse("a b\nb c\nb a\n"), InvariantError);
}

TEST(ParseEdgeList, ParseErrorsNameTheLine) {
  try {
    parse("a b 1\nb c nope\n");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos) << e.what();
  }
  EXPECT_THROW(parse("a\n"), ParseError);
  EXPECT_THROW(parse("a b 1 extra\n"), ParseError);
}

TEST(ParseEdgeList, EmptyInputRejected) { EXPECT_THROW(parse("# nothing\n"), InvariantError); }

TEST(LoadGraph, MissingFileIsParseError) { EXPECT_THROW(load_graph("/nonexistent/graph.txt"), ParseError); }

TEST(WriteEdgeList, RoundTrips) {
  Graph g = parse("a b 1.5\nb c 2\nc a 0.25\n");
  std::ostringstream out;
  write_edge_list(out, g);
  Graph back = parse(out.str());
  ASSERT_EQ(back.ids(), g.ids());
  for (const Edge& e : g.edges()) EXPECT_DOUBLE_EQ(back.edge_weight(e.u, e.v), e.weight);
}

TEST(GraphCreate, Invariants) {
  EXPECT_THROW(Graph::create({"a"}, {}), InvariantError);
  EXPECT_THROW(Graph::create({"a", "b"}, {}), InvariantError);
  EXPECT_THROW(Graph::create({"a", "a"}, {{0, 1, 1.0}}), InvariantError);
  EXPECT_THROW(Graph::create({"a", "b"}, {{0, 2, 1.0}}), InvariantError);
  EXPECT_THROW(Graph::create({"a", "b"}, {{0, 1, std::nan("")}}), InvariantError);
}

TEST(GraphCreate, VolumeIsTwiceTotalWeight) {
  testing::Rng rng(7);
  for (int i = 0; i < 20; ++i) {
    Graph g = testing::random_connected(rng, 12, 0.3, true);
    double total = 0;
    for (const Edge& e : g.edges()) total += e.weight;
    double sum_deg = 0;
    for (double d : g.degrees()) sum_deg += d;
    EXPECT_NEAR(g.volume(), 2 * total, 1e-12 * g.volume());
    EXPECT_NEAR(g.volume(), sum_deg, 1e-12 * g.volume());
  }
}

TEST(GraphCreate, NeighborsAreSortedAndSymmetric) {
  Graph g = barbell();
  auto n2 = g.neighbors(2);
  ASSERT_EQ(n2.size(), 3u);
  EXPECT_EQ(n2[0].vertex, 0u);
  EXPECT_EQ(n2[1].vertex, 1u);
  EXPECT_EQ(n2[2].vertex, 3u);
  EXPECT_DOUBLE_EQ(g.edge_weight(3, 2), 1.0);
  EXPECT_DOUBLE_EQ(g.edge_weight(0, 5), 0.0);
}

TEST(GraphWithVertex, AppendsAttachedVertex) {
  Graph g = barbell();
  std::vector<Neighbor> att{{0, 2.0}, {5, 1.0}};
  Graph h = g.with_vertex("x", att);
  EXPECT_EQ(h.size(), 7u);
  EXPECT_EQ(h.id(6), "x");
  EXPECT_DOUBLE_EQ(h.degree(6), 3.0);
  EXPECT_DOUBLE_EQ(h.volume(), g.volume() + 6.0);
  EXPECT_THROW(g.with_vertex("y", {}), InvariantError);
  EXPECT_THROW(g.with_vertex("0", att), InvariantError);
}

TEST(VertexSetBasics, MembershipAndComplement) {
  VertexSet s(5, {1, 3});
  EXPECT_EQ(s.size(), 2u);
  EXPECT_TRUE(s.contains(3));
  EXPECT_FALSE(s.contains(0));
  EXPECT_EQ(s.complement().members(), (std::vector<Vertex>{0, 2, 4}));
  s.insert(3);
  EXPECT_EQ(s.size(), 2u);
  s.erase(1);
  EXPECT_EQ(s.members(), (std::vector<Vertex>{3}));
  EXPECT_EQ(VertexSet::full(3).size(), 3u);
}

TEST(CutWeight, Examples) {
  EXPECT_DOUBLE_EQ(cut_weight(complete(4), VertexSet(4, {0, 1})), 4.0);
  EXPECT_DOUBLE_EQ(cut_weight(complete(3), VertexSet(3, {0})), 2.0);
  EXPECT_DOUBLE_EQ(cut_weight(barbell(), VertexSet(6, {0, 1, 2})), 1.0);
}

TEST(CutWeight, RejectsEmptyAndFull) {
  EXPECT_THROW(cut_weight(barbell(), VertexSet(6, {})), InvariantError);
  EXPECT_THROW(cut_weight(barbell(), VertexSet::full(6)), InvariantError);
}

TEST(ConductanceSubset, Examples) {
  EXPECT_NEAR(conductance_subset(complete(4), VertexSet(4, {0, 1})), 4.0 / 6.0, 1e-12);
  EXPECT_NEAR(conductance_subset(barbell(), VertexSet(6, {0, 1, 2})), 1.0 / 7.0, 1e-12);
  EXPECT_NEAR(conductance_subset(path(3), VertexSet(3, {0})), 1.0, 1e-12);
}

TEST(ConductanceSubset, SymmetricUnderComplement) {
  testing::Rng rng(11);
  for (int i = 0; i < 30; ++i) {
    Graph g = testing::random_connected(rng, 9, 0.4, true);
    std::vector<Vertex> members;
    for (Vertex v = 0; v < g.size(); ++v)
      if (rng() & 1U) members.push_back(v);
    if (members.empty() || members.size() == g.size()) continue;
    VertexSet s = VertexSet::from_members(g.size(), members);
    EXPECT_NEAR(conductance_subset(g, s), conductance_subset(g, s.complement()), 1e-12);
  }
}

// Brute force over all subsets, written independently of the Gray-code walk.
double conductance_by_masks(const Graph& g) {
  const std::size_t n = g.size();
  double best = INFINITY;
  for (std::uint32_t m = 1; m + 1 < (1U << n); ++m) {
    double cut = 0, vs = 0;
    for (const Edge& e : g.edges())
      if (((m >> e.u) & 1U) != ((m >> e.v) & 1U)) cut += e.weight;
    for (Vertex v = 0; v < n; ++v)
      if ((m >> v) & 1U) vs += g.degree(v);
    best = std::min(best, cut / std::min(vs, g.volume() - vs));
  }
  return best;
}

TEST(ConductanceExact, Barbell) {
  auto r = conductance_exact(barbell());
  EXPECT_NEAR(r.value, 1.0 / 7.0, 1e-12);
  EXPECT_EQ(r.argmin.members(), (std::vector<Vertex>{0, 1, 2}));
}

TEST(ConductanceExact, Path3) { EXPECT_NEAR(conductance_exact(path(3)).value, 1.0, 1e-12); }

TEST(ConductanceExact, CompleteGraphs) {
  // Best split of K_n puts floor(n/2) on one side: cut a(n-a), smaller volume
  // a(n-1) with a = floor(n/2), so Phi = ceil(n/2) / (n-1).
  for (std::size_t n = 3; n <= 8; ++n) {
    const double expected = static_cast<double>((n + 1) / 2) / static_cast<double>(n - 1);
    EXPECT_NEAR(conductance_exact(complete(n)).value, expected, 1e-12) << "n=" << n;
    if (n % 2 == 0) {
      EXPECT_NEAR(conductance_exact(complete(n)).value, n / (2.0 * (n - 1)), 1e-12);
    }
  }
}

TEST(ConductanceExact, MatchesMaskEnumeration) {
  testing::Rng rng(3);
  for (int i = 0; i < 40; ++i) {
    Graph g = testing::random_connected(rng, 2 + i % 9, 0.35, i % 2 == 0);
    EXPECT_NEAR(conductance_exact(g).value, conductance_by_masks(g), 1e-12);
  }
}

TEST(ConductanceExact, NeverAboveAnySubset) {
  testing::Rng rng(5);
  Graph g = testing::random_connected(rng, 10, 0.3, true);
  const double phi = conductance_exact(g).value;
  for (int i = 0; i < 100; ++i) {
    std::vector<Vertex> members;
    for (Vertex v = 0; v < g.size(); ++v)
      if (rng() & 1U) members.push_back(v);
    if (members.empty() || members.size() == g.size()) continue;
    EXPECT_LE(phi, conductance_subset(g, VertexSet::from_members(g.size(), members)) + 1e-12);
  }
}

TEST(ConductanceExact, TieBreakIsSmallestMemberList) {
  // K_4: every 2|2 split ties with 4/6; {0,1} sorts first.
  auto r = conductance_exact(complete(4));
  EXPECT_EQ(r.argmin.members(), (std::vector<Vertex>{0, 1}));
}

TEST(ConductanceExact, SizeGuard) {
  EXPECT_THROW(conductance_exact(path(6), 5), SizeGuardError);
}

TEST(ShannonEntropy, Examples) {
  EXPECT_DOUBLE_EQ(shannon_entropy(Distribution({0.5, 0.5})), 1.0);
  EXPECT_DOUBLE_EQ(shannon_entropy(Distribution({1.0})), 0.0);
  EXPECT_DOUBLE_EQ(shannon_entropy(Distribution({0.25, 0.25, 0.25, 0.25})), 2.0);
  EXPECT_DOUBLE_EQ(shannon_entropy(Distribution({0.5, 0.0, 0.5})), 1.0);
}

TEST(ShannonEntropy, PermutationInvariantAndBoundedByUniform) {
  testing::Rng rng(9);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 50; ++i) {
    std::vector<double> p(2 + i % 7);
    double s = 0;
    for (double& x : p) s += (x = u(rng));
    for (double& x : p) x /= s;
    const double h = shannon_entropy(Distribution(p));
    std::shuffle(p.begin(), p.end(), rng);
    EXPECT_NEAR(shannon_entropy(Distribution(p)), h, 1e-12);
    EXPECT_LT(h, std::log2(static_cast<double>(p.size())));
  }
  EXPECT_NEAR(shannon_entropy(Distribution(std::vector<double>(5, 0.2))), std::log2(5.0), 1e-12);
}

TEST(DistributionInvariants, RejectsBadInput) {
  EXPECT_THROW(Distribution({0.5, 0.6}), InvariantError);
  EXPECT_THROW(Distribution({-0.5, 1.5}), InvariantError);
  EXPECT_THROW(Distribution(std::vector<double>{}), InvariantError);
}

TEST(OneDimEntropy, Examples) {
  EXPECT_NEAR(one_dim_entropy(complete(4)), 2.0, 1e-12);
  EXPECT_NEAR(one_dim_entropy(path(3)), 1.5, 1e-12);
  EXPECT_NEAR(one_dim_entropy(barbell()), degree_entropy({2, 2, 3, 3, 2, 2}), 1e-12);
  EXPECT_NEAR(one_dim_entropy(barbell()), 2.556656707462823, 1e-12);
}

TEST(OneDimEntropy, EqualsShannonOfStationaryDistribution) {
  testing::Rng rng(13);
  for (int i = 0; i < 20; ++i) {
    Graph g = testing::random_connected(rng, 15, 0.2, true);
    std::vector<double> p;
    for (double d : g.degrees()) p.push_back(d / g.volume());
    EXPECT_NEAR(one_dim_entropy(g), shannon_entropy(Distribution(p)), 1e-12);
  }
}

}  // namespace
}  // namespace structinfo
