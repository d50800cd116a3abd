#include <gtest/gtest.h>

#include <cmath>

#include "fixtures.hpp"
#include "structinfo/entropy.hpp"
#include "structinfo/error.hpp"
#include "structinfo/oracle.hpp"

namespace structinfo {
namespace {

using testing::barbell;
using testing::complete;

constexpr double kH1Barbell = 2.556656707462823;
constexpr double kHtBarbell = 1.6995138503199656;

EncodingTree two_part(const Graph& g, std::vector<std::vector<Vertex>> parts) { return from_partition(g, parts); }

// Recomputes every marker's volume and cut from the graph, ignoring caches.
double entropy_from_scratch(const Graph& g, const EncodingTree& t, bool compress) {
  const double vol = g.volume();
  double h = 0;
  for (NodeId id = 1; id < t.node_count(); ++id) {
    const auto& nd = t.node(id);
    VertexSet s = VertexSet::from_members(g.size(), nd.marker);
    VertexSet ps = VertexSet::from_members(g.size(), t.node(nd.parent).marker);
    const double va = g.volume(s), vp = g.volume(ps), cut = cut_weight(g, s);
    h += (compress ? va - cut : cut) / vol * std::log2(vp / va);
  }
  return h;
}

TEST(StructuralEntropy, StarTreeIsOneDim) {
  testing::Rng rng(3);
  for (int i = 0; i < 20; ++i) {
    Graph g = testing::random_connected(rng, 3 + i, 0.3, true);
    EXPECT_NEAR(structural_entropy(g, star_tree(g)), one_dim_entropy(g), 1e-12);
  }
}

TEST(StructuralEntropy, BarbellTwoPart) {
  Graph g = barbell();
  EncodingTree t = two_part(g, {{0, 1, 2}, {3, 4, 5}});
  const double hand = 2.0 / 14.0 + 4.0 / 7.0 * std::log2(3.5) + 3.0 / 7.0 * std::log2(7.0 / 3.0);
  EXPECT_NEAR(hand, kHtBarbell, 1e-15);
  EXPECT_NEAR(structural_entropy(g, t), hand, 1e-12);
  EXPECT_NEAR(structural_entropy_edgewise(g, t), hand, 1e-12);
}

TEST(StructuralEntropy, K4TwoPartMatchesEdgewise) {
  Graph g = complete(4);
  EncodingTree t = two_part(g, {{0, 1}, {2, 3}});
  EXPECT_NEAR(structural_entropy(g, t), structural_entropy_edgewise(g, t), 1e-12);
  EXPECT_NEAR(structural_entropy(g, t), entropy_from_scratch(g, t, false), 1e-12);
}

TEST(StructuralEntropy, TriangleStarEdgewise) {
  Graph g = complete(3);
  EXPECT_NEAR(structural_entropy_edgewise(g, star_tree(g)), std::log2(3.0), 1e-12);
}

TEST(StructuralEntropy, MatchesScratchAndEdgewiseOnRandomTrees) {
  testing::Rng rng(5);
  for (int i = 0; i < 100; ++i) {
    Graph g = testing::random_connected(rng, 2 + i % 20, 0.25, i % 2 == 0);
    EncodingTree t = testing::random_tree(rng, g, 1 + i % 5);
    const double h = structural_entropy(g, t);
    EXPECT_NEAR(h, entropy_from_scratch(g, t, false), 1e-9);
    EXPECT_NEAR(h, structural_entropy_edgewise(g, t), 1e-9);
    EXPECT_NEAR(compressing_info(g, t), entropy_from_scratch(g, t, true), 1e-9);
    EXPECT_NEAR(compressing_info(g, t), compressing_info_edgewise(g, t), 1e-9);
    EXPECT_NEAR(compressing_info(g, t) + h, one_dim_entropy(g), 1e-9);
    EXPECT_NEAR(decoding_info(g, t), compressing_info(g, t), 1e-9);
  }
}

TEST(StructuralEntropy, RejectsInvalidTree) {
  Graph g = complete(4);
  auto shape = TreeShape::internal({TreeShape::leaf(0), TreeShape::leaf(1)});
  EXPECT_THROW(structural_entropy(g, EncodingTree::from_shape(g, shape)), InvariantError);
}

TEST(ModuleEntropy, CutFunctionIsStructuralEntropy) {
  testing::Rng rng(7);
  for (int i = 0; i < 20; ++i) {
    Graph g = testing::random_connected(rng, 8, 0.3, true);
    EncodingTree t = testing::random_tree(rng, g, 3);
    EXPECT_NEAR(module_entropy(g, t, ModuleFunction::cut()), structural_entropy(g, t), 1e-12);
  }
}

TEST(ModuleEntropy, VolumeFunctionIsTreeIndependent) {
  testing::Rng rng(9);
  for (int i = 0; i < 30; ++i) {
    Graph g = testing::random_connected(rng, 4 + i % 10, 0.3, true);
    const double a = module_entropy(g, testing::random_tree(rng, g, 4), ModuleFunction::volume());
    const double b = module_entropy(g, testing::random_tree(rng, g, 4), ModuleFunction::volume());
    EXPECT_NEAR(a, b, 1e-12);
    EXPECT_NEAR(a, one_dim_entropy(g), 1e-12);
  }
}

TEST(ModuleEntropy, CustomFunction) {
  Graph g = barbell();
  EncodingTree t = two_part(g, {{0, 1, 2}, {3, 4, 5}});
  auto vol_again = ModuleFunction::custom("vol", [&](std::span<const Vertex> m) {
    double s = 0;
    for (Vertex v : m) s += g.degree(v);
    return s;
  });
  EXPECT_EQ(vol_again.name(), "vol");
  EXPECT_NEAR(module_entropy(g, t, vol_again), kH1Barbell, 1e-12);
  auto negative = ModuleFunction::custom("neg", [](std::span<const Vertex>) { return -1.0; });
  EXPECT_THROW(module_entropy(g, t, negative), InvariantError);
}

TEST(DistributionEntropy, Examples) {
  Distribution p({0.5, 0.25, 0.25});
  EncodingTree star = EncodingTree::from_shape(3, TreeShape::internal({TreeShape::leaf(0), TreeShape::leaf(1), TreeShape::leaf(2)}));
  EncodingTree nested = EncodingTree::from_shape(
      3, TreeShape::internal({TreeShape::leaf(0), TreeShape::internal({TreeShape::leaf(1), TreeShape::leaf(2)})}));
  EXPECT_NEAR(distribution_entropy(p, star), 1.5, 1e-12);
  EXPECT_NEAR(distribution_entropy(p, nested), 1.5, 1e-12);

  Distribution u(std::vector<double>(8, 0.125));
  testing::Rng rng(11);
  EncodingTree t = EncodingTree::from_shape(8, testing::random_shape(rng, 8, 4));
  EXPECT_NEAR(distribution_entropy(u, t), 3.0, 1e-12);
}

TEST(DistributionEntropy, TreeIndependent) {
  testing::Rng rng(13);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (int i = 0; i < 50; ++i) {
    const std::size_t n = 2 + i % 15;
    std::vector<double> w(n);
    double s = 0;
    for (double& x : w) s += x = (i % 5 == 0 && &x == &w[0]) ? 0.0 : unif(rng);
    for (double& x : w) x /= s;
    Distribution p(w);
    EncodingTree t = EncodingTree::from_shape(n, testing::random_shape(rng, n, 5));
    EXPECT_NEAR(distribution_entropy(p, t), shannon_entropy(p), 1e-9);
  }
}

TEST(DistributionEntropy, SizeMismatchRejected) {
  Distribution p({0.5, 0.5});
  EncodingTree t = EncodingTree::from_shape(3, TreeShape::internal({TreeShape::leaf(0), TreeShape::leaf(1), TreeShape::leaf(2)}));
  EXPECT_THROW(distribution_entropy(p, t), InvariantError);
}

TEST(CompressingInfo, BarbellIsSixSevenths) {
  Graph g = barbell();
  EncodingTree t = two_part(g, {{0, 1, 2}, {3, 4, 5}});
  EXPECT_NEAR(compressing_info(g, t), 6.0 / 7.0, 1e-12);
  EXPECT_NEAR(compressing_info_edgewise(g, t), 6.0 / 7.0, 1e-12);
  EXPECT_NEAR(decoding_info(g, t), 6.0 / 7.0, 1e-12);
}

TEST(CompressingInfo, StarTreeIsZero) {
  for (Graph g : {barbell(), complete(5), testing::path(4)}) {
    EXPECT_NEAR(compressing_info(g, star_tree(g)), 0.0, 1e-12);
    EXPECT_NEAR(compressing_info_edgewise(g, star_tree(g)), 0.0, 1e-12);
    EXPECT_NEAR(decoding_info(g, star_tree(g)), 0.0, 1e-12);
  }
}

TEST(InfoReport, Barbell) {
  Graph g = barbell();
  InfoReport r = info_report(g, two_part(g, {{0, 1, 2}, {3, 4, 5}}));
  EXPECT_NEAR(r.h1, kH1Barbell, 1e-12);
  EXPECT_NEAR(r.h_t, kHtBarbell, 1e-12);
  EXPECT_NEAR(r.compress, 6.0 / 7.0, 1e-12);
  EXPECT_NEAR(r.decode, 6.0 / 7.0, 1e-12);
  EXPECT_NEAR(r.ratio, 6.0 / 7.0 / kH1Barbell, 1e-12);
  EXPECT_NEAR(r.ratio, 0.3352592683, 1e-10);
  EXPECT_NEAR(info_report(g, star_tree(g)).ratio, 0.0, 1e-12);
}

TEST(Bounds, Examples) {
  EXPECT_NEAR(entropy_lower_bound(complete(4)), 2.0 / 3.0, 1e-12);
  EXPECT_NEAR(entropy_lower_bound(barbell()), (kH1Barbell - 1.0) / 7.0, 1e-12);
  EXPECT_NEAR(entropy_lower_bound(barbell()), 0.222379530, 1e-9);
}

TEST(Bounds, HoldOnSmallRandomGraphs) {
  testing::Rng rng(15);
  for (int i = 0; i < 40; ++i) {
    Graph g = testing::random_connected(rng, 3 + i % 6, 0.35, i % 3 == 0);
    const double h1 = one_dim_entropy(g);
    const double opt = brute_force_2d(g).entropy;
    EXPECT_LE(entropy_lower_bound(g), opt + 1e-9);
    EXPECT_LE(opt, h1 + 1e-9);
    EXPECT_LE(h1 - opt, compressing_upper_bound(g) + 1e-9);
  }
}

TEST(Compressibility, Barbell) {
  Graph g = barbell();
  EXPECT_NEAR(compressing_ratio_exact(g, 2), 6.0 / 7.0 / kH1Barbell, 1e-12);
  EXPECT_TRUE(is_compressible(g, 2, 0.3));
  EXPECT_FALSE(is_compressible(g, 2, 0.4));
}

}  // namespace
}  // namespace structinfo
