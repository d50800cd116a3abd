#include "structinfo/oracle.hpp"

#include <bit>
#include <cmath>
#include <limits>
#include <map>

#include "structinfo/entropy.hpp"
#include "structinfo/error.hpp"

namespace structinfo {

namespace {

/// Visits restricted-growth strings of length n in lexicographic order.
/// Element i belongs to block rgs[i].
template <typename Visit>
void for_each_rgs(std::size_t n, Visit&& visit) {
  std::vector<std::size_t> rgs(n, 0);
  std::vector<std::size_t> prefix_max(n, 0);
  visit(rgs);
  for (;;) {
    std::size_t i = n;
    while (i > 1 && rgs[i - 1] > prefix_max[i - 2]) --i;
    if (i <= 1) return;
    --i;
    ++rgs[i];
    prefix_max[i] = std::max(prefix_max[i - 1], rgs[i]);
    for (std::size_t j = i + 1; j < n; ++j) {
      rgs[j] = 0;
      prefix_max[j] = prefix_max[i];
    }
    visit(rgs);
  }
}

}  // namespace

OptimizeResult brute_force_2d(const Graph& g, std::size_t max_vertices) {
  const std::size_t n = g.size();
  if (n > max_vertices)
    throw SizeGuardError("partition oracle limited to " + std::to_string(max_vertices) + " vertices, graph has " +
                         std::to_string(n));
  const double vol = g.volume();
  double best = std::numeric_limits<double>::infinity();
  std::vector<std::size_t> best_rgs;
  std::vector<double> block_vol(n);
  std::vector<double> block_cut(n);

  for_each_rgs(n, [&](const std::vector<std::size_t>& rgs) {
    std::fill(block_vol.begin(), block_vol.end(), 0.0);
    std::fill(block_cut.begin(), block_cut.end(), 0.0);
    for (Vertex v = 0; v < n; ++v) block_vol[rgs[v]] += g.degree(v);
    for (const Edge& e : g.edges()) {
      if (rgs[e.u] != rgs[e.v]) {
        block_cut[rgs[e.u]] += e.weight;
        block_cut[rgs[e.v]] += e.weight;
      }
    }
    // Leaf terms plus module terms; a singleton module is a depth-1 leaf and
    // its two terms collapse to d log(vol / d).
    double h = 0.0;
    for (Vertex v = 0; v < n; ++v) h += g.degree(v) * std::log2(block_vol[rgs[v]] / g.degree(v));
    for (std::size_t b = 0; b < n; ++b)
      if (block_vol[b] > 0.0 && block_cut[b] > 0.0) h += block_cut[b] * std::log2(vol / block_vol[b]);
    h /= vol;
    if (h < best - kDeltaTolerance) {
      best = h;
      best_rgs = rgs;
    }
  });

  std::vector<std::vector<Vertex>> parts;
  for (Vertex v = 0; v < n; ++v) {
    if (best_rgs[v] >= parts.size()) parts.resize(best_rgs[v] + 1);
    parts[best_rgs[v]].push_back(v);
  }
  EncodingTree tree = from_partition(g, parts);
  const double h = structural_entropy(g, tree);
  return {std::move(tree), h, {}};
}

namespace {

struct SubtreeSolver {
  const Graph& g;
  std::size_t n;
  std::vector<double> vol;
  std::vector<double> cut;
  // (subset, height) -> (cost, chosen child blocks)
  std::map<std::pair<std::uint32_t, std::size_t>, std::pair<double, std::vector<std::uint32_t>>> memo;

  explicit SubtreeSolver(const Graph& graph) : g(graph), n(graph.size()) {
    const std::uint32_t subsets = 1U << n;
    vol.assign(subsets, 0.0);
    cut.assign(subsets, 0.0);
    for (std::uint32_t s = 1; s < subsets; ++s) {
      for (Vertex v = 0; v < n; ++v)
        if ((s >> v) & 1U) vol[s] += g.degree(v);
      for (const Edge& e : g.edges())
        if (((s >> e.u) & 1U) != ((s >> e.v) & 1U)) cut[s] += e.weight;
    }
  }

  /// Minimum over subtrees rooted at a node with marker `s` and height at
  /// most `h` of the sum of all terms strictly below that node.
  const std::pair<double, std::vector<std::uint32_t>>& solve(std::uint32_t s, std::size_t h) {
    auto key = std::pair(s, h);
    if (auto it = memo.find(key); it != memo.end()) return it->second;

    std::vector<Vertex> members;
    for (Vertex v = 0; v < n; ++v)
      if ((s >> v) & 1U) members.push_back(v);

    double best = std::numeric_limits<double>::infinity();
    std::vector<std::uint32_t> best_blocks;
    std::vector<std::uint32_t> blocks;
    for_each_rgs(members.size(), [&](const std::vector<std::size_t>& rgs) {
      std::size_t count = 0;
      for (std::size_t r : rgs) count = std::max(count, r + 1);
      if (count < 2) return;
      blocks.assign(count, 0U);
      for (std::size_t i = 0; i < members.size(); ++i) blocks[rgs[i]] |= 1U << members[i];
      double cost = 0.0;
      for (std::uint32_t b : blocks) {
        cost += cut[b] * std::log2(vol[s] / vol[b]);
        if (std::popcount(b) > 1) {
          if (h < 2) return;
          cost += solve(b, h - 1).first;
        }
      }
      if (cost < best - kDeltaTolerance) {
        best = cost;
        best_blocks = blocks;
      }
    });
    return memo[key] = {best, std::move(best_blocks)};
  }

  TreeShape shape(std::uint32_t s, std::size_t h) {
    if (std::popcount(s) == 1) return TreeShape::leaf(static_cast<Vertex>(std::countr_zero(s)));
    std::vector<TreeShape> kids;
    for (std::uint32_t b : solve(s, h).second) kids.push_back(shape(b, h - 1));
    return TreeShape::internal(std::move(kids));
  }
};

}  // namespace

OptimizeResult brute_force_kd(const Graph& g, std::size_t height, std::size_t max_vertices, std::size_t max_height) {
  if (g.size() > max_vertices || height > max_height)
    throw SizeGuardError("tree oracle limited to " + std::to_string(max_vertices) + " vertices and height " +
                         std::to_string(max_height));
  if (height < 1) throw InvariantError("height must be at least 1");
  SubtreeSolver solver(g);
  const auto all = static_cast<std::uint32_t>((1U << g.size()) - 1U);
  EncodingTree tree = EncodingTree::from_shape(g, solver.shape(all, height));
  const double h = structural_entropy(g, tree);
  return {std::move(tree), h, {}};
}

double compressing_ratio_exact(const Graph& g, std::size_t height) {
  const OptimizeResult best = height == 2 ? brute_force_2d(g) : brute_force_kd(g, height);
  const double h1 = one_dim_entropy(g);
  return (h1 - best.entropy) / h1;
}

bool is_compressible(const Graph& g, std::size_t height, double rho) {
  return compressing_ratio_exact(g, height) >= rho;
}

}  // namespace structinfo
