#include "fixtures.hpp"

#include <algorithm>
#include <numeric>

namespace structinfo::testing {

std::vector<std::string> numbered_ids(std::size_t n) {
  std::vector<std::string> ids;
  for (std::size_t i = 0; i < n; ++i) ids.push_back(std::to_string(i));
  return ids;
}

Graph make_graph(std::size_t n, const std::vector<Edge>& edges) { return Graph::create(numbered_ids(n), edges); }

Graph barbell() { return make_graph(6, {{0, 1, 1}, {0, 2, 1}, {1, 2, 1}, {2, 3, 1}, {3, 4, 1}, {3, 5, 1}, {4, 5, 1}}); }

Graph complete(std::size_t n) {
  std::vector<Edge> edges;
  for (Vertex u = 0; u < n; ++u)
    for (Vertex v = u + 1; v < n; ++v) edges.push_back({u, v, 1.0});
  return make_graph(n, edges);
}

Graph path(std::size_t n) {
  std::vector<Edge> edges;
  for (Vertex v = 0; v + 1 < n; ++v) edges.push_back({v, v + 1, 1.0});
  return make_graph(n, edges);
}

Graph two_cliques(std::size_t m) {
  std::vector<Edge> edges;
  for (Vertex base : {Vertex{0}, static_cast<Vertex>(m)})
    for (Vertex u = 0; u < m; ++u)
      for (Vertex v = u + 1; v < m; ++v) edges.push_back({base + u, base + v, 1.0});
  edges.push_back({static_cast<Vertex>(m - 1), static_cast<Vertex>(m), 1.0});
  return make_graph(2 * m, edges);
}

Graph four_triangles() {
  std::vector<Edge> edges;
  for (Vertex t = 0; t < 4; ++t) {
    const Vertex b = 3 * t;
    edges.push_back({b, b + 1, 1.0});
    edges.push_back({b, b + 2, 1.0});
    edges.push_back({b + 1, b + 2, 1.0});
  }
  // pairs (0,1) and (2,3) are tight, the pairs touch once
  edges.push_back({2, 3, 1.0});
  edges.push_back({1, 4, 1.0});
  edges.push_back({8, 9, 1.0});
  edges.push_back({7, 10, 1.0});
  edges.push_back({5, 6, 1.0});
  return make_graph(12, edges);
}

Graph random_connected(Rng& rng, std::size_t n, double p, bool weighted) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_real_distribution<double> wdist(0.5, 3.0);
  auto weight = [&] { return weighted ? wdist(rng) : 1.0; };
  std::vector<Vertex> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);
  std::vector<std::vector<bool>> has(n, std::vector<bool>(n, false));
  std::vector<Edge> edges;
  for (std::size_t i = 1; i < n; ++i) {
    const Vertex u = order[i];
    const Vertex v = order[std::uniform_int_distribution<std::size_t>(0, i - 1)(rng)];
    has[u][v] = has[v][u] = true;
    edges.push_back({std::min(u, v), std::max(u, v), weight()});
  }
  for (Vertex u = 0; u < n; ++u)
    for (Vertex v = u + 1; v < n; ++v)
      if (!has[u][v] && unit(rng) < p) edges.push_back({u, v, weight()});
  return make_graph(n, edges);
}

namespace {

TreeShape shape_over(Rng& rng, std::vector<Vertex> items, std::size_t height) {
  if (items.size() == 1) return TreeShape::leaf(items.front());
  if (height <= 1) {
    std::vector<TreeShape> leaves;
    for (Vertex v : items) leaves.push_back(TreeShape::leaf(v));
    return TreeShape::internal(std::move(leaves));
  }
  // Random split into at least two groups.
  std::shuffle(items.begin(), items.end(), rng);
  const std::size_t groups = std::uniform_int_distribution<std::size_t>(2, items.size())(rng);
  std::vector<std::vector<Vertex>> parts(groups);
  for (std::size_t i = 0; i < items.size(); ++i)
    parts[i < groups ? i : std::uniform_int_distribution<std::size_t>(0, groups - 1)(rng)].push_back(items[i]);
  std::vector<TreeShape> kids;
  for (auto& part : parts) kids.push_back(shape_over(rng, std::move(part), height - 1));
  return TreeShape::internal(std::move(kids));
}

}  // namespace

TreeShape random_shape(Rng& rng, std::size_t n, std::size_t max_height) {
  std::vector<Vertex> items(n);
  std::iota(items.begin(), items.end(), 0);
  const std::size_t h = std::uniform_int_distribution<std::size_t>(1, std::max<std::size_t>(1, max_height))(rng);
  return shape_over(rng, std::move(items), h);
}

EncodingTree random_tree(Rng& rng, const Graph& g, std::size_t max_height) {
  return EncodingTree::from_shape(g, random_shape(rng, g.size(), max_height));
}

std::vector<Graph> all_connected_graphs(std::size_t n) {
  std::vector<std::pair<Vertex, Vertex>> slots;
  for (Vertex u = 0; u < n; ++u)
    for (Vertex v = u + 1; v < n; ++v) slots.emplace_back(u, v);
  std::vector<Graph> out;
  for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << slots.size()); ++mask) {
    // Cheap connectivity check before building.
    std::vector<std::size_t> root(n);
    std::iota(root.begin(), root.end(), 0);
    auto find = [&](std::size_t x) {
      while (root[x] != x) x = root[x];
      return x;
    };
    std::vector<Edge> edges;
    std::size_t comps = n;
    for (std::size_t i = 0; i < slots.size(); ++i) {
      if (!((mask >> i) & 1U)) continue;
      edges.push_back({slots[i].first, slots[i].second, 1.0});
      auto a = find(slots[i].first), b = find(slots[i].second);
      if (a != b) {
        root[a] = b;
        --comps;
      }
    }
    if (comps == 1) out.push_back(make_graph(n, edges));
  }
  return out;
}

SimilarityMatrix planted_similarity(const std::vector<std::size_t>& blocks, double inside, double across) {
  std::vector<std::size_t> label;
  for (std::size_t b = 0; b < blocks.size(); ++b) label.insert(label.end(), blocks[b], b);
  const std::size_t n = label.size();
  std::vector<std::string> ids;
  for (std::size_t i = 0; i < n; ++i) ids.push_back("s" + std::to_string(i));
  std::vector<double> values(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (i != j) values[i * n + j] = label[i] == label[j] ? inside : across;
  return SimilarityMatrix(std::move(ids), std::move(values));
}

FeatureCatalog empty_catalog(const std::vector<std::string>& ids) {
  FeatureCatalog c;
  for (const auto& id : ids) c.set(id, {});
  return c;
}

std::vector<std::vector<Vertex>> partition_of(const EncodingTree& t) { return top_level_modules(t); }

}  // namespace structinfo::testing
