#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "structinfo/encoding_tree.hpp"
#include "structinfo/graph.hpp"
#include "structinfo/learning.hpp"
#include "structinfo/similarity.hpp"

namespace structinfo::testing {

using Rng = std::mt19937_64;

/// Vertex ids "0".."n-1".
std::vector<std::string> numbered_ids(std::size_t n);

Graph make_graph(std::size_t n, const std::vector<Edge>& edges);

/// Triangles {0,1,2} and {3,4,5} joined by the edge 2-3.
Graph barbell();
Graph complete(std::size_t n);
Graph path(std::size_t n);
/// Two m-cliques joined by the edge (m-1, m).
Graph two_cliques(std::size_t m);
/// Four triangles; triangles 0-1 and 2-3 are joined by two edges each, the
/// pairs by one edge.
Graph four_triangles();

/// Random connected graph: a random spanning tree plus extra edges with
/// probability `p`. Weights are 1 or uniform in [0.5, 3] when `weighted`.
Graph random_connected(Rng& rng, std::size_t n, double p, bool weighted);

/// Random valid encoding tree over `n` items with height at most `max_height`.
TreeShape random_shape(Rng& rng, std::size_t n, std::size_t max_height);
EncodingTree random_tree(Rng& rng, const Graph& g, std::size_t max_height);

/// Every connected simple graph on n vertices (n <= 6), unit weights.
std::vector<Graph> all_connected_graphs(std::size_t n);

/// Planted similarity: weight `inside` within a block, `across` between.
SimilarityMatrix planted_similarity(const std::vector<std::size_t>& blocks, double inside, double across);

/// Catalog with empty feature sets for every id.
FeatureCatalog empty_catalog(const std::vector<std::string>& ids);

/// Partition of a tree's leaves by depth-1 subtree, as sorted vertex lists.
std::vector<std::vector<Vertex>> partition_of(const EncodingTree& t);

}  // namespace structinfo::testing
