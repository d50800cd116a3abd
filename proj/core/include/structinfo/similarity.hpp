#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "structinfo/graph.hpp"

namespace structinfo {

/// Dense symmetric non-negative similarity matrix with sample identifiers.
/// The diagonal is ignored.
class SimilarityMatrix {
 public:
  /// Throws InvariantError on asymmetry, negative or non-finite entries, or a
  /// size mismatch.
  SimilarityMatrix(std::vector<std::string> ids, std::vector<double> values);

  std::size_t size() const { return ids_.size(); }
  const std::vector<std::string>& ids() const { return ids_; }
  double operator()(std::size_t i, std::size_t j) const { return values_[i * ids_.size() + j]; }

 private:
  std::vector<std::string> ids_;
  std::vector<double> values_;
};

/// CSV: the header row and the first column carry sample identifiers (the
/// top-left cell is ignored); the remaining cells form the matrix.
SimilarityMatrix parse_similarity_csv(std::istream& in);
SimilarityMatrix load_similarity_csv(const std::filesystem::path& path);

struct WeightedPair {
  Vertex u;
  Vertex v;
  double weight;
};

/// Positive off-diagonal pairs (u < v), heaviest first, ties by (u, v).
std::vector<WeightedPair> ranked_pairs(const SimilarityMatrix& sim);

/// Graph on all samples keeping the first `k` ranked pairs. Throws
/// InvariantError if `k` exceeds the positive pairs or the result is
/// disconnected.
Graph build_topk_graph(const SimilarityMatrix& sim, std::size_t k);
Graph build_topk_graph(const std::vector<std::string>& ids, const std::vector<WeightedPair>& ranked,
                       std::size_t k);

}  // namespace structinfo
