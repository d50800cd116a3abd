#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <initializer_list>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace structinfo {

/// Dense internal vertex index, 0..n-1.
using Vertex = std::uint32_t;

/// Membership set over the dense vertex indices of one graph.
class VertexSet {
 public:
  VertexSet() = default;
  explicit VertexSet(std::size_t universe) : bits_(universe, false) {}
  VertexSet(std::size_t universe, std::initializer_list<Vertex> members);
  static VertexSet from_members(std::size_t universe, std::span<const Vertex> members);
  static VertexSet full(std::size_t universe);

  bool contains(Vertex v) const { return v < bits_.size() && bits_[v]; }
  void insert(Vertex v);
  void erase(Vertex v);

  std::size_t size() const { return count_; }
  std::size_t universe() const { return bits_.size(); }
  bool empty() const { return count_ == 0; }

  /// Sorted member list.
  std::vector<Vertex> members() const;
  VertexSet complement() const;

  friend bool operator==(const VertexSet&, const VertexSet&) = default;

 private:
  std::vector<bool> bits_;
  std::size_t count_ = 0;
};

/// Probability vector; validated on construction.
class Distribution {
 public:
  explicit Distribution(std::vector<double> probabilities);

  std::span<const double> probabilities() const { return p_; }
  std::size_t size() const { return p_.size(); }
  double operator[](std::size_t i) const { return p_[i]; }

 private:
  std::vector<double> p_;
};

struct Edge {
  Vertex u;
  Vertex v;
  double weight;
};

struct Neighbor {
  Vertex vertex;
  double weight;
};

/// Weighted undirected connected graph. Immutable once built.
///
/// Construction enforces: n >= 2, at least one edge, no self-loops, no
/// duplicate edges, positive weights, a single connected component.
class Graph {
 public:
  /// Validates and builds. Edge endpoints index into `ids`.
  /// Throws InvariantError on any violated invariant.
  static Graph create(std::vector<std::string> ids, std::vector<Edge> edges);

  std::size_t size() const { return ids_.size(); }
  std::size_t edge_count() const { return edges_.size(); }

  const std::vector<std::string>& ids() const { return ids_; }
  const std::string& id(Vertex v) const { return ids_[v]; }
  std::optional<Vertex> find(std::string_view id) const;

  /// Edges with u < v, in insertion order.
  std::span<const Edge> edges() const { return edges_; }
  std::span<const Neighbor> neighbors(Vertex v) const;

  double degree(Vertex v) const { return degree_[v]; }
  std::span<const double> degrees() const { return degree_; }
  double volume() const { return volume_; }
  double volume(const VertexSet& s) const;

  /// Weight of the edge {u, v}, 0 if absent.
  double edge_weight(Vertex u, Vertex v) const;

  /// Copy with an extra vertex attached by the given (existing vertex, weight)
  /// edges.
  Graph with_vertex(std::string id, std::span<const Neighbor> attachments) const;

 private:
  Graph() = default;

  std::vector<std::string> ids_;
  std::unordered_map<std::string, Vertex> index_;
  std::vector<Edge> edges_;
  std::vector<std::size_t> offsets_;
  std::vector<Neighbor> adjacency_;
  std::vector<double> degree_;
  double volume_ = 0.0;
};

/// Parses the edge-list format: `<u> <v> [<weight>]` per line, whitespace
/// separated, `#` comments and blank lines ignored. Vertex order is first
/// appearance order.
Graph parse_edge_list(std::istream& in);
Graph load_graph(const std::filesystem::path& path);
void write_edge_list(std::ostream& out, const Graph& g);

/// Total weight of edges with exactly one endpoint in `s`.
double cut_weight(const Graph& g, const VertexSet& s);

/// cut(S) / min(vol(S), vol(V \ S)).
double conductance_subset(const Graph& g, const VertexSet& s);

struct ConductanceResult {
  double value;
  VertexSet argmin;
};

inline constexpr std::size_t kDefaultConductanceLimit = 24;

/// Exact conductance by enumerating every nonempty proper subset.
/// Ties go to the lexicographically smallest sorted member list.
ConductanceResult conductance_exact(const Graph& g,
                                    std::size_t max_vertices = kDefaultConductanceLimit);

/// -sum p log2 p, with 0 log 0 = 0.
double shannon_entropy(const Distribution& p);

/// Shannon entropy of the stationary distribution d_v / vol(G).
double one_dim_entropy(const Graph& g);

}  // namespace structinfo
