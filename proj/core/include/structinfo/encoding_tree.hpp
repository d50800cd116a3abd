#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "structinfo/graph.hpp"

namespace structinfo {

using NodeId = std::uint32_t;

/// Child indices from the root; the codeword of a node.
using NodePath = std::vector<std::size_t>;

std::string format_path(const NodePath& path);

struct TreeNode {
  NodeId parent;
  std::vector<NodeId> children;
  /// Sorted vertex members (the node's marker).
  std::vector<Vertex> marker;
  double volume = 0.0;
  double cut = 0.0;

  bool is_leaf() const { return children.empty(); }
  Vertex min_vertex() const { return marker.front(); }
};

/// Nested description of a tree's shape, independent of any graph.
struct TreeShape {
  std::optional<Vertex> vertex;
  std::vector<TreeShape> children;

  static TreeShape leaf(Vertex v) { return TreeShape{v, {}}; }
  static TreeShape internal(std::vector<TreeShape> children) { return TreeShape{std::nullopt, std::move(children)}; }
  friend bool operator==(const TreeShape&, const TreeShape&) = default;
};

/// Rooted partition tree over the vertices of a graph. Node 0 is the root;
/// node ids are preorder positions and are renumbered by structural edits.
///
/// Every node caches the volume and cut weight of its marker. The cache is
/// maintained by the edit operations; validate() recomputes it from scratch.
class EncodingTree {
 public:
  static constexpr NodeId kRoot = 0;
  static constexpr NodeId kNoNode = std::numeric_limits<NodeId>::max();

  /// Builds the tree with stats computed from `g`. The root marker is always
  /// the full vertex set; shape errors are left for validate() to report.
  static EncodingTree from_shape(const Graph& g, const TreeShape& shape);
  /// Same, over `n` anonymous items; stats are zero.
  static EncodingTree from_shape(std::size_t n, const TreeShape& shape);

  TreeShape shape() const;

  std::size_t vertex_count() const { return vertex_count_; }
  std::size_t node_count() const { return nodes_.size(); }
  NodeId root() const { return kRoot; }
  const TreeNode& node(NodeId id) const { return nodes_.at(id); }
  std::span<const TreeNode> nodes() const { return nodes_; }

  std::size_t depth(NodeId id) const;
  /// Longest root-to-leaf edge count; a star tree has height 1.
  std::size_t height() const { return subtree_height(kRoot); }
  std::size_t subtree_height(NodeId id) const;

  NodePath path(NodeId id) const;
  std::optional<NodeId> at(const NodePath& path) const;

  /// Leaf whose marker is {v}; throws InvariantError if absent.
  NodeId leaf_of(Vertex v) const;
  /// Deepest node whose marker contains both.
  NodeId common_ancestor(NodeId a, NodeId b) const;
  bool is_ancestor(NodeId ancestor, NodeId descendant) const;

  /// Total edge weight between the markers of two disjoint nodes.
  double cross_weight(const Graph& g, NodeId a, NodeId b) const;

  /// Recomputes every cached volume and cut from `g`.
  void refresh_stats(const Graph& g);
  /// Overwrites one node's cache. Used by incremental maintainers and tests.
  void set_stats(NodeId id, double volume, double cut);

  /// Fuses sibling nodes `a` and `b` into one node whose children are the
  /// children of both (a leaf contributes itself). If the fused node would be
  /// the parent's only child it is dissolved into the parent. Returns the
  /// id of the node now holding the union.
  NodeId merge(const Graph& g, NodeId a, NodeId b);
  /// Inserts a new parent above siblings `a` and `b`. Throws if they are the
  /// only two children (the new node would be a single child).
  NodeId combine(const Graph& g, NodeId a, NodeId b);
  /// Adds a fresh leaf for vertex `v` (== vertex_count()) as a child of
  /// `parent`, growing the vertex universe by one. Caches on the root path
  /// are updated from `g`, which must already contain `v`.
  NodeId attach_leaf(const Graph& g, NodeId parent);
  /// Moves leaf `leaf` under `new_parent` (which must not be a leaf). A
  /// parent left with a single child is spliced out.
  NodeId move_leaf(const Graph& g, NodeId leaf, NodeId new_parent);

  /// Same shape, markers and child order; cached stats equal within 1e-9.
  friend bool operator==(const EncodingTree& a, const EncodingTree& b);

 private:
  static EncodingTree build(std::size_t n, const TreeShape& shape);
  void require_siblings(NodeId a, NodeId b) const;
  void sort_children(NodeId id);
  NodeId compact(NodeId track);
  void rebuild_leaf_index();

  std::size_t vertex_count_ = 0;
  std::vector<TreeNode> nodes_;
  std::vector<NodeId> leaf_of_;
};

/// One-level tree: the root with every vertex as a leaf, in index order.
EncodingTree star_tree(const Graph& g);

/// Height-2 tree from a vertex partition. Parts are ordered by their smallest
/// member; singleton parts become depth-1 leaves. A single part equal to V
/// yields the star tree. Throws InvariantError if `parts` is not a partition.
EncodingTree from_partition(const Graph& g, const std::vector<VertexSet>& parts);
EncodingTree from_partition(const Graph& g, const std::vector<std::vector<Vertex>>& parts);

struct TreeViolation {
  /// One of "root", "partition", "leaf", "child-count", "stats".
  std::string clause;
  NodePath path;
  std::string message;
};

/// First violated invariant in preorder, or nullopt if the tree is valid.
std::optional<TreeViolation> validate(const Graph& g, const EncodingTree& t);
/// Structural checks only (no stats), over `n` items.
std::optional<TreeViolation> validate_structure(std::size_t n, const EncodingTree& t);
/// Throws InvariantError describing the first violation.
void require_valid(const Graph& g, const EncodingTree& t);

/// Codeword of vertex `v`.
NodePath codeword(const EncodingTree& t, Vertex v);

/// Depth-1 modules as sorted vertex lists (a depth-1 leaf is a singleton).
std::vector<std::vector<Vertex>> top_level_modules(const EncodingTree& t);

}  // namespace structinfo
