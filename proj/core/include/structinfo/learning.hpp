#pragma once

#include <cstddef>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "structinfo/encoding_tree.hpp"
#include "structinfo/graph.hpp"
#include "structinfo/optimizer.hpp"
#include "structinfo/similarity.hpp"
#include "structinfo/tree_io.hpp"

namespace structinfo {

using FeatureSet = std::set<std::string, std::less<>>;

struct FeatureEntry {
  FeatureSet syntax;
  FeatureSet semantics;

  FeatureSet all() const;
  friend bool operator==(const FeatureEntry&, const FeatureEntry&) = default;
};

/// Which features feed an abstraction tree.
enum class FeatureBasis { syntax, all };

std::string_view to_string(FeatureBasis basis);
FeatureBasis parse_basis(std::string_view name);

/// Feature sets keyed by vertex id.
class FeatureCatalog {
 public:
  void set(std::string id, FeatureEntry entry);
  bool contains(std::string_view id) const { return entries_.find(id) != entries_.end(); }
  /// Throws InvariantError for a missing id.
  const FeatureEntry& at(std::string_view id) const;
  FeatureSet features(std::string_view id, FeatureBasis basis) const;
  const std::map<std::string, FeatureEntry, std::less<>>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }

  friend bool operator==(const FeatureCatalog&, const FeatureCatalog&) = default;

 private:
  std::map<std::string, FeatureEntry, std::less<>> entries_;
};

/// `{"<id>": {"syntax": [...], "semantics": [...]}, ...}`; either list may be
/// omitted. A blank document is an empty catalog.
FeatureCatalog parse_catalog(std::string_view doc);
FeatureCatalog load_catalog(const std::filesystem::path& path);
std::string serialize_catalog(const FeatureCatalog& catalog);

/// Decoder tree annotated with the common features of every node's members.
struct KnowledgeTree {
  EncodingTree tree;
  /// Indexed by node id of `tree`.
  std::vector<FeatureSet> features;
};

/// Throws InvariantError if a vertex of `g` has no catalog entry.
KnowledgeTree knowledge_tree(const Graph& g, const EncodingTree& t, const FeatureCatalog& catalog,
                             FeatureBasis basis = FeatureBasis::all);

struct AbstractionNode {
  std::size_t parent;
  std::vector<std::size_t> children;
  FeatureSet features;
  /// Shallowest knowledge-tree node of the contracted group.
  NodeId source;
  /// Every knowledge-tree node contracted into this one, in preorder.
  std::vector<NodeId> absorbed;
  /// Marker of `source`, which contains the markers of all absorbed nodes.
  std::vector<Vertex> marker;
};

/// Knowledge tree with equal-feature parent/child edges contracted.
struct AbstractionTree {
  static constexpr std::size_t kNone = static_cast<std::size_t>(-1);

  /// Index 0 is the root; preorder.
  std::vector<AbstractionNode> nodes;

  std::size_t depth(std::size_t i) const;
  NodePath path(std::size_t i) const;
};

AbstractionTree abstraction_tree(const KnowledgeTree& kt);

/// First node (preorder) whose features do not strictly contain its
/// parent's, with a description; nullopt if strictly growing everywhere.
std::optional<std::string> strict_growth_violation(const AbstractionTree& at);

/// Decoded learning state over a similarity graph.
struct DataSpace {
  Graph graph;
  EncodingTree decoder;
  FeatureCatalog catalog;
  /// Number of top-ranked similarity pairs kept as edges.
  std::size_t construction_k = 0;
  /// Height cap used by the decoder.
  std::size_t height = 2;
  FeatureBasis basis = FeatureBasis::syntax;
  /// Over all features.
  KnowledgeTree knowledge;
  /// Over `basis` features.
  AbstractionTree abstractions;
};

/// Builds the knowledge and abstraction trees of a space from its decoder and
/// catalog.
DataSpace make_space(Graph graph, EncodingTree decoder, FeatureCatalog catalog, std::size_t construction_k,
                     std::size_t height, FeatureBasis basis = FeatureBasis::syntax);

/// Knowledge-tree features from the leaf of `v` up to the root.
std::vector<FeatureSet> flow_of_abstractions(const DataSpace& ds, Vertex v);

/// Features at the branching node of `u` and `v`. Throws for u == v.
FeatureSet least_common_abstraction(const DataSpace& ds, Vertex u, Vertex v);

struct AbstractionChoice {
  std::size_t node;
  /// True when nothing matched and the root was taken.
  bool fallback;
  /// Decoder node the new point joins: the abstraction's source, or its
  /// parent when the source is a leaf.
  NodeId module;
};

/// Deepest abstraction with nonempty features contained in `features`; ties
/// by larger feature count, then smaller path. Falls back to the root.
AbstractionChoice choose_abstraction(const DataSpace& ds, const FeatureSet& features);

/// Minimizer used to decode a graph during construction sweeps.
using DecoderFn = std::function<OptimizeResult(const Graph&)>;

struct SweepRow {
  std::size_t k;
  double decoding;
};

struct BuildOptions {
  FeatureBasis basis = FeatureBasis::syntax;
  /// Defaults to minimize_kd at the requested height.
  DecoderFn decoder;
};

struct BuildResult {
  DataSpace space;
  /// One row per connected κ, ascending.
  std::vector<SweepRow> sweep;
};

/// Sweeps the number of kept top pairs over every value yielding a connected
/// graph and keeps the one with the largest decoding information (ties: the
/// smallest). Throws InvariantError if no value yields a connected graph or
/// the catalog misses a sample.
BuildResult build_data_space(const SimilarityMatrix& sim, const FeatureCatalog& catalog, std::size_t height,
                             const BuildOptions& opts = {});

struct InsertRequest {
  std::string id;
  /// Similarity to existing vertices by id; absent ids count as 0.
  std::map<std::string, double, std::less<>> sims;
  FeatureEntry features;
};

/// `{"id": ..., "sims": {id: weight}, "syntax": [...], "semantics": [...]}`.
InsertRequest parse_insert_request(std::string_view doc);

struct InsertReport {
  AbstractionChoice choice;
  /// Features of the chosen abstraction (empty on fallback).
  FeatureSet abstraction_features;
  NodePath abstraction_path;
  std::vector<SweepRow> sweep;
  std::size_t chosen_k = 0;
  /// Decoder node that holds the new vertex as a child, after optimization.
  NodePath final_module;
  std::vector<Vertex> final_members;
  /// Decoder entropy before insertion, and on the updated graph after.
  double entropy_before = 0.0;
  double entropy_after = 0.0;
  /// True when local placement lost to the star tree and a global re-decode
  /// was used.
  bool redecoded = false;
};

struct InsertResult {
  DataSpace space;
  InsertReport report;
};

/// Adds one point: picks a module by abstraction matching on syntax
/// features, sweeps the number of attachment edges, then moves the point
/// between that module and its sibling modules and re-optimizes inside the
/// chosen module. Throws InvariantError for a duplicate id, unknown or
/// negative similarities, or no positive similarity.
InsertResult insert_point(const DataSpace& ds, const InsertRequest& request, const DecoderFn& redecoder = {});

/// Label whose token set has the largest mean sample value (missing tokens
/// read 0); ties go to the earliest label. Throws InvariantError for an
/// empty token set or an empty list.
std::string classify_by_abstraction(const std::vector<std::pair<std::string, FeatureSet>>& sets,
                                    const std::map<std::string, double, std::less<>>& sample);

/// Space file: vertices, edges, catalog, parameters and decoder tree.
std::string serialize_space(const DataSpace& ds);
DataSpace deserialize_space(std::string_view doc);

DocNode knowledge_doc(const Graph& g, const KnowledgeTree& kt);
DocNode abstraction_doc(const Graph& g, const EncodingTree& decoder, const AbstractionTree& at);

}  // namespace structinfo
