#pragma once

#include <cstddef>
#include <optional>
#include <string_view>
#include <vector>

#include "structinfo/encoding_tree.hpp"
#include "structinfo/graph.hpp"

namespace structinfo {

enum class MoveKind {
  /// Fuse two sibling modules into one; their children become siblings.
  merge,
  /// Insert a new common parent above two siblings.
  combine,
};

std::string_view to_string(MoveKind kind);

struct TraceStep {
  MoveKind kind;
  NodePath a;
  NodePath b;
  double delta;
};

struct OptimizeResult {
  EncodingTree tree;
  double entropy;
  std::vector<TraceStep> trace;
};

/// Entropy decrease H^T - H^T' of merging siblings `a` and `b`, computed from
/// the affected terms only.
double merge_delta(const Graph& g, const EncodingTree& t, NodeId a, NodeId b);
/// Entropy decrease of inserting a common parent above siblings `a` and `b`.
double combine_delta(const Graph& g, const EncodingTree& t, NodeId a, NodeId b);

/// Copy of `t` with `a` and `b` merged. Throws InvariantError for
/// non-siblings or if the result would exceed `height_cap`.
EncodingTree merge_apply(const Graph& g, const EncodingTree& t, NodeId a, NodeId b, std::size_t height_cap);
/// Copy of `t` with a new parent above `a` and `b`. Same errors.
EncodingTree combine_apply(const Graph& g, const EncodingTree& t, NodeId a, NodeId b, std::size_t height_cap);

/// A scored candidate move between two siblings.
struct Move {
  MoveKind kind;
  NodeId a;
  NodeId b;
  double cross_weight;
  double delta;
};

/// Candidate moves for the current tree: every sibling pair with positive
/// cross weight, each kind allowed under the height cap. Sorted by
/// (min vertex of a, min vertex of b, kind), with min(a) < min(b).
struct GreedyState {
  EncodingTree tree;
  std::vector<Move> candidates;
};

struct GreedyOptions {
  std::size_t height_cap = 2;
  bool allow_combine = false;
  /// When set, only sibling pairs inside the subtree with this exact marker
  /// are considered.
  std::optional<std::vector<Vertex>> scope;
  /// Recompute H^T before and after every move and fail if the local delta
  /// disagrees by more than 1e-9. Quadratic; meant for tests.
  bool verify_deltas = false;
};

inline constexpr double kDeltaTolerance = 1e-12;

/// Scores all candidates of `tree` under `opts`.
GreedyState score_candidates(const Graph& g, EncodingTree tree, const GreedyOptions& opts);

/// Greedy descent from `start`: repeatedly applies the candidate with the
/// largest delta while it exceeds kDeltaTolerance. Ties keep the earliest
/// candidate in GreedyState order.
OptimizeResult greedy_minimize(const Graph& g, EncodingTree start, const GreedyOptions& opts);

/// Height-2 greedy from the star tree using merges only.
OptimizeResult minimize_2d(const Graph& g);

/// Height-capped greedy from the star tree using merges and combines.
OptimizeResult minimize_kd(const Graph& g, std::size_t height_cap);

/// H^1(G) minus the greedy height-capped entropy.
double decoding_info_k(const Graph& g, std::size_t height_cap);

}  // namespace structinfo
