#include "structinfo/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <tuple>
#include <utility>

#include "structinfo/entropy.hpp"
#include "structinfo/error.hpp"

namespace structinfo {

std::string_view to_string(MoveKind kind) { return kind == MoveKind::merge ? "merge" : "combine"; }

namespace {

/// g * log2(parent_volume / volume), the unnormalized information term of a
/// node with cut g and volume V under a parent of the given volume.
double term(double cut, double volume, double parent_volume) { return cut * std::log2(parent_volume / volume); }

void require_siblings(const EncodingTree& t, NodeId a, NodeId b) {
  if (a >= t.node_count() || b >= t.node_count() || a == b || a == EncodingTree::kRoot || b == EncodingTree::kRoot ||
      t.node(a).parent != t.node(b).parent)
    throw InvariantError("merge/combine operands must be distinct siblings");
}

/// Term sum of a node and its children before the move.
double terms_below(const EncodingTree& t, NodeId x, double parent_volume) {
  const TreeNode& nd = t.node(x);
  double s = term(nd.cut, nd.volume, parent_volume);
  for (NodeId c : nd.children) s += term(t.node(c).cut, t.node(c).volume, nd.volume);
  return s;
}

double merge_delta_with(const Graph& g, const EncodingTree& t, NodeId a, NodeId b, double w) {
  const TreeNode& na = t.node(a);
  const TreeNode& nb = t.node(b);
  const double parent_volume = t.node(na.parent).volume;
  const double before = terms_below(t, a, parent_volume) + terms_below(t, b, parent_volume);

  const double vm = na.volume + nb.volume;
  const double gm = na.cut + nb.cut - 2.0 * w;
  double after = term(gm, vm, parent_volume);
  for (NodeId x : {a, b}) {
    const TreeNode& nx = t.node(x);
    if (nx.is_leaf()) {
      after += term(nx.cut, nx.volume, vm);
    } else {
      for (NodeId c : nx.children) after += term(t.node(c).cut, t.node(c).volume, vm);
    }
  }
  return (before - after) / g.volume();
}

double combine_delta_with(const Graph& g, const EncodingTree& t, NodeId a, NodeId b, double w) {
  const TreeNode& na = t.node(a);
  const TreeNode& nb = t.node(b);
  const double parent_volume = t.node(na.parent).volume;
  const double before = term(na.cut, na.volume, parent_volume) + term(nb.cut, nb.volume, parent_volume);
  const double vc = na.volume + nb.volume;
  const double gc = na.cut + nb.cut - 2.0 * w;
  const double after = term(gc, vc, parent_volume) + term(na.cut, na.volume, vc) + term(nb.cut, nb.volume, vc);
  return (before - after) / g.volume();
}

std::size_t height_after_merge(const EncodingTree& t, NodeId a, NodeId b) {
  std::size_t h = t.height();
  if (t.node(t.node(a).parent).children.size() == 2) return h;
  if (t.node(a).is_leaf() || t.node(b).is_leaf()) h = std::max(h, t.depth(a) + 1);
  return h;
}

std::size_t height_after_combine(const EncodingTree& t, NodeId a, NodeId b) {
  const std::size_t d = t.depth(a) + 1;
  return std::max({t.height(), d + t.subtree_height(a), d + t.subtree_height(b)});
}

std::optional<NodeId> find_by_marker(const EncodingTree& t, const std::vector<Vertex>& marker) {
  for (NodeId id = 0; id < t.node_count(); ++id)
    if (t.node(id).marker == marker) return id;
  return std::nullopt;
}

}  // namespace

double merge_delta(const Graph& g, const EncodingTree& t, NodeId a, NodeId b) {
  require_siblings(t, a, b);
  return merge_delta_with(g, t, a, b, t.cross_weight(g, a, b));
}

double combine_delta(const Graph& g, const EncodingTree& t, NodeId a, NodeId b) {
  require_siblings(t, a, b);
  return combine_delta_with(g, t, a, b, t.cross_weight(g, a, b));
}

EncodingTree merge_apply(const Graph& g, const EncodingTree& t, NodeId a, NodeId b, std::size_t height_cap) {
  require_siblings(t, a, b);
  if (height_after_merge(t, a, b) > height_cap)
    throw InvariantError("merge would exceed height cap " + std::to_string(height_cap));
  EncodingTree out = t;
  out.merge(g, a, b);
  return out;
}

EncodingTree combine_apply(const Graph& g, const EncodingTree& t, NodeId a, NodeId b, std::size_t height_cap) {
  require_siblings(t, a, b);
  if (height_after_combine(t, a, b) > height_cap)
    throw InvariantError("combine would exceed height cap " + std::to_string(height_cap));
  EncodingTree out = t;
  out.combine(g, a, b);
  return out;
}

GreedyState score_candidates(const Graph& g, EncodingTree tree, const GreedyOptions& opts) {
  const EncodingTree& t = tree;
  std::optional<NodeId> scope;
  if (opts.scope) {
    scope = find_by_marker(t, *opts.scope);
    if (!scope) throw InvariantError("greedy scope marker does not name a node of the tree");
  }

  std::vector<std::size_t> depth(t.node_count(), 0);
  for (NodeId id = 1; id < t.node_count(); ++id) depth[id] = depth[t.node(id).parent] + 1;

  // Cross weights between siblings: each edge joins exactly the two children
  // of its endpoints' branch node.
  std::map<std::pair<NodeId, NodeId>, double> cross;
  for (const Edge& e : g.edges()) {
    NodeId x = t.leaf_of(e.u);
    NodeId y = t.leaf_of(e.v);
    while (depth[x] > depth[y]) x = t.node(x).parent;
    while (depth[y] > depth[x]) y = t.node(y).parent;
    while (t.node(x).parent != t.node(y).parent) {
      x = t.node(x).parent;
      y = t.node(y).parent;
    }
    if (scope && !t.is_ancestor(*scope, t.node(x).parent)) continue;
    if (t.node(x).min_vertex() > t.node(y).min_vertex()) std::swap(x, y);
    cross[{x, y}] += e.weight;
  }

  GreedyState state{std::move(tree), {}};
  const EncodingTree& st = state.tree;
  for (const auto& [pair, w] : cross) {
    if (!(w > 0.0)) continue;
    auto [a, b] = pair;
    if (height_after_merge(st, a, b) <= opts.height_cap)
      state.candidates.push_back({MoveKind::merge, a, b, w, merge_delta_with(g, st, a, b, w)});
    const bool same_as_merge = st.node(a).is_leaf() && st.node(b).is_leaf();
    const bool covers_parent = st.node(st.node(a).parent).children.size() == 2;
    if (opts.allow_combine && !same_as_merge && !covers_parent && height_after_combine(st, a, b) <= opts.height_cap)
      state.candidates.push_back({MoveKind::combine, a, b, w, combine_delta_with(g, st, a, b, w)});
  }
  std::sort(state.candidates.begin(), state.candidates.end(), [&](const Move& x, const Move& y) {
    auto key = [&](const Move& m) {
      return std::tuple(st.node(m.a).min_vertex(), st.node(m.b).min_vertex(), static_cast<int>(m.kind));
    };
    return key(x) < key(y);
  });
  return state;
}

OptimizeResult greedy_minimize(const Graph& g, EncodingTree start, const GreedyOptions& opts) {
  require_valid(g, start);
  if (start.height() > opts.height_cap) throw InvariantError("starting tree already exceeds the height cap");
  std::vector<TraceStep> trace;
  EncodingTree tree = std::move(start);
  for (;;) {
    GreedyState state = score_candidates(g, std::move(tree), opts);
    tree = std::move(state.tree);
    const Move* best = nullptr;
    for (const Move& m : state.candidates)
      if (m.delta > kDeltaTolerance && (!best || m.delta > best->delta + kDeltaTolerance)) best = &m;
    if (!best) break;

    const double before = opts.verify_deltas ? structural_entropy(g, tree) : 0.0;
    TraceStep step{best->kind, tree.path(best->a), tree.path(best->b), best->delta};
    if (best->kind == MoveKind::merge)
      tree.merge(g, best->a, best->b);
    else
      tree.combine(g, best->a, best->b);
    if (opts.verify_deltas) {
      const double after = structural_entropy(g, tree);
      if (std::abs((before - after) - step.delta) > 1e-9)
        throw InvariantError("local delta " + std::to_string(step.delta) + " disagrees with recomputed " +
                             std::to_string(before - after));
    }
    trace.push_back(std::move(step));
  }
  const double h = structural_entropy(g, tree);
  return {std::move(tree), h, std::move(trace)};
}

OptimizeResult minimize_2d(const Graph& g) {
  GreedyOptions opts;
  opts.height_cap = 2;
  opts.allow_combine = false;
  return greedy_minimize(g, star_tree(g), opts);
}

OptimizeResult minimize_kd(const Graph& g, std::size_t height_cap) {
  if (height_cap < 2) throw InvariantError("height cap must be at least 2");
  GreedyOptions opts;
  opts.height_cap = height_cap;
  opts.allow_combine = true;
  return greedy_minimize(g, star_tree(g), opts);
}

double decoding_info_k(const Graph& g, std::size_t height_cap) {
  return one_dim_entropy(g) - minimize_kd(g, height_cap).entropy;
}

}  // namespace structinfo
