#include "structinfo/encoding_tree.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <iterator>

#include "structinfo/error.hpp"

namespace structinfo {

std::string format_path(const NodePath& path) {
  std::string s = "[";
  for (std::size_t i = 0; i < path.size(); ++i) {
    if (i) s += ',';
    s += std::to_string(path[i]);
  }
  return s + "]";
}

namespace {

std::vector<Vertex> sorted_union(const std::vector<Vertex>& a, const std::vector<Vertex>& b) {
  std::vector<Vertex> out;
  out.reserve(a.size() + b.size());
  std::merge(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

}  // namespace

EncodingTree EncodingTree::build(std::size_t n, const TreeShape& shape) {
  EncodingTree t;
  t.vertex_count_ = n;
  std::function<NodeId(const TreeShape&, NodeId)> add = [&](const TreeShape& s, NodeId parent) -> NodeId {
    const auto id = static_cast<NodeId>(t.nodes_.size());
    t.nodes_.push_back(TreeNode{parent, {}, {}, 0.0, 0.0});
    if (s.vertex) {
      t.nodes_[id].marker = {*s.vertex};
      return id;
    }
    std::vector<Vertex> marker;
    for (const TreeShape& c : s.children) {
      NodeId cid = add(c, id);
      t.nodes_[id].children.push_back(cid);
      marker = sorted_union(marker, t.nodes_[cid].marker);
    }
    t.nodes_[id].marker = std::move(marker);
    return id;
  };
  add(shape, kNoNode);
  // The root always stands for V, whatever its subtree covers.
  std::vector<Vertex> all(n);
  for (std::size_t v = 0; v < n; ++v) all[v] = static_cast<Vertex>(v);
  t.nodes_[kRoot].marker = std::move(all);
  t.rebuild_leaf_index();
  return t;
}

EncodingTree EncodingTree::from_shape(const Graph& g, const TreeShape& shape) {
  EncodingTree t = build(g.size(), shape);
  t.refresh_stats(g);
  return t;
}

EncodingTree EncodingTree::from_shape(std::size_t n, const TreeShape& shape) { return build(n, shape); }

TreeShape EncodingTree::shape() const {
  std::function<TreeShape(NodeId)> rec = [&](NodeId id) {
    const TreeNode& nd = nodes_[id];
    if (nd.is_leaf() && nd.marker.size() == 1 && id != kRoot) return TreeShape::leaf(nd.marker.front());
    std::vector<TreeShape> kids;
    for (NodeId c : nd.children) kids.push_back(rec(c));
    return TreeShape::internal(std::move(kids));
  };
  return rec(kRoot);
}

void EncodingTree::rebuild_leaf_index() {
  leaf_of_.assign(vertex_count_, kNoNode);
  for (NodeId id = 0; id < nodes_.size(); ++id) {
    const TreeNode& nd = nodes_[id];
    if (id != kRoot && nd.is_leaf() && nd.marker.size() == 1 && nd.marker.front() < vertex_count_ &&
        leaf_of_[nd.marker.front()] == kNoNode)
      leaf_of_[nd.marker.front()] = id;
  }
}

std::size_t EncodingTree::depth(NodeId id) const {
  std::size_t d = 0;
  for (NodeId cur = id; nodes_.at(cur).parent != kNoNode; cur = nodes_[cur].parent) ++d;
  return d;
}

std::size_t EncodingTree::subtree_height(NodeId id) const {
  std::size_t h = 0;
  for (NodeId c : nodes_.at(id).children) h = std::max(h, 1 + subtree_height(c));
  return h;
}

NodePath EncodingTree::path(NodeId id) const {
  NodePath p;
  for (NodeId cur = id; nodes_.at(cur).parent != kNoNode; cur = nodes_[cur].parent) {
    const auto& sib = nodes_[nodes_[cur].parent].children;
    p.push_back(static_cast<std::size_t>(std::find(sib.begin(), sib.end(), cur) - sib.begin()));
  }
  std::reverse(p.begin(), p.end());
  return p;
}

std::optional<NodeId> EncodingTree::at(const NodePath& path) const {
  NodeId cur = kRoot;
  for (std::size_t i : path) {
    if (i >= nodes_[cur].children.size()) return std::nullopt;
    cur = nodes_[cur].children[i];
  }
  return cur;
}

NodeId EncodingTree::leaf_of(Vertex v) const {
  if (v >= leaf_of_.size() || leaf_of_[v] == kNoNode)
    throw InvariantError("vertex " + std::to_string(v) + " has no leaf in the encoding tree");
  return leaf_of_[v];
}

bool EncodingTree::is_ancestor(NodeId ancestor, NodeId descendant) const {
  for (NodeId cur = descendant; cur != kNoNode; cur = nodes_[cur].parent)
    if (cur == ancestor) return true;
  return false;
}

NodeId EncodingTree::common_ancestor(NodeId a, NodeId b) const {
  std::size_t da = depth(a);
  std::size_t db = depth(b);
  while (da > db) {
    a = nodes_[a].parent;
    --da;
  }
  while (db > da) {
    b = nodes_[b].parent;
    --db;
  }
  while (a != b) {
    a = nodes_[a].parent;
    b = nodes_[b].parent;
  }
  return a;
}

double EncodingTree::cross_weight(const Graph& g, NodeId a, NodeId b) const {
  const auto& ma = nodes_.at(a).marker;
  const auto& mb = nodes_.at(b).marker;
  const auto& small = ma.size() <= mb.size() ? ma : mb;
  const auto& large = ma.size() <= mb.size() ? mb : ma;
  double w = 0.0;
  for (Vertex x : small)
    for (const Neighbor& nb : g.neighbors(x))
      if (std::binary_search(large.begin(), large.end(), nb.vertex)) w += nb.weight;
  return w;
}

void EncodingTree::refresh_stats(const Graph& g) {
  if (g.size() != vertex_count_) throw InvariantError("graph and encoding tree disagree on vertex count");
  for (auto& nd : nodes_) {
    nd.volume = 0.0;
    nd.cut = 0.0;
  }
  for (Vertex v = 0; v < vertex_count_; ++v) {
    if (leaf_of_[v] == kNoNode) continue;
    for (NodeId cur = leaf_of_[v]; cur != kNoNode; cur = nodes_[cur].parent) nodes_[cur].volume += g.degree(v);
  }
  // An edge crosses exactly the nodes strictly below the common ancestor of
  // its endpoints' leaves.
  for (const Edge& e : g.edges()) {
    NodeId lx = leaf_of_[e.u];
    NodeId ly = leaf_of_[e.v];
    if (lx == kNoNode || ly == kNoNode) continue;
    NodeId top = common_ancestor(lx, ly);
    for (NodeId cur = lx; cur != top; cur = nodes_[cur].parent) nodes_[cur].cut += e.weight;
    for (NodeId cur = ly; cur != top; cur = nodes_[cur].parent) nodes_[cur].cut += e.weight;
  }
}

void EncodingTree::set_stats(NodeId id, double volume, double cut) {
  nodes_.at(id).volume = volume;
  nodes_.at(id).cut = cut;
}

void EncodingTree::require_siblings(NodeId a, NodeId b) const {
  if (a >= nodes_.size() || b >= nodes_.size()) throw InvariantError("node id out of range");
  if (a == b || a == kRoot || b == kRoot || nodes_[a].parent != nodes_[b].parent)
    throw InvariantError("nodes " + format_path(path(a)) + " and " + format_path(path(b)) + " are not siblings");
}

void EncodingTree::sort_children(NodeId id) {
  auto& ch = nodes_[id].children;
  std::sort(ch.begin(), ch.end(), [&](NodeId x, NodeId y) { return nodes_[x].min_vertex() < nodes_[y].min_vertex(); });
}

NodeId EncodingTree::compact(NodeId track) {
  std::vector<TreeNode> out;
  out.reserve(nodes_.size());
  NodeId tracked = kNoNode;
  std::function<NodeId(NodeId, NodeId)> rec = [&](NodeId old, NodeId parent) -> NodeId {
    const auto id = static_cast<NodeId>(out.size());
    if (old == track) tracked = id;
    out.push_back(TreeNode{parent, {}, nodes_[old].marker, nodes_[old].volume, nodes_[old].cut});
    std::vector<NodeId> kids;
    for (NodeId c : nodes_[old].children) kids.push_back(rec(c, id));
    out[id].children = std::move(kids);
    return id;
  };
  rec(kRoot, kNoNode);
  nodes_ = std::move(out);
  rebuild_leaf_index();
  return tracked;
}

NodeId EncodingTree::merge(const Graph& g, NodeId a, NodeId b) {
  require_siblings(a, b);
  const NodeId p = nodes_[a].parent;
  const double w = cross_weight(g, a, b);

  auto contributed = [&](NodeId x) {
    return nodes_[x].is_leaf() ? std::vector<NodeId>{x} : nodes_[x].children;
  };
  std::vector<NodeId> kids = contributed(a);
  auto kb = contributed(b);
  kids.insert(kids.end(), kb.begin(), kb.end());

  auto& pch = nodes_[p].children;
  if (pch.size() == 2) {
    // The union is the whole parent marker: adopt the children directly.
    for (NodeId k : kids) nodes_[k].parent = p;
    pch = std::move(kids);
    sort_children(p);
    return compact(p);
  }

  const auto m = static_cast<NodeId>(nodes_.size());
  TreeNode fused{p, kids, sorted_union(nodes_[a].marker, nodes_[b].marker), nodes_[a].volume + nodes_[b].volume,
                 nodes_[a].cut + nodes_[b].cut - 2.0 * w};
  nodes_.push_back(std::move(fused));
  for (NodeId k : nodes_[m].children) nodes_[k].parent = m;
  auto& parent_children = nodes_[p].children;
  std::erase_if(parent_children, [&](NodeId x) { return x == a || x == b; });
  parent_children.push_back(m);
  sort_children(m);
  sort_children(p);
  return compact(m);
}

NodeId EncodingTree::combine(const Graph& g, NodeId a, NodeId b) {
  require_siblings(a, b);
  const NodeId p = nodes_[a].parent;
  if (nodes_[p].children.size() == 2)
    throw InvariantError("combining the only two children of " + format_path(path(p)) + " would create a single-child node");
  const double w = cross_weight(g, a, b);
  const auto c = static_cast<NodeId>(nodes_.size());
  nodes_.push_back(TreeNode{p, {a, b}, sorted_union(nodes_[a].marker, nodes_[b].marker),
                            nodes_[a].volume + nodes_[b].volume, nodes_[a].cut + nodes_[b].cut - 2.0 * w});
  nodes_[a].parent = c;
  nodes_[b].parent = c;
  auto& parent_children = nodes_[p].children;
  std::erase_if(parent_children, [&](NodeId x) { return x == a || x == b; });
  parent_children.push_back(c);
  sort_children(c);
  sort_children(p);
  return compact(c);
}

NodeId EncodingTree::attach_leaf(const Graph& g, NodeId parent) {
  if (parent >= nodes_.size() || (nodes_[parent].is_leaf() && parent != kRoot))
    throw InvariantError("cannot attach a leaf under a leaf");
  if (g.size() != vertex_count_ + 1) throw InvariantError("graph must contain exactly one new vertex");
  const auto v = static_cast<Vertex>(vertex_count_);
  ++vertex_count_;
  const auto leaf = static_cast<NodeId>(nodes_.size());
  nodes_.push_back(TreeNode{parent, {}, {v}, 0.0, 0.0});
  nodes_[parent].children.push_back(leaf);
  for (NodeId cur = parent; cur != kNoNode; cur = nodes_[cur].parent) nodes_[cur].marker.push_back(v);
  sort_children(parent);
  NodeId id = compact(leaf);
  refresh_stats(g);
  return id;
}

NodeId EncodingTree::move_leaf(const Graph& g, NodeId leaf, NodeId new_parent) {
  if (leaf == kRoot || !nodes_.at(leaf).is_leaf()) throw InvariantError("move_leaf expects a leaf");
  if (nodes_.at(new_parent).is_leaf() || is_ancestor(leaf, new_parent))
    throw InvariantError("move_leaf target must be an internal node");
  const NodeId old_parent = nodes_[leaf].parent;
  if (old_parent == new_parent) return leaf;
  const Vertex v = nodes_[leaf].marker.front();

  std::erase(nodes_[old_parent].children, leaf);
  for (NodeId cur = old_parent; cur != kNoNode; cur = nodes_[cur].parent) std::erase(nodes_[cur].marker, v);
  nodes_[new_parent].children.push_back(leaf);
  nodes_[leaf].parent = new_parent;
  for (NodeId cur = new_parent; cur != kNoNode; cur = nodes_[cur].parent) {
    auto& mk = nodes_[cur].marker;
    mk.insert(std::upper_bound(mk.begin(), mk.end(), v), v);
  }
  sort_children(new_parent);

  if (nodes_[old_parent].children.size() == 1) {
    const NodeId only = nodes_[old_parent].children.front();
    if (!nodes_[only].is_leaf()) {
      nodes_[old_parent].children = nodes_[only].children;
      for (NodeId k : nodes_[old_parent].children) nodes_[k].parent = old_parent;
      nodes_[only].children.clear();
      nodes_[only].parent = kNoNode;
      sort_children(old_parent);
    } else if (old_parent != kRoot) {
      const NodeId gp = nodes_[old_parent].parent;
      std::replace(nodes_[gp].children.begin(), nodes_[gp].children.end(), old_parent, only);
      nodes_[only].parent = gp;
      sort_children(gp);
    }
  }
  for (NodeId cur = new_parent; cur != kNoNode; cur = nodes_[cur].parent)
    if (nodes_[cur].parent != kNoNode) sort_children(nodes_[cur].parent);
  NodeId id = compact(leaf);
  refresh_stats(g);
  return id;
}

bool operator==(const EncodingTree& a, const EncodingTree& b) {
  if (a.vertex_count_ != b.vertex_count_ || a.nodes_.size() != b.nodes_.size()) return false;
  auto near = [](double x, double y) { return std::abs(x - y) <= 1e-9 * std::max(1.0, std::abs(y)); };
  for (std::size_t i = 0; i < a.nodes_.size(); ++i) {
    const TreeNode& x = a.nodes_[i];
    const TreeNode& y = b.nodes_[i];
    if (x.parent != y.parent || x.children != y.children || x.marker != y.marker || !near(x.volume, y.volume) ||
        !near(x.cut, y.cut))
      return false;
  }
  return true;
}

EncodingTree star_tree(const Graph& g) {
  std::vector<TreeShape> leaves;
  leaves.reserve(g.size());
  for (Vertex v = 0; v < g.size(); ++v) leaves.push_back(TreeShape::leaf(v));
  return EncodingTree::from_shape(g, TreeShape::internal(std::move(leaves)));
}

EncodingTree from_partition(const Graph& g, const std::vector<std::vector<Vertex>>& parts) {
  std::vector<int> owner(g.size(), -1);
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (parts[i].empty()) throw InvariantError("partition has an empty part");
    for (Vertex v : parts[i]) {
      if (v >= g.size()) throw InvariantError("partition names vertex " + std::to_string(v) + " outside the graph");
      if (owner[v] != -1) throw InvariantError("partition parts overlap at vertex '" + g.id(v) + "'");
      owner[v] = static_cast<int>(i);
    }
  }
  for (Vertex v = 0; v < g.size(); ++v)
    if (owner[v] == -1) throw InvariantError("partition misses vertex '" + g.id(v) + "'");
  if (parts.size() == 1) return star_tree(g);

  std::vector<std::vector<Vertex>> sorted = parts;
  for (auto& p : sorted) std::sort(p.begin(), p.end());
  std::sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) { return a.front() < b.front(); });
  std::vector<TreeShape> modules;
  for (const auto& p : sorted) {
    if (p.size() == 1) {
      modules.push_back(TreeShape::leaf(p.front()));
      continue;
    }
    std::vector<TreeShape> leaves;
    for (Vertex v : p) leaves.push_back(TreeShape::leaf(v));
    modules.push_back(TreeShape::internal(std::move(leaves)));
  }
  return EncodingTree::from_shape(g, TreeShape::internal(std::move(modules)));
}

EncodingTree from_partition(const Graph& g, const std::vector<VertexSet>& parts) {
  std::vector<std::vector<Vertex>> lists;
  lists.reserve(parts.size());
  for (const auto& p : parts) {
    if (p.universe() != g.size()) throw InvariantError("partition part has the wrong universe");
    lists.push_back(p.members());
  }
  return from_partition(g, lists);
}

namespace {

std::optional<TreeViolation> check_structure(std::size_t n, const EncodingTree& t) {
  auto fail = [&](std::string clause, NodeId id, std::string msg) {
    return TreeViolation{std::move(clause), t.path(id), std::move(msg)};
  };
  const TreeNode& root = t.node(EncodingTree::kRoot);
  if (t.vertex_count() != n) return fail("root", EncodingTree::kRoot, "tree is over a different vertex count");
  if (root.marker.size() != n) return fail("root", EncodingTree::kRoot, "root marker is not the full vertex set");
  for (std::size_t v = 0; v < n; ++v)
    if (root.marker[v] != v) return fail("root", EncodingTree::kRoot, "root marker is not the full vertex set");

  std::function<std::optional<TreeViolation>(NodeId)> rec = [&](NodeId id) -> std::optional<TreeViolation> {
    const TreeNode& nd = t.node(id);
    if (nd.is_leaf()) {
      if (id == EncodingTree::kRoot) return fail("child-count", id, "root has no children");
      if (nd.marker.size() != 1) return fail("leaf", id, "leaf marker is not a singleton");
      return std::nullopt;
    }
    std::vector<Vertex> uni;
    for (NodeId c : nd.children) {
      const auto& cm = t.node(c).marker;
      if (cm.empty()) return fail("partition", id, "child with an empty marker");
      uni.insert(uni.end(), cm.begin(), cm.end());
    }
    std::sort(uni.begin(), uni.end());
    if (std::adjacent_find(uni.begin(), uni.end()) != uni.end())
      return fail("partition", id, "children markers overlap at vertex " + std::to_string(*std::adjacent_find(uni.begin(), uni.end())));
    if (uni != nd.marker) return fail("partition", id, "children markers do not cover the node marker");
    if (nd.children.size() < 2) return fail("child-count", id, "internal node with a single child");
    for (NodeId c : nd.children)
      if (auto v = rec(c)) return v;
    return std::nullopt;
  };
  return rec(EncodingTree::kRoot);
}

bool close(double a, double b) { return std::abs(a - b) <= 1e-9 * std::max(1.0, std::abs(b)); }

}  // namespace

std::optional<TreeViolation> validate_structure(std::size_t n, const EncodingTree& t) { return check_structure(n, t); }

std::optional<TreeViolation> validate(const Graph& g, const EncodingTree& t) {
  if (auto v = check_structure(g.size(), t)) return v;
  EncodingTree fresh = t;
  fresh.refresh_stats(g);
  for (NodeId id = 0; id < t.node_count(); ++id) {
    const TreeNode& have = t.node(id);
    const TreeNode& want = fresh.node(id);
    if (!close(have.volume, want.volume) || !close(have.cut, want.cut))
      return TreeViolation{"stats", t.path(id),
                           "cached (vol, cut) = (" + std::to_string(have.volume) + ", " + std::to_string(have.cut) +
                               ") but graph gives (" + std::to_string(want.volume) + ", " +
                               std::to_string(want.cut) + ")"};
  }
  return std::nullopt;
}

void require_valid(const Graph& g, const EncodingTree& t) {
  if (auto v = validate(g, t))
    throw InvariantError("invalid encoding tree: " + v->clause + " violation at " + format_path(v->path) + ": " +
                         v->message);
}

NodePath codeword(const EncodingTree& t, Vertex v) {
  if (v >= t.vertex_count()) throw InvariantError("unknown vertex " + std::to_string(v));
  return t.path(t.leaf_of(v));
}

std::vector<std::vector<Vertex>> top_level_modules(const EncodingTree& t) {
  std::vector<std::vector<Vertex>> out;
  for (NodeId c : t.node(EncodingTree::kRoot).children) out.push_back(t.node(c).marker);
  return out;
}

}  // namespace structinfo
