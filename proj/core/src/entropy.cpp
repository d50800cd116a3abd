#include "structinfo/entropy.hpp"

#include <cmath>

#include "structinfo/error.hpp"

namespace structinfo {

double ModuleFunction::operator()(const Graph& g, std::span<const Vertex> marker) const {
  switch (kind_) {
    case Kind::volume: {
      double vol = 0.0;
      for (Vertex v : marker) vol += g.degree(v);
      return vol;
    }
    case Kind::cut:
      return cut_weight(g, VertexSet::from_members(g.size(), marker));
    case Kind::custom: {
      const double x = fn_(marker);
      if (!std::isfinite(x) || x < 0.0)
        throw InvariantError("module function '" + name_ + "' returned a negative or non-finite value");
      return x;
    }
  }
  return 0.0;
}

namespace {

/// -log2(V_alpha / V_parent) for a non-root node.
double node_information(const EncodingTree& t, NodeId id) {
  const TreeNode& nd = t.node(id);
  return -std::log2(nd.volume / t.node(nd.parent).volume);
}

}  // namespace

double structural_entropy(const Graph& g, const EncodingTree& t) {
  require_valid(g, t);
  double h = 0.0;
  for (NodeId id = 1; id < t.node_count(); ++id) h += t.node(id).cut * node_information(t, id);
  return h / g.volume();
}

double structural_entropy_edgewise(const Graph& g, const EncodingTree& t) {
  require_valid(g, t);
  double total = 0.0;
  auto walk = [&](Vertex from, Vertex to, double w) {
    const NodeId target = t.leaf_of(to);
    const NodeId branch = t.common_ancestor(t.leaf_of(from), target);
    double info = 0.0;
    for (NodeId cur = target; cur != branch; cur = t.node(cur).parent) info += node_information(t, cur);
    total += w * info;
  };
  for (const Edge& e : g.edges()) {
    walk(e.u, e.v, e.weight);
    walk(e.v, e.u, e.weight);
  }
  return total / g.volume();
}

double module_entropy(const Graph& g, const EncodingTree& t, const ModuleFunction& f) {
  require_valid(g, t);
  double h = 0.0;
  for (NodeId id = 1; id < t.node_count(); ++id) h += f(g, t.node(id).marker) * node_information(t, id);
  return h / g.volume();
}

double distribution_entropy(const Distribution& p, const EncodingTree& t) {
  if (auto v = validate_structure(p.size(), t))
    throw InvariantError("invalid item tree: " + v->clause + " violation at " + format_path(v->path) + ": " + v->message);
  std::vector<double> mass(t.node_count(), 0.0);
  for (NodeId id = 0; id < t.node_count(); ++id)
    for (Vertex i : t.node(id).marker) mass[id] += p[i];
  double h = 0.0;
  for (NodeId id = 1; id < t.node_count(); ++id) {
    const double va = mass[id];
    if (va <= 0.0) continue;
    h -= (va / mass[EncodingTree::kRoot]) * std::log2(va / mass[t.node(id).parent]);
  }
  return h;
}

double compressing_info(const Graph& g, const EncodingTree& t) {
  require_valid(g, t);
  double c = 0.0;
  for (NodeId id = 1; id < t.node_count(); ++id) {
    const TreeNode& nd = t.node(id);
    c += (nd.volume - nd.cut) * node_information(t, id);
  }
  return c / t.node(EncodingTree::kRoot).volume;
}

double compressing_info_edgewise(const Graph& g, const EncodingTree& t) {
  require_valid(g, t);
  double total = 0.0;
  for (const Edge& e : g.edges()) {
    const NodeId branch = t.common_ancestor(t.leaf_of(e.u), t.leaf_of(e.v));
    double info = 0.0;
    for (NodeId cur = branch; cur != EncodingTree::kRoot; cur = t.node(cur).parent) info += node_information(t, cur);
    // Symmetric in the two directions.
    total += 2.0 * e.weight * info;
  }
  return total / g.volume();
}

double decoding_info(const Graph& g, const EncodingTree& t) { return one_dim_entropy(g) - structural_entropy(g, t); }

InfoReport info_report(const Graph& g, const EncodingTree& t) {
  InfoReport r{};
  r.h1 = one_dim_entropy(g);
  r.h_t = structural_entropy(g, t);
  r.compress = compressing_info(g, t);
  r.decode = r.h1 - r.h_t;
  r.ratio = r.compress / r.h1;
  return r;
}

double entropy_lower_bound(const Graph& g, std::size_t conductance_limit) {
  const double phi = conductance_exact(g, conductance_limit).value;
  return phi * (one_dim_entropy(g) - 1.0);
}

double compressing_upper_bound(const Graph& g, std::size_t conductance_limit) {
  const double phi = conductance_exact(g, conductance_limit).value;
  return (1.0 - phi) * one_dim_entropy(g) + phi;
}

}  // namespace structinfo
