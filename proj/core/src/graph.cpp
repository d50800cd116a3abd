#include "structinfo/graph.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <numeric>
#include <sstream>

#include "structinfo/error.hpp"

namespace structinfo {

VertexSet::VertexSet(std::size_t universe, std::initializer_list<Vertex> members)
    : bits_(universe, false) {
  for (Vertex v : members) insert(v);
}

VertexSet VertexSet::from_members(std::size_t universe, std::span<const Vertex> members) {
  VertexSet s(universe);
  for (Vertex v : members) s.insert(v);
  return s;
}

VertexSet VertexSet::full(std::size_t universe) {
  VertexSet s(universe);
  s.bits_.assign(universe, true);
  s.count_ = universe;
  return s;
}

void VertexSet::insert(Vertex v) {
  if (v >= bits_.size()) throw InvariantError("vertex " + std::to_string(v) + " outside vertex set universe");
  if (!bits_[v]) {
    bits_[v] = true;
    ++count_;
  }
}

void VertexSet::erase(Vertex v) {
  if (v < bits_.size() && bits_[v]) {
    bits_[v] = false;
    --count_;
  }
}

std::vector<Vertex> VertexSet::members() const {
  std::vector<Vertex> out;
  out.reserve(count_);
  for (std::size_t v = 0; v < bits_.size(); ++v)
    if (bits_[v]) out.push_back(static_cast<Vertex>(v));
  return out;
}

VertexSet VertexSet::complement() const {
  VertexSet c(bits_.size());
  for (std::size_t v = 0; v < bits_.size(); ++v)
    if (!bits_[v]) c.insert(static_cast<Vertex>(v));
  return c;
}

Distribution::Distribution(std::vector<double> probabilities) : p_(std::move(probabilities)) {
  if (p_.empty()) throw InvariantError("distribution is empty");
  double sum = 0.0;
  for (double x : p_) {
    if (!(x >= 0.0) || !std::isfinite(x)) throw InvariantError("distribution has a negative or non-finite entry");
    sum += x;
  }
  if (std::abs(sum - 1.0) > 1e-9) throw InvariantError("distribution does not sum to 1");
}

namespace {

std::uint64_t pair_key(Vertex u, Vertex v) {
  if (u > v) std::swap(u, v);
  return (static_cast<std::uint64_t>(u) << 32) | v;
}

}  // namespace

Graph Graph::create(std::vector<std::string> ids, std::vector<Edge> edges) {
  Graph g;
  const std::size_t n = ids.size();
  if (n < 2) throw InvariantError("graph needs at least 2 vertices");
  if (edges.empty()) throw InvariantError("graph has no edges");

  for (std::size_t i = 0; i < n; ++i) {
    if (!g.index_.emplace(ids[i], static_cast<Vertex>(i)).second)
      throw InvariantError("duplicate vertex id '" + ids[i] + "'");
  }
  g.ids_ = std::move(ids);

  std::unordered_map<std::uint64_t, std::size_t> seen;
  g.degree_.assign(n, 0.0);
  for (Edge e : edges) {
    if (e.u >= n || e.v >= n) throw InvariantError("edge endpoint out of range");
    if (e.u == e.v) throw InvariantError("self-loop on vertex '" + g.ids_[e.u] + "'");
    if (!(e.weight > 0.0) || !std::isfinite(e.weight))
      throw InvariantError("non-positive weight on edge '" + g.ids_[e.u] + "'-'" + g.ids_[e.v] + "'");
    if (!seen.emplace(pair_key(e.u, e.v), g.edges_.size()).second)
      throw InvariantError("duplicate edge '" + g.ids_[e.u] + "'-'" + g.ids_[e.v] + "'");
    if (e.u > e.v) std::swap(e.u, e.v);
    g.edges_.push_back(e);
    g.degree_[e.u] += e.weight;
    g.degree_[e.v] += e.weight;
  }

  std::vector<std::size_t> count(n + 1, 0);
  for (const Edge& e : g.edges_) {
    ++count[e.u + 1];
    ++count[e.v + 1];
  }
  std::partial_sum(count.begin(), count.end(), count.begin());
  g.offsets_ = count;
  g.adjacency_.resize(2 * g.edges_.size());
  std::vector<std::size_t> fill(g.offsets_.begin(), g.offsets_.end() - 1);
  for (const Edge& e : g.edges_) {
    g.adjacency_[fill[e.u]++] = {e.v, e.weight};
    g.adjacency_[fill[e.v]++] = {e.u, e.weight};
  }
  for (std::size_t v = 0; v < n; ++v) {
    std::sort(g.adjacency_.begin() + static_cast<std::ptrdiff_t>(g.offsets_[v]),
              g.adjacency_.begin() + static_cast<std::ptrdiff_t>(g.offsets_[v + 1]),
              [](const Neighbor& a, const Neighbor& b) { return a.vertex < b.vertex; });
  }
  g.volume_ = std::accumulate(g.degree_.begin(), g.degree_.end(), 0.0);

  // Connectivity.
  std::vector<bool> reached(n, false);
  std::vector<Vertex> stack{0};
  reached[0] = true;
  std::size_t visited = 1;
  while (!stack.empty()) {
    Vertex v = stack.back();
    stack.pop_back();
    for (const Neighbor& nb : g.neighbors(v)) {
      if (!reached[nb.vertex]) {
        reached[nb.vertex] = true;
        ++visited;
        stack.push_back(nb.vertex);
      }
    }
  }
  if (visited != n) {
    auto it = std::find(reached.begin(), reached.end(), false);
    throw InvariantError("graph is disconnected: vertex '" +
                         g.ids_[static_cast<std::size_t>(it - reached.begin())] +
                         "' is unreachable from '" + g.ids_[0] + "'");
  }
  return g;
}

std::optional<Vertex> Graph::find(std::string_view id) const {
  auto it = index_.find(std::string(id));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::span<const Neighbor> Graph::neighbors(Vertex v) const {
  return std::span<const Neighbor>(adjacency_).subspan(offsets_[v], offsets_[v + 1] - offsets_[v]);
}

double Graph::volume(const VertexSet& s) const {
  double vol = 0.0;
  for (Vertex v : s.members()) vol += degree_[v];
  return vol;
}

double Graph::edge_weight(Vertex u, Vertex v) const {
  auto nbrs = neighbors(u);
  auto it = std::lower_bound(nbrs.begin(), nbrs.end(), v,
                             [](const Neighbor& a, Vertex x) { return a.vertex < x; });
  return (it != nbrs.end() && it->vertex == v) ? it->weight : 0.0;
}

Graph Graph::with_vertex(std::string id, std::span<const Neighbor> attachments) const {
  std::vector<std::string> ids = ids_;
  ids.push_back(std::move(id));
  std::vector<Edge> edges(edges_.begin(), edges_.end());
  const auto x = static_cast<Vertex>(ids_.size());
  for (const Neighbor& a : attachments) edges.push_back({a.vertex, x, a.weight});
  return create(std::move(ids), std::move(edges));
}

Graph parse_edge_list(std::istream& in) {
  std::vector<std::string> ids;
  std::unordered_map<std::string, Vertex> index;
  std::vector<Edge> edges;
  std::vector<std::size_t> edge_line;

  auto intern = [&](const std::string& name) {
    auto [it, fresh] = index.emplace(name, static_cast<Vertex>(ids.size()));
    if (fresh) ids.push_back(name);
    return it->second;
  };

  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    auto first = line.find_first_not_of(" \t");
    if (first == std::string::npos || line[first] == '#') continue;

    std::istringstream fields(line);
    std::string u, v, w, extra;
    fields >> u >> v;
    if (v.empty()) throw ParseError("line " + std::to_string(lineno) + ": expected '<u> <v> [<weight>]'");
    double weight = 1.0;
    if (fields >> w) {
      const char* end = w.data() + w.size();
      auto [ptr, ec] = std::from_chars(w.data(), end, weight);
      if (ec != std::errc() || ptr != end)
        throw ParseError("line " + std::to_string(lineno) + ": bad weight '" + w + "'");
      if (fields >> extra) throw ParseError("line " + std::to_string(lineno) + ": trailing field '" + extra + "'");
    }
    if (u == v) throw InvariantError("line " + std::to_string(lineno) + ": self-loop on vertex '" + u + "'");
    if (!(weight > 0.0))
      throw InvariantError("line " + std::to_string(lineno) + ": non-positive weight " + w);
    edges.push_back({intern(u), intern(v), weight});
    edge_line.push_back(lineno);
  }

  std::unordered_map<std::uint64_t, std::size_t> seen;
  for (std::size_t i = 0; i < edges.size(); ++i) {
    auto [it, fresh] = seen.emplace(pair_key(edges[i].u, edges[i].v), edge_line[i]);
    if (!fresh)
      throw InvariantError("line " + std::to_string(edge_line[i]) + ": duplicate edge (first seen on line " +
                           std::to_string(it->second) + ")");
  }
  return Graph::create(std::move(ids), std::move(edges));
}

Graph load_graph(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open graph file '" + path.string() + "'");
  return parse_edge_list(in);
}

void write_edge_list(std::ostream& out, const Graph& g) {
  out << std::fixed << std::setprecision(9);
  for (const Edge& e : g.edges()) out << g.id(e.u) << '\t' << g.id(e.v) << '\t' << e.weight << '\n';
}

namespace {

void require_proper(const Graph& g, const VertexSet& s) {
  if (s.universe() != g.size()) throw InvariantError("vertex set does not match graph size");
  if (s.empty() || s.size() == g.size()) throw InvariantError("vertex set must be a nonempty proper subset");
}

}  // namespace

double cut_weight(const Graph& g, const VertexSet& s) {
  require_proper(g, s);
  double cut = 0.0;
  for (const Edge& e : g.edges())
    if (s.contains(e.u) != s.contains(e.v)) cut += e.weight;
  return cut;
}

double conductance_subset(const Graph& g, const VertexSet& s) {
  const double cut = cut_weight(g, s);
  const double vol_s = g.volume(s);
  return cut / std::min(vol_s, g.volume() - vol_s);
}

ConductanceResult conductance_exact(const Graph& g, std::size_t max_vertices) {
  const std::size_t n = g.size();
  if (n > max_vertices || n > 31)
    throw SizeGuardError("conductance enumeration limited to " + std::to_string(std::min<std::size_t>(max_vertices, 31)) +
                         " vertices, graph has " + std::to_string(n));

  // Lexicographic order on sorted member lists. At the first vertex in only
  // one set, that set is smaller unless the other list ends there.
  auto lex_less = [n](std::uint32_t a, std::uint32_t b) {
    for (std::size_t v = 0; v < n; ++v) {
      const bool in_a = (a >> v) & 1U;
      const bool in_b = (b >> v) & 1U;
      if (in_a == in_b) continue;
      const std::uint32_t later = ~((2U << v) - 1U);
      return in_a ? (b & later) != 0 : (a & later) == 0;
    }
    return false;
  };

  const std::uint32_t full = (n == 32) ? ~0U : ((1U << n) - 1U);
  const double total = g.volume();
  std::uint32_t mask = 0;
  double cut = 0.0;
  double vol = 0.0;
  double best = std::numeric_limits<double>::infinity();
  std::uint32_t best_mask = 0;

  // Gray-code walk: each step flips exactly one vertex.
  for (std::uint32_t step = 1; step <= full; ++step) {
    const auto v = static_cast<Vertex>(std::countr_zero(step));
    const bool adding = ((mask >> v) & 1U) == 0;
    double inside = 0.0;
    double outside = 0.0;
    for (const Neighbor& nb : g.neighbors(v)) ((mask >> nb.vertex) & 1U ? inside : outside) += nb.weight;
    if (adding) {
      cut += outside - inside;
      vol += g.degree(v);
    } else {
      cut += inside - outside;
      vol -= g.degree(v);
    }
    mask ^= 1U << v;
    if (mask == 0 || mask == full) continue;
    const double phi = cut / std::min(vol, total - vol);
    const double tol = 1e-12 * std::max(1.0, best);
    if (best_mask == 0 || phi < best - tol || (phi <= best + tol && lex_less(mask, best_mask))) {
      best = std::min(best, phi);
      best_mask = mask;
    }
  }

  VertexSet argmin(n);
  for (std::size_t v = 0; v < n; ++v)
    if ((best_mask >> v) & 1U) argmin.insert(static_cast<Vertex>(v));
  return {conductance_subset(g, argmin), std::move(argmin)};
}

double shannon_entropy(const Distribution& p) {
  double h = 0.0;
  for (double x : p.probabilities())
    if (x > 0.0) h -= x * std::log2(x);
  return h;
}

double one_dim_entropy(const Graph& g) {
  double h = 0.0;
  const double vol = g.volume();
  for (double d : g.degrees()) {
    const double p = d / vol;
    h -= p * std::log2(p);
  }
  return h;
}

}  // namespace structinfo
