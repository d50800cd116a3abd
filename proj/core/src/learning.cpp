#include "structinfo/learning.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <json.hpp>

#include "structinfo/entropy.hpp"
#include "structinfo/error.hpp"

namespace structinfo {

using nlohmann::json;

FeatureSet FeatureEntry::all() const {
  FeatureSet out = syntax;
  out.insert(semantics.begin(), semantics.end());
  return out;
}

std::string_view to_string(FeatureBasis basis) { return basis == FeatureBasis::syntax ? "syntax" : "all"; }

FeatureBasis parse_basis(std::string_view name) {
  if (name == "syntax") return FeatureBasis::syntax;
  if (name == "all") return FeatureBasis::all;
  throw ParseError("unknown feature basis '" + std::string(name) + "' (expected syntax or all)");
}

void FeatureCatalog::set(std::string id, FeatureEntry entry) { entries_[std::move(id)] = std::move(entry); }

const FeatureEntry& FeatureCatalog::at(std::string_view id) const {
  auto it = entries_.find(id);
  if (it == entries_.end()) throw InvariantError("feature catalog has no entry for vertex '" + std::string(id) + "'");
  return it->second;
}

FeatureSet FeatureCatalog::features(std::string_view id, FeatureBasis basis) const {
  const FeatureEntry& e = at(id);
  return basis == FeatureBasis::syntax ? e.syntax : e.all();
}

namespace {

json parse_json(std::string_view doc, std::string_view what) {
  try {
    return json::parse(doc);
  } catch (const json::parse_error& e) {
    throw ParseError("malformed " + std::string(what) + ": " + e.what());
  }
}

FeatureSet token_list(const json& j, const std::string& where) {
  if (!j.is_array()) throw ParseError(where + " must be an array of strings");
  FeatureSet out;
  for (const json& t : j) {
    if (!t.is_string()) throw ParseError(where + " must be an array of strings");
    out.insert(t.get<std::string>());
  }
  return out;
}

FeatureEntry entry_from(const json& j, const std::string& where) {
  if (!j.is_object()) throw ParseError(where + " must be an object");
  FeatureEntry e;
  for (const auto& [key, value] : j.items()) {
    if (key == "syntax")
      e.syntax = token_list(value, where + ".syntax");
    else if (key == "semantics")
      e.semantics = token_list(value, where + ".semantics");
    else if (key != "id" && key != "sims")
      throw ParseError(where + ": unexpected key '" + key + "'");
  }
  return e;
}

std::vector<std::string> sorted_tokens(const FeatureSet& s) { return {s.begin(), s.end()}; }

std::string entry_json(const FeatureEntry& e) {
  return "{\"syntax\": " + json_string_array(sorted_tokens(e.syntax)) +
         ", \"semantics\": " + json_string_array(sorted_tokens(e.semantics)) + "}";
}

bool is_blank(std::string_view s) {
  return std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c); });
}

bool subset_of(const FeatureSet& a, const FeatureSet& b) { return std::includes(b.begin(), b.end(), a.begin(), a.end()); }

}  // namespace

FeatureCatalog parse_catalog(std::string_view doc) {
  FeatureCatalog c;
  if (is_blank(doc)) return c;
  const json j = parse_json(doc, "feature catalog");
  if (!j.is_object()) throw ParseError("feature catalog must be an object keyed by vertex id");
  for (const auto& [id, value] : j.items()) c.set(id, entry_from(value, "catalog[\"" + id + "\"]"));
  return c;
}

FeatureCatalog load_catalog(const std::filesystem::path& path) { return parse_catalog(read_file(path)); }

std::string serialize_catalog(const FeatureCatalog& catalog) {
  if (catalog.size() == 0) return "{}\n";
  std::string out = "{\n";
  std::size_t i = 0;
  for (const auto& [id, e] : catalog.entries()) {
    out += "  " + json_quote(id) + ": " + entry_json(e);
    out += ++i < catalog.size() ? ",\n" : "\n";
  }
  return out + "}\n";
}

KnowledgeTree knowledge_tree(const Graph& g, const EncodingTree& t, const FeatureCatalog& catalog,
                             FeatureBasis basis) {
  if (t.vertex_count() != g.size()) throw InvariantError("graph and decoder disagree on vertex count");
  KnowledgeTree kt{t, std::vector<FeatureSet>(t.node_count())};
  // Preorder ids: every child comes after its parent.
  for (NodeId id = static_cast<NodeId>(t.node_count()); id-- > 0;) {
    const TreeNode& nd = t.node(id);
    if (nd.is_leaf()) {
      kt.features[id] = catalog.features(g.id(nd.marker.front()), basis);
      continue;
    }
    FeatureSet acc = kt.features[nd.children.front()];
    for (std::size_t i = 1; i < nd.children.size() && !acc.empty(); ++i) {
      const FeatureSet& other = kt.features[nd.children[i]];
      FeatureSet next;
      std::set_intersection(acc.begin(), acc.end(), other.begin(), other.end(), std::inserter(next, next.end()));
      acc = std::move(next);
    }
    kt.features[id] = std::move(acc);
  }
  return kt;
}

std::size_t AbstractionTree::depth(std::size_t i) const {
  std::size_t d = 0;
  for (std::size_t cur = i; nodes.at(cur).parent != kNone; cur = nodes[cur].parent) ++d;
  return d;
}

NodePath AbstractionTree::path(std::size_t i) const {
  NodePath p;
  for (std::size_t cur = i; nodes.at(cur).parent != kNone; cur = nodes[cur].parent) {
    const auto& sibs = nodes[nodes[cur].parent].children;
    p.push_back(static_cast<std::size_t>(std::find(sibs.begin(), sibs.end(), cur) - sibs.begin()));
  }
  std::reverse(p.begin(), p.end());
  return p;
}

AbstractionTree abstraction_tree(const KnowledgeTree& kt) {
  const EncodingTree& t = kt.tree;
  AbstractionTree at;
  std::vector<std::size_t> rep(t.node_count(), AbstractionTree::kNone);
  at.nodes.push_back({AbstractionTree::kNone, {}, kt.features[EncodingTree::kRoot], EncodingTree::kRoot,
                      {EncodingTree::kRoot}, t.node(EncodingTree::kRoot).marker});
  rep[EncodingTree::kRoot] = 0;
  for (NodeId id = 1; id < t.node_count(); ++id) {
    const std::size_t p = rep[t.node(id).parent];
    if (kt.features[id] == at.nodes[p].features) {
      rep[id] = p;
      at.nodes[p].absorbed.push_back(id);
      continue;
    }
    rep[id] = at.nodes.size();
    at.nodes[p].children.push_back(at.nodes.size());
    at.nodes.push_back({p, {}, kt.features[id], id, {id}, t.node(id).marker});
  }
  return at;
}

std::optional<std::string> strict_growth_violation(const AbstractionTree& at) {
  for (std::size_t i = 1; i < at.nodes.size(); ++i) {
    const FeatureSet& mine = at.nodes[i].features;
    const FeatureSet& up = at.nodes[at.nodes[i].parent].features;
    if (!(subset_of(up, mine) && mine.size() > up.size()))
      return "abstraction node " + format_path(at.path(i)) + " does not strictly extend its parent's features";
  }
  return std::nullopt;
}

DataSpace make_space(Graph graph, EncodingTree decoder, FeatureCatalog catalog, std::size_t construction_k,
                     std::size_t height, FeatureBasis basis) {
  require_valid(graph, decoder);
  KnowledgeTree knowledge = knowledge_tree(graph, decoder, catalog, FeatureBasis::all);
  AbstractionTree abstractions = abstraction_tree(
      basis == FeatureBasis::all ? knowledge : knowledge_tree(graph, decoder, catalog, basis));
  return DataSpace{std::move(graph), std::move(decoder), std::move(catalog), construction_k, height,
                   basis,            std::move(knowledge), std::move(abstractions)};
}

std::vector<FeatureSet> flow_of_abstractions(const DataSpace& ds, Vertex v) {
  if (v >= ds.graph.size()) throw InvariantError("unknown vertex " + std::to_string(v));
  const EncodingTree& t = ds.knowledge.tree;
  std::vector<FeatureSet> chain;
  for (NodeId cur = t.leaf_of(v); cur != EncodingTree::kNoNode; cur = t.node(cur).parent)
    chain.push_back(ds.knowledge.features[cur]);
  return chain;
}

FeatureSet least_common_abstraction(const DataSpace& ds, Vertex u, Vertex v) {
  if (u >= ds.graph.size() || v >= ds.graph.size()) throw InvariantError("unknown vertex");
  if (u == v) throw InvariantError("least common abstraction needs two distinct vertices");
  const EncodingTree& t = ds.knowledge.tree;
  return ds.knowledge.features[t.common_ancestor(t.leaf_of(u), t.leaf_of(v))];
}

AbstractionChoice choose_abstraction(const DataSpace& ds, const FeatureSet& features) {
  const AbstractionTree& at = ds.abstractions;
  std::optional<std::size_t> best;
  std::size_t best_depth = 0;
  NodePath best_path;
  for (std::size_t i = 0; i < at.nodes.size(); ++i) {
    const FeatureSet& f = at.nodes[i].features;
    if (f.empty() || !subset_of(f, features)) continue;
    const std::size_t d = at.depth(i);
    NodePath p = at.path(i);
    bool better = !best || d > best_depth;
    if (best && d == best_depth) {
      const std::size_t have = at.nodes[*best].features.size();
      better = f.size() > have || (f.size() == have && p < best_path);
    }
    if (better) {
      best = i;
      best_depth = d;
      best_path = std::move(p);
    }
  }
  if (!best) return {0, true, EncodingTree::kRoot};
  NodeId module = at.nodes[*best].source;
  if (ds.decoder.node(module).is_leaf()) module = ds.decoder.node(module).parent;
  return {*best, false, module};
}

BuildResult build_data_space(const SimilarityMatrix& sim, const FeatureCatalog& catalog, std::size_t height,
                             const BuildOptions& opts) {
  const std::size_t n = sim.size();
  if (n < 2) throw InvariantError("need at least 2 samples");
  for (const std::string& id : sim.ids()) catalog.at(id);
  const DecoderFn decode =
      opts.decoder ? opts.decoder : DecoderFn([height](const Graph& g) { return minimize_kd(g, height); });

  const std::vector<WeightedPair> ranked = ranked_pairs(sim);
  // Smallest prefix of the ranking that connects every sample.
  std::vector<std::size_t> root(n);
  std::iota(root.begin(), root.end(), 0);
  auto find = [&](std::size_t x) {
    while (root[x] != x) x = root[x] = root[root[x]];
    return x;
  };
  std::size_t components = n;
  std::size_t first = 0;
  for (std::size_t i = 0; i < ranked.size() && components > 1; ++i) {
    const std::size_t a = find(ranked[i].u);
    const std::size_t b = find(ranked[i].v);
    if (a != b) {
      root[a] = b;
      --components;
    }
    first = i + 1;
  }
  if (components > 1) throw InvariantError("no number of kept similarity pairs yields a connected graph");

  std::vector<SweepRow> sweep;
  std::optional<Graph> best_graph;
  std::optional<OptimizeResult> best_tree;
  double best_d = -std::numeric_limits<double>::infinity();
  std::size_t best_k = 0;
  for (std::size_t k = first; k <= ranked.size(); ++k) {
    Graph g = build_topk_graph(sim.ids(), ranked, k);
    OptimizeResult r = decode(g);
    const double d = one_dim_entropy(g) - r.entropy;
    sweep.push_back({k, d});
    if (d > best_d + kDeltaTolerance) {
      best_d = d;
      best_k = k;
      best_graph = std::move(g);
      best_tree = std::move(r);
    }
  }
  return {make_space(std::move(*best_graph), std::move(best_tree->tree), catalog, best_k, height, opts.basis),
          std::move(sweep)};
}

InsertRequest parse_insert_request(std::string_view doc) {
  const json j = parse_json(doc, "insertion request");
  if (!j.is_object()) throw ParseError("insertion request must be an object");
  if (!j.contains("id") || !j["id"].is_string()) throw ParseError("insertion request needs a string \"id\"");
  if (!j.contains("sims") || !j["sims"].is_object())
    throw ParseError("insertion request needs a \"sims\" object of id: weight");
  InsertRequest r;
  r.id = j["id"].get<std::string>();
  for (const auto& [id, w] : j["sims"].items()) {
    if (!w.is_number()) throw ParseError("sims[\"" + id + "\"] must be a number");
    r.sims[id] = w.get<double>();
  }
  r.features = entry_from(j, "insertion request");
  return r;
}

namespace {

struct Placement {
  EncodingTree tree;
  double entropy;
};

Placement place_under(const Graph& g, const EncodingTree& decoder, NodeId parent) {
  EncodingTree t = decoder;
  t.attach_leaf(g, parent);
  const double h = structural_entropy(g, t);
  return {std::move(t), h};
}

}  // namespace

InsertResult insert_point(const DataSpace& ds, const InsertRequest& request, const DecoderFn& redecoder) {
  if (ds.graph.find(request.id) || ds.catalog.contains(request.id))
    throw InvariantError("vertex id '" + request.id + "' already exists");

  std::vector<Neighbor> ranked;
  for (const auto& [id, w] : request.sims) {
    auto v = ds.graph.find(id);
    if (!v) throw InvariantError("similarity names unknown vertex '" + id + "'");
    if (!std::isfinite(w) || w < 0.0) throw InvariantError("similarity to '" + id + "' is negative or non-finite");
    if (w > 0.0) ranked.push_back({*v, w});
  }
  if (ranked.empty()) throw InvariantError("new point has no positive similarity; it would be disconnected");
  std::sort(ranked.begin(), ranked.end(), [](const Neighbor& a, const Neighbor& b) {
    return a.weight != b.weight ? a.weight > b.weight : a.vertex < b.vertex;
  });

  InsertReport report;
  report.entropy_before = structural_entropy(ds.graph, ds.decoder);
  const FeatureSet query =
      ds.basis == FeatureBasis::syntax ? request.features.syntax : request.features.all();
  report.choice = choose_abstraction(ds, query);
  if (!report.choice.fallback) {
    report.abstraction_features = ds.abstractions.nodes[report.choice.node].features;
    report.abstraction_path = ds.abstractions.path(report.choice.node);
  }
  const NodeId module = report.choice.module;

  // Associating: number of attachment edges by decoding information with the
  // point placed in the chosen module.
  std::optional<Graph> graph;
  double best_d = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 1; k <= ranked.size(); ++k) {
    Graph g = ds.graph.with_vertex(request.id, std::span(ranked).first(k));
    const double d = one_dim_entropy(g) - place_under(g, ds.decoder, module).entropy;
    report.sweep.push_back({k, d});
    if (d > best_d + kDeltaTolerance) {
      best_d = d;
      report.chosen_k = k;
      graph = std::move(g);
    }
  }
  const Graph& g = *graph;

  // Local reasoning: the chosen module or one of its sibling modules.
  std::vector<NodeId> targets{module};
  if (module != EncodingTree::kRoot)
    for (NodeId s : ds.decoder.node(ds.decoder.node(module).parent).children)
      if (s != module && !ds.decoder.node(s).is_leaf()) targets.push_back(s);
  std::optional<Placement> best;
  for (NodeId target : targets) {
    Placement p = place_under(g, ds.decoder, target);
    if (!best || p.entropy < best->entropy - kDeltaTolerance) best = std::move(p);
  }

  const auto x = static_cast<Vertex>(ds.graph.size());
  GreedyOptions opts;
  opts.height_cap = std::max<std::size_t>(ds.height, best->tree.height());
  opts.allow_combine = true;
  opts.scope = best->tree.node(best->tree.node(best->tree.leaf_of(x)).parent).marker;
  OptimizeResult local = greedy_minimize(g, std::move(best->tree), opts);

  const double h1 = one_dim_entropy(g);
  if (local.entropy > h1 + kDeltaTolerance) {
    local = redecoder ? redecoder(g) : minimize_kd(g, std::max<std::size_t>(ds.height, 2));
    report.redecoded = true;
  }
  report.entropy_after = local.entropy;
  const NodeId holder = local.tree.node(local.tree.leaf_of(x)).parent;
  report.final_module = local.tree.path(holder);
  report.final_members = local.tree.node(holder).marker;

  FeatureCatalog catalog = ds.catalog;
  catalog.set(request.id, request.features);
  return {make_space(g, std::move(local.tree), std::move(catalog), ds.construction_k, ds.height, ds.basis),
          std::move(report)};
}

std::string classify_by_abstraction(const std::vector<std::pair<std::string, FeatureSet>>& sets,
                                    const std::map<std::string, double, std::less<>>& sample) {
  if (sets.empty()) throw InvariantError("no abstraction sets to classify against");
  std::optional<std::size_t> best;
  double best_mean = 0.0;
  for (std::size_t j = 0; j < sets.size(); ++j) {
    const FeatureSet& y = sets[j].second;
    if (y.empty()) throw InvariantError("abstraction set '" + sets[j].first + "' is empty");
    double sum = 0.0;
    for (const std::string& token : y)
      if (auto it = sample.find(token); it != sample.end()) sum += it->second;
    const double mean = sum / static_cast<double>(y.size());
    if (!best || mean > best_mean) {
      best = j;
      best_mean = mean;
    }
  }
  return sets[*best].first;
}

namespace {

std::string indent_block(const std::string& text, std::size_t by) {
  std::string out;
  const std::string pad(by, ' ');
  bool line_start = false;
  for (char c : text) {
    if (line_start && c != '\n') out += pad;
    line_start = c == '\n';
    out += c;
  }
  return out;
}

std::vector<std::string> member_ids(const Graph& g, const std::vector<Vertex>& marker) {
  std::vector<std::string> ids;
  ids.reserve(marker.size());
  for (Vertex v : marker) ids.push_back(g.id(v));
  return ids;
}

void add_features(DocNode& d, const KnowledgeTree& kt, NodeId id) {
  d.fields.emplace_back("features", json_string_array(sorted_tokens(kt.features[id])));
  const auto& kids = kt.tree.node(id).children;
  for (std::size_t i = 0; i < kids.size(); ++i) add_features(d.children[i], kt, kids[i]);
}

DocNode abstraction_node_doc(const Graph& g, const EncodingTree& decoder, const AbstractionTree& at, std::size_t i) {
  const AbstractionNode& a = at.nodes[i];
  DocNode d;
  if (a.marker.size() == 1)
    d.fields.emplace_back("vertex", json_quote(g.id(a.marker.front())));
  else
    d.fields.emplace_back("members", json_string_array(member_ids(g, a.marker)));
  d.fields.emplace_back("vol", fixed9(decoder.node(a.source).volume));
  d.fields.emplace_back("cut", fixed9(decoder.node(a.source).cut));
  d.fields.emplace_back("features", json_string_array(sorted_tokens(a.features)));
  for (std::size_t c : a.children) d.children.push_back(abstraction_node_doc(g, decoder, at, c));
  return d;
}

}  // namespace

DocNode knowledge_doc(const Graph& g, const KnowledgeTree& kt) {
  DocNode d = tree_doc(g, kt.tree);
  add_features(d, kt, EncodingTree::kRoot);
  return d;
}

DocNode abstraction_doc(const Graph& g, const EncodingTree& decoder, const AbstractionTree& at) {
  return abstraction_node_doc(g, decoder, at, 0);
}

std::string serialize_space(const DataSpace& ds) {
  const Graph& g = ds.graph;
  std::string out = "{\n";
  out += fmt::format("  \"height\": {},\n  \"construction_k\": {},\n  \"basis\": {},\n", ds.height,
                     ds.construction_k, json_quote(to_string(ds.basis)));
  out += "  \"vertices\": " + json_string_array(g.ids()) + ",\n";
  out += "  \"edges\": [\n";
  for (std::size_t i = 0; i < g.edge_count(); ++i) {
    const Edge& e = g.edges()[i];
    // Shortest round-trip form keeps the reloaded graph identical.
    out += fmt::format("    [{}, {}, {}]", json_quote(g.id(e.u)), json_quote(g.id(e.v)), e.weight);
    out += i + 1 < g.edge_count() ? ",\n" : "\n";
  }
  out += "  ],\n";
  out += "  \"catalog\": " + indent_block(serialize_catalog(ds.catalog), 2);
  if (out.back() == '\n') out.pop_back();
  out += ",\n  \"decoder\": " + indent_block(serialize_tree(g, ds.decoder), 2);
  if (out.back() == '\n') out.pop_back();
  out += "\n}\n";
  return out;
}

DataSpace deserialize_space(std::string_view doc) {
  const json j = parse_json(doc, "data space");
  auto need = [&](const char* key) -> const json& {
    if (!j.is_object() || !j.contains(key)) throw ParseError(std::string("data space is missing \"") + key + "\"");
    return j[key];
  };
  const json& verts = need("vertices");
  const json& edges = need("edges");
  if (!verts.is_array() || !edges.is_array()) throw ParseError("data space vertices/edges must be arrays");
  std::vector<std::string> ids;
  for (const json& v : verts) {
    if (!v.is_string()) throw ParseError("data space vertex ids must be strings");
    ids.push_back(v.get<std::string>());
  }
  std::map<std::string, Vertex, std::less<>> index;
  for (std::size_t i = 0; i < ids.size(); ++i) index.emplace(ids[i], static_cast<Vertex>(i));
  std::vector<Edge> list;
  for (const json& e : edges) {
    if (!e.is_array() || e.size() != 3 || !e[0].is_string() || !e[1].is_string() || !e[2].is_number())
      throw ParseError("data space edges must be [u, v, weight]");
    auto u = index.find(e[0].get<std::string>());
    auto v = index.find(e[1].get<std::string>());
    if (u == index.end() || v == index.end()) throw InvariantError("data space edge names an unknown vertex");
    list.push_back({u->second, v->second, e[2].get<double>()});
  }
  Graph g = Graph::create(std::move(ids), std::move(list));
  const json& h = need("height");
  const json& k = need("construction_k");
  if (!h.is_number_unsigned() || !k.is_number_unsigned())
    throw ParseError("data space height/construction_k must be non-negative integers");
  const json& basis = need("basis");
  if (!basis.is_string()) throw ParseError("data space basis must be a string");
  FeatureCatalog catalog = parse_catalog(need("catalog").dump());
  EncodingTree decoder = deserialize_tree(need("decoder").dump(), g);
  return make_space(std::move(g), std::move(decoder), std::move(catalog), k.get<std::size_t>(),
                    h.get<std::size_t>(), parse_basis(basis.get<std::string>()));
}

}  // namespace structinfo
