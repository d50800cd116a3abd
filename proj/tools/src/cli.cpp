#include "structinfo_cli/cli.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>

#include <algorithm>
#include <optional>
#include <ostream>
#include <sstream>

#include "structinfo/encoding_tree.hpp"
#include "structinfo/entropy.hpp"
#include "structinfo/error.hpp"
#include "structinfo/graph.hpp"
#include "structinfo/learning.hpp"
#include "structinfo/optimizer.hpp"
#include "structinfo/oracle.hpp"
#include "structinfo/similarity.hpp"
#include "structinfo/tree_io.hpp"

namespace structinfo::cli {

namespace {

constexpr const char* kFormats = R"(Formats:
  graph       one edge per line: <u> <v> [<weight>], tab or space separated,
              weight defaults to 1, '#' starts a comment line
  tree        JSON: {"children": [...]} for internal nodes, {"vertex": "<id>"}
              for leaves; "vol"/"cut" are written and ignored on read
  similarity  CSV with sample ids in the header row and first column
  features    JSON: {"<id>": {"syntax": [...], "semantics": [...]}}
  point       JSON: {"id": ..., "sims": {"<id>": weight}, "syntax": [...],
              "semantics": [...]}
  space       JSON written by 'build' and 'insert'

Exit codes: 0 ok, 1 parse error, 2 invariant violation, 3 size guard.
)";

std::string join_ids(const Graph& g, const std::vector<Vertex>& vs) {
  std::string s;
  for (Vertex v : vs) {
    if (!s.empty()) s += ' ';
    s += g.id(v);
  }
  return s;
}

void print_modules(std::ostream& out, const Graph& g, const EncodingTree& t) {
  const auto modules = top_level_modules(t);
  out << "height " << t.height() << '\n';
  out << "modules " << modules.size() << '\n';
  for (std::size_t i = 0; i < modules.size(); ++i) out << "module " << i << ' ' << join_ids(g, modules[i]) << '\n';
}

std::string trace_text(const std::vector<TraceStep>& trace) {
  std::string s;
  for (std::size_t i = 0; i < trace.size(); ++i)
    s += fmt::format("{} {} {} {} {}\n", i + 1, to_string(trace[i].kind), format_path(trace[i].a),
                     format_path(trace[i].b), fixed9(trace[i].delta));
  return s;
}

std::size_t bell_number(std::size_t n) {
  std::vector<std::size_t> row{1};
  for (std::size_t i = 1; i <= n; ++i) {
    std::vector<std::size_t> next{row.back()};
    for (std::size_t x : row) next.push_back(next.back() + x);
    row = std::move(next);
  }
  return row.front();
}

struct EntropyArgs {
  std::string graph;
  std::string tree;
  std::size_t dim = 0;
  std::string out;
  std::string trace;
};

void cmd_entropy(const EntropyArgs& a, std::ostream& out) {
  const Graph g = load_graph(a.graph);
  if (!a.tree.empty()) {
    const EncodingTree t = load_tree(a.tree, g);
    const InfoReport r = info_report(g, t);
    out << "h1 " << fixed9(r.h1) << '\n'
        << "h_t " << fixed9(r.h_t) << '\n'
        << "compress " << fixed9(r.compress) << '\n'
        << "decode " << fixed9(r.decode) << '\n'
        << "ratio " << fixed9(r.ratio) << '\n';
    return;
  }
  if (a.dim == 0) {
    out << "h1 " << fixed9(one_dim_entropy(g)) << '\n';
    return;
  }
  OptimizeResult r = a.dim == 1 ? OptimizeResult{star_tree(g), one_dim_entropy(g), {}}
                     : a.dim == 2 ? minimize_2d(g)
                                  : minimize_kd(g, a.dim);
  const double h1 = one_dim_entropy(g);
  out << "dim " << a.dim << '\n'
      << "h1 " << fixed9(h1) << '\n'
      << "h_t " << fixed9(r.entropy) << '\n'
      << "decode " << fixed9(h1 - r.entropy) << '\n'
      << "steps " << r.trace.size() << '\n';
  print_modules(out, g, r.tree);
  if (!a.out.empty()) write_file(a.out, serialize_tree(g, r.tree));
  if (!a.trace.empty()) write_file(a.trace, trace_text(r.trace));
}

struct OracleArgs {
  std::string graph;
  std::size_t height = 2;
  std::string out;
};

void cmd_oracle(const OracleArgs& a, std::ostream& out) {
  const Graph g = load_graph(a.graph);
  const OptimizeResult r = a.height == 2 ? brute_force_2d(g) : brute_force_kd(g, a.height);
  out << "height_cap " << a.height << '\n';
  if (a.height == 2) out << "partitions " << bell_number(g.size()) << '\n';
  out << "h1 " << fixed9(one_dim_entropy(g)) << '\n' << "h_opt " << fixed9(r.entropy) << '\n';
  print_modules(out, g, r.tree);
  if (!a.out.empty()) write_file(a.out, serialize_tree(g, r.tree));
}

struct BuildArgs {
  std::string similarity;
  std::size_t height = 2;
  std::string features;
  std::string basis = "syntax";
  std::string out_graph;
  std::string out_space;
};

void cmd_build(const BuildArgs& a, std::ostream& out) {
  const SimilarityMatrix sim = load_similarity_csv(a.similarity);
  FeatureCatalog catalog;
  if (!a.features.empty()) {
    catalog = load_catalog(a.features);
  } else {
    for (const std::string& id : sim.ids()) catalog.set(id, {});
  }
  BuildOptions opts;
  opts.basis = parse_basis(a.basis);
  const BuildResult r = build_data_space(sim, catalog, a.height, opts);
  const DataSpace& ds = r.space;
  out << "samples " << sim.size() << '\n' << "pairs " << ranked_pairs(sim).size() << '\n';
  for (const SweepRow& row : r.sweep) out << "sweep " << row.k << ' ' << fixed9(row.decoding) << '\n';
  const double h1 = one_dim_entropy(ds.graph);
  const double h = structural_entropy(ds.graph, ds.decoder);
  out << "chosen_k " << ds.construction_k << '\n'
      << "h1 " << fixed9(h1) << '\n'
      << "h_t " << fixed9(h) << '\n'
      << "decode " << fixed9(h1 - h) << '\n';
  print_modules(out, ds.graph, ds.decoder);
  if (!a.out_graph.empty()) {
    std::ostringstream ss;
    write_edge_list(ss, ds.graph);
    write_file(a.out_graph, ss.str());
  }
  if (!a.out_space.empty()) write_file(a.out_space, serialize_space(ds));
}

struct InsertArgs {
  std::string space;
  std::string point;
  std::string out;
};

void cmd_insert(const InsertArgs& a, std::ostream& out) {
  const DataSpace ds = deserialize_space(read_file(a.space));
  const InsertRequest req = parse_insert_request(read_file(a.point));
  const InsertResult r = insert_point(ds, req);
  const InsertReport& rep = r.report;
  if (rep.choice.fallback) {
    out << "abstraction: root\n";
  } else {
    const FeatureSet& f = rep.abstraction_features;
    out << "abstraction: " << format_path(rep.abstraction_path) << ' '
        << json_string_array(std::vector<std::string>(f.begin(), f.end())) << '\n';
  }
  for (const SweepRow& row : rep.sweep) out << "sweep: " << row.k << ' ' << fixed9(row.decoding) << '\n';
  out << "chosen_k: " << rep.chosen_k << '\n'
      << "module: " << format_path(rep.final_module) << '\n'
      << "members: " << join_ids(r.space.graph, rep.final_members) << '\n'
      << "entropy_before: " << fixed9(rep.entropy_before) << '\n'
      << "entropy_after: " << fixed9(rep.entropy_after) << '\n';
  if (rep.redecoded) out << "redecoded: yes\n";
  if (!a.out.empty()) write_file(a.out, serialize_space(r.space));
}

struct KnowledgeArgs {
  std::string graph;
  std::string tree;
  std::string features;
  std::string basis = "syntax";
  std::string out;
};

void cmd_knowledge(const KnowledgeArgs& a, std::ostream& out) {
  const Graph g = load_graph(a.graph);
  EncodingTree t = load_tree(a.tree, g);
  const FeatureCatalog catalog = load_catalog(a.features);
  const DataSpace ds = make_space(g, std::move(t), catalog, 0, 0, parse_basis(a.basis));
  if (auto bad = strict_growth_violation(ds.abstractions)) throw InvariantError(*bad);
  const FeatureSet& root = ds.knowledge.features[EncodingTree::kRoot];
  out << "root_features " << json_string_array(std::vector<std::string>(root.begin(), root.end())) << '\n'
      << "knowledge_nodes " << ds.knowledge.tree.node_count() << '\n'
      << "abstraction_nodes " << ds.abstractions.nodes.size() << '\n'
      << "strict_growth ok\n";
  if (!a.out.empty()) {
    std::string text = "{\n  \"basis\": " + json_quote(to_string(ds.basis)) + ",\n  \"knowledge\": ";
    auto nest = [](const std::string& block) {
      std::string s;
      for (std::size_t i = 0; i < block.size(); ++i) {
        s += block[i];
        if (block[i] == '\n' && i + 1 < block.size()) s += "  ";
      }
      if (!s.empty() && s.back() == '\n') s.pop_back();
      return s;
    };
    text += nest(render_doc(knowledge_doc(g, ds.knowledge)));
    text += ",\n  \"abstractions\": " + nest(render_doc(abstraction_doc(g, ds.decoder, ds.abstractions)));
    text += "\n}\n";
    write_file(a.out, text);
  }
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Structural information of graphs: entropy, encoding trees, decoders and learning."};
  app.name("structinfo");
  app.footer(kFormats);
  app.require_subcommand(1, 1);

  EntropyArgs ea;
  auto* entropy = app.add_subcommand("entropy", "H^1, a tree's information report, or a greedy k-level decoder");
  entropy->add_option("--graph", ea.graph, "edge-list file")->required();
  auto* tree_opt = entropy->add_option("--tree", ea.tree, "tree document to evaluate");
  auto* dim_opt = entropy->add_option("--dim", ea.dim, "minimize with height cap k (greedy)")->check(CLI::Range(1, 64));
  tree_opt->excludes(dim_opt);
  entropy->add_option("--out", ea.out, "write the minimized tree here")->needs(dim_opt);
  entropy->add_option("--trace", ea.trace, "write the greedy move log here")->needs(dim_opt);

  OracleArgs oa;
  auto* oracle = app.add_subcommand("oracle", "exact minimum entropy by exhaustive search (small graphs)");
  oracle->add_option("--graph", oa.graph, "edge-list file")->required();
  oracle->add_option("--height", oa.height, "height cap")->required()->check(CLI::Range(1, 64));
  oracle->add_option("--out", oa.out, "write the optimal tree here");

  BuildArgs ba;
  auto* build = app.add_subcommand("build", "construct a data space by maximizing decoding information");
  build->add_option("--similarity", ba.similarity, "similarity CSV")->required();
  build->add_option("--height", ba.height, "decoder height cap")->required()->check(CLI::Range(2, 64));
  build->add_option("--features", ba.features, "feature catalog (default: no features)");
  build->add_option("--basis", ba.basis, "abstraction features: syntax or all")->check(CLI::IsMember({"syntax", "all"}));
  build->add_option("--out-graph", ba.out_graph, "write the chosen graph as an edge list");
  build->add_option("--out-space", ba.out_space, "write the data space document");

  InsertArgs ia;
  auto* insert = app.add_subcommand("insert", "add one point to a data space");
  insert->add_option("--space", ia.space, "data space document")->required();
  insert->add_option("--point", ia.point, "point document")->required();
  insert->add_option("--out", ia.out, "write the updated data space");

  KnowledgeArgs ka;
  auto* knowledge = app.add_subcommand("knowledge", "knowledge tree and tree of abstractions of a decoder");
  knowledge->add_option("--graph", ka.graph, "edge-list file")->required();
  knowledge->add_option("--tree", ka.tree, "decoder tree document")->required();
  knowledge->add_option("--features", ka.features, "feature catalog")->required();
  knowledge->add_option("--basis", ka.basis, "abstraction features: syntax or all")
      ->check(CLI::IsMember({"syntax", "all"}));
  knowledge->add_option("--out", ka.out, "write both trees as one document");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kParseError;
  }

  try {
    if (*entropy) cmd_entropy(ea, out);
    if (*oracle) cmd_oracle(oa, out);
    if (*build) cmd_build(ba, out);
    if (*insert) cmd_insert(ia, out);
    if (*knowledge) cmd_knowledge(ka, out);
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << '\n';
    return kParseError;
  } catch (const InvariantError& e) {
    err << "invariant violation: " << e.what() << '\n';
    return kInvariantViolation;
  } catch (const SizeGuardError& e) {
    err << "size guard: " << e.what() << '\n';
    return kSizeGuard;
  }
  return kOk;
}

}  // namespace structinfo::cli
