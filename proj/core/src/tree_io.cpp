#include "structinfo/tree_io.hpp"

#include <fmt/format.h>

#include <fstream>
#include <json.hpp>
#include <sstream>

#include "structinfo/error.hpp"

namespace structinfo {

using nlohmann::json;

std::string fixed9(double x) {
  // Avoid "-0.000000000" for tiny negative round-off.
  if (std::abs(x) < 5e-10) x = 0.0;
  return fmt::format("{:.9f}", x);
}

std::string json_quote(std::string_view s) { return json(std::string(s)).dump(); }

std::string json_string_array(const std::vector<std::string>& items) {
  std::string out = "[";
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out += ", ";
    out += json_quote(items[i]);
  }
  return out + "]";
}

namespace {

void render(const DocNode& n, std::size_t indent, std::string& out) {
  const std::string pad(indent, ' ');
  if (n.children.empty()) {
    out += pad + "{";
    for (std::size_t i = 0; i < n.fields.size(); ++i) {
      if (i) out += ", ";
      out += json_quote(n.fields[i].first) + ": " + n.fields[i].second;
    }
    out += "}";
    return;
  }
  out += pad + "{\n";
  for (const auto& [key, value] : n.fields) out += pad + "  " + json_quote(key) + ": " + value + ",\n";
  out += pad + "  \"children\": [\n";
  for (std::size_t i = 0; i < n.children.size(); ++i) {
    render(n.children[i], indent + 4, out);
    out += i + 1 < n.children.size() ? ",\n" : "\n";
  }
  out += pad + "  ]\n" + pad + "}";
}

DocNode node_doc(const Graph& g, const EncodingTree& t, NodeId id) {
  const TreeNode& nd = t.node(id);
  DocNode d;
  if (nd.is_leaf()) d.fields.emplace_back("vertex", json_quote(g.id(nd.marker.front())));
  d.fields.emplace_back("vol", fixed9(nd.volume));
  d.fields.emplace_back("cut", fixed9(nd.cut));
  for (NodeId c : nd.children) d.children.push_back(node_doc(g, t, c));
  return d;
}

TreeShape shape_of(const json& j, const Graph& g, const std::string& where) {
  if (!j.is_object()) throw ParseError("tree node at " + where + " is not an object");
  const bool has_vertex = j.contains("vertex");
  const bool has_children = j.contains("children");
  if (has_vertex == has_children)
    throw ParseError("tree node at " + where + " needs exactly one of \"vertex\" or \"children\"");
  if (has_vertex) {
    if (!j["vertex"].is_string()) throw ParseError("\"vertex\" at " + where + " must be a string");
    const std::string id = j["vertex"].get<std::string>();
    auto v = g.find(id);
    if (!v) throw InvariantError("tree references vertex '" + id + "' which is not in the graph");
    return TreeShape::leaf(*v);
  }
  if (!j["children"].is_array()) throw ParseError("\"children\" at " + where + " must be an array");
  std::vector<TreeShape> kids;
  std::size_t i = 0;
  for (const json& c : j["children"]) kids.push_back(shape_of(c, g, where + "/" + std::to_string(i++)));
  return TreeShape::internal(std::move(kids));
}

}  // namespace

std::string render_doc(const DocNode& root) {
  std::string out;
  render(root, 0, out);
  out += "\n";
  return out;
}

DocNode tree_doc(const Graph& g, const EncodingTree& t) { return node_doc(g, t, EncodingTree::kRoot); }

std::string serialize_tree(const Graph& g, const EncodingTree& t) { return render_doc(tree_doc(g, t)); }

TreeShape parse_tree_shape(std::string_view doc, const Graph& g) {
  json j;
  try {
    j = json::parse(doc);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("malformed tree document: ") + e.what());
  }
  return shape_of(j, g, "root");
}

EncodingTree deserialize_tree(std::string_view doc, const Graph& g) {
  const TreeShape shape = parse_tree_shape(doc, g);
  if (!shape.vertex && shape.children.empty()) throw ParseError("tree root has no children");
  EncodingTree t = EncodingTree::from_shape(g, shape);
  require_valid(g, t);
  return t;
}

EncodingTree load_tree(const std::filesystem::path& path, const Graph& g) { return deserialize_tree(read_file(path), g); }

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::filesystem::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError("cannot write " + path.string());
  out << text;
}

}  // namespace structinfo
