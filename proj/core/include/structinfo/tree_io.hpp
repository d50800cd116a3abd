#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "structinfo/encoding_tree.hpp"
#include "structinfo/graph.hpp"

namespace structinfo {

/// Fixed 9-decimal rendering used by every text output.
std::string fixed9(double x);
/// JSON string literal for `s`.
std::string json_quote(std::string_view s);
/// JSON array of string literals, in the given order.
std::string json_string_array(const std::vector<std::string>& items);

/// Tree-shaped document node. Field values are raw JSON text. Nodes without
/// children print on one line; others list their fields, then "children".
struct DocNode {
  std::vector<std::pair<std::string, std::string>> fields;
  std::vector<DocNode> children;
};

std::string render_doc(const DocNode& root);

/// Document of `t`: internal nodes `{"vol", "cut", "children"}`, leaves
/// `{"vertex", "vol", "cut"}`.
DocNode tree_doc(const Graph& g, const EncodingTree& t);
std::string serialize_tree(const Graph& g, const EncodingTree& t);

/// Parses a tree document against `g`. `vol`/`cut` fields are ignored and
/// recomputed. Throws ParseError for malformed documents and InvariantError
/// for unknown vertices or an invalid tree.
EncodingTree deserialize_tree(std::string_view doc, const Graph& g);
EncodingTree load_tree(const std::filesystem::path& path, const Graph& g);

/// Shape of a parsed tree document, resolving leaf ids through `g`.
TreeShape parse_tree_shape(std::string_view doc, const Graph& g);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view text);

}  // namespace structinfo
