#include "structinfo/similarity.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>

#include "structinfo/error.hpp"

namespace structinfo {

SimilarityMatrix::SimilarityMatrix(std::vector<std::string> ids, std::vector<double> values)
    : ids_(std::move(ids)), values_(std::move(values)) {
  const std::size_t n = ids_.size();
  if (values_.size() != n * n) throw InvariantError("similarity matrix is not square");
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      const double x = (*this)(i, j);
      if (!std::isfinite(x) || x < 0.0)
        throw InvariantError("similarity entry (" + ids_[i] + ", " + ids_[j] + ") is negative or non-finite");
      if (x != (*this)(j, i))
        throw InvariantError("similarity matrix is not symmetric at (" + ids_[i] + ", " + ids_[j] + ")");
    }
  }
}

namespace {

std::vector<std::string> split_csv_row(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  for (char c : line) {
    if (c == ',') {
      cells.push_back(cell);
      cell.clear();
    } else if (c != '\r') {
      cell.push_back(c);
    }
  }
  cells.push_back(cell);
  for (auto& s : cells) {
    auto b = s.find_first_not_of(" \t");
    auto e = s.find_last_not_of(" \t");
    s = (b == std::string::npos) ? std::string() : s.substr(b, e - b + 1);
  }
  return cells;
}

}  // namespace

SimilarityMatrix parse_similarity_csv(std::istream& in) {
  std::string line;
  std::size_t lineno = 0;
  std::vector<std::string> header;
  while (header.empty() && std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    header = split_csv_row(line);
  }
  if (header.size() < 2) throw ParseError("similarity CSV needs a header row of sample identifiers");
  std::vector<std::string> ids(header.begin() + 1, header.end());
  const std::size_t n = ids.size();

  std::vector<double> values;
  values.reserve(n * n);
  std::size_t row = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    auto cells = split_csv_row(line);
    if (cells.size() != n + 1)
      throw ParseError("line " + std::to_string(lineno) + ": expected " + std::to_string(n + 1) + " cells");
    if (row >= n) throw ParseError("line " + std::to_string(lineno) + ": more rows than header columns");
    if (cells[0] != ids[row])
      throw ParseError("line " + std::to_string(lineno) + ": row identifier '" + cells[0] +
                       "' does not match column '" + ids[row] + "'");
    for (std::size_t j = 1; j <= n; ++j) {
      const std::string& c = cells[j];
      double x = 0.0;
      auto [ptr, ec] = std::from_chars(c.data(), c.data() + c.size(), x);
      if (c.empty() || ec != std::errc() || ptr != c.data() + c.size())
        throw ParseError("line " + std::to_string(lineno) + ": bad number '" + c + "'");
      values.push_back(x);
    }
    ++row;
  }
  if (row != n) throw ParseError("similarity CSV has " + std::to_string(row) + " rows for " + std::to_string(n) + " columns");

  // Asymmetry in a file is a format error rather than a domain violation.
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (values[i * n + j] != values[j * n + i])
        throw ParseError("similarity CSV is not symmetric at (" + ids[i] + ", " + ids[j] + ")");
  return SimilarityMatrix(std::move(ids), std::move(values));
}

SimilarityMatrix load_similarity_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open similarity file '" + path.string() + "'");
  return parse_similarity_csv(in);
}

std::vector<WeightedPair> ranked_pairs(const SimilarityMatrix& sim) {
  std::vector<WeightedPair> pairs;
  const std::size_t n = sim.size();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (sim(i, j) > 0.0) pairs.push_back({static_cast<Vertex>(i), static_cast<Vertex>(j), sim(i, j)});
  std::stable_sort(pairs.begin(), pairs.end(),
                   [](const WeightedPair& a, const WeightedPair& b) { return a.weight > b.weight; });
  return pairs;
}

Graph build_topk_graph(const std::vector<std::string>& ids, const std::vector<WeightedPair>& ranked,
                       std::size_t k) {
  if (k == 0) throw InvariantError("k must be positive");
  if (k > ranked.size())
    throw InvariantError("k = " + std::to_string(k) + " exceeds the " + std::to_string(ranked.size()) +
                         " positive pairs");
  std::vector<Edge> edges;
  edges.reserve(k);
  for (std::size_t i = 0; i < k; ++i) edges.push_back({ranked[i].u, ranked[i].v, ranked[i].weight});
  try {
    return Graph::create(ids, std::move(edges));
  } catch (const InvariantError& e) {
    throw InvariantError("top-" + std::to_string(k) + " graph rejected (k too small?): " + e.what());
  }
}

Graph build_topk_graph(const SimilarityMatrix& sim, std::size_t k) {
  return build_topk_graph(sim.ids(), ranked_pairs(sim), k);
}

}  // namespace structinfo
