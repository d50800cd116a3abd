#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <string>

#include "structinfo/encoding_tree.hpp"
#include "structinfo/graph.hpp"

namespace structinfo {

/// Set function g(T_alpha) weighting each node's term in the generalized
/// structural entropy.
class ModuleFunction {
 public:
  enum class Kind { cut, volume, custom };
  using Custom = std::function<double(std::span<const Vertex>)>;

  static ModuleFunction cut() { return ModuleFunction(Kind::cut, "cut", nullptr); }
  static ModuleFunction volume() { return ModuleFunction(Kind::volume, "volume", nullptr); }
  static ModuleFunction custom(std::string name, Custom fn) {
    return ModuleFunction(Kind::custom, std::move(name), std::move(fn));
  }

  Kind kind() const { return kind_; }
  const std::string& name() const { return name_; }

  /// Throws InvariantError if a custom function returns a negative or
  /// non-finite value.
  double operator()(const Graph& g, std::span<const Vertex> marker) const;

 private:
  ModuleFunction(Kind kind, std::string name, Custom fn) : kind_(kind), name_(std::move(name)), fn_(std::move(fn)) {}

  Kind kind_;
  std::string name_;
  Custom fn_;
};

/// H^T(G) = -sum_{alpha != root} (g_alpha / vol) log2(V_alpha / V_parent).
double structural_entropy(const Graph& g, const EncodingTree& t);

/// The same quantity summed edge by edge: for every edge direction x -> y,
/// the information needed to walk from the branch point of the two
/// codewords down to y's leaf.
double structural_entropy_edgewise(const Graph& g, const EncodingTree& t);

/// Generalized entropy with an arbitrary module function.
double module_entropy(const Graph& g, const EncodingTree& t, const ModuleFunction& f);

/// Structural entropy of a distribution over the items of `t`, where
/// V_alpha = g_alpha = sum of p over the marker. Equals shannon_entropy(p)
/// for every valid tree.
double distribution_entropy(const Distribution& p, const EncodingTree& t);

/// C^T(G) = -sum_{alpha != root} ((V_alpha - g_alpha) / vol) log2(V_alpha / V_parent).
double compressing_info(const Graph& g, const EncodingTree& t);

/// Edgewise form: average over edge directions of the information needed to
/// reach the branch point of the two codewords from the root.
double compressing_info_edgewise(const Graph& g, const EncodingTree& t);

/// H^1(G) - H^T(G).
double decoding_info(const Graph& g, const EncodingTree& t);

struct InfoReport {
  double h1;
  double h_t;
  double compress;
  double decode;
  /// compress / h1.
  double ratio;
};

InfoReport info_report(const Graph& g, const EncodingTree& t);

/// Phi(G) * (H^1(G) - 1); a lower bound on the structural entropy of `g`
/// over all encoding trees.
double entropy_lower_bound(const Graph& g, std::size_t conductance_limit = kDefaultConductanceLimit);

/// (1 - Phi(G)) * H^1(G) + Phi(G); an upper bound on compressing information.
double compressing_upper_bound(const Graph& g, std::size_t conductance_limit = kDefaultConductanceLimit);

}  // namespace structinfo
