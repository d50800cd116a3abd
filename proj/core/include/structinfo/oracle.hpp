#pragma once

#include <cstddef>

#include "structinfo/graph.hpp"
#include "structinfo/optimizer.hpp"

namespace structinfo {

inline constexpr std::size_t kPartitionOracleLimit = 10;
inline constexpr std::size_t kTreeOracleVertexLimit = 6;
inline constexpr std::size_t kTreeOracleHeightLimit = 3;

/// Exact minimum of H^T over every set partition of V (trees of height <= 2).
/// Ties keep the lexicographically smallest restricted-growth encoding.
/// Throws SizeGuardError past `max_vertices`.
OptimizeResult brute_force_2d(const Graph& g, std::size_t max_vertices = kPartitionOracleLimit);

/// Exact minimum of H^T over every encoding tree of height <= `height`,
/// enumerated as nested partitions.
OptimizeResult brute_force_kd(const Graph& g, std::size_t height,
                              std::size_t max_vertices = kTreeOracleVertexLimit,
                              std::size_t max_height = kTreeOracleHeightLimit);

/// Exact k-dimensional compressing ratio C^k(G) / H^1(G).
double compressing_ratio_exact(const Graph& g, std::size_t height);

/// Whether `g` is (n, k, rho)-compressible, i.e. its exact k-dimensional
/// compressing ratio is at least `rho`.
bool is_compressible(const Graph& g, std::size_t height, double rho);

}  // namespace structinfo
