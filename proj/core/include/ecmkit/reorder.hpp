#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "ecmkit/crs.hpp"
#include "ecmkit/sell.hpp"

namespace ecmkit {

/// Reverse Cuthill-McKee on the symmetrized pattern. BFS starts at the
/// minimum-degree vertex of each component, neighbors are visited in
/// ascending degree order, and each component's ordering is reversed in
/// place (so isolated vertices keep their position). Returns the permuted
/// matrix P A P^T together with the old->new permutation.
std::pair<CrsMatrix, std::vector<std::int64_t>> rcm_reorder(const CrsMatrix& a);

enum class PartitionMode { ByRows, ByNnz };

/// Contiguous half-open [begin, end) ranges of rows (CRS) or chunks (SELL)
/// covering everything disjointly; empty ranges pad the tail when there is
/// less work than parts.
using RowRange = std::pair<std::int64_t, std::int64_t>;

std::vector<RowRange> partition(const CrsMatrix& a, int nparts, PartitionMode mode);
std::vector<RowRange> partition(const SellMatrix& a, int nparts, PartitionMode mode);

/// Optimal contiguous min-max split of a weight sequence (binary search on
/// the bottleneck plus greedy packing).
std::vector<RowRange> partition_weights(const std::vector<std::int64_t>& weights, int nparts);

} // namespace ecmkit
