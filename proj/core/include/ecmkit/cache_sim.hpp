#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "ecmkit/trace.hpp"

namespace ecmkit {

/// Two-level hierarchy: private L1 per core, one L2 shared by every
/// l2_shared_by consecutive cores. Caches are fully associative with exact
/// LRU and independent stacks per level: each level filters the full access
/// stream of the cores it serves, which is the layer-condition idealization.
/// Write policy is fixed: write-back with write-allocate.
///
/// The optional partition maps emulate sector caches: a tagged stream gets
/// the given fraction of the level's capacity as its own LRU stack, untagged
/// streams share the remainder.
struct SimConfig {
    std::uint64_t line_bytes = 256;
    std::uint64_t l1_capacity = 64 * 1024;
    std::uint64_t l2_capacity = 8 * 1024 * 1024;
    int l2_shared_by = 12;
    std::map<std::string, double> l1_partitions; // stream tag -> capacity fraction
    std::map<std::string, double> l2_partitions;

    void validate() const;
};

struct BoundaryTraffic {
    std::uint64_t load_bytes = 0;
    std::uint64_t store_bytes = 0;
    std::vector<std::uint64_t> core_load_bytes;
    std::vector<std::uint64_t> core_store_bytes;

    std::uint64_t total() const { return load_bytes + store_bytes; }
};

struct TrafficReport {
    std::uint64_t line_bytes = 0;
    std::uint64_t norm_units = 0;
    BoundaryTraffic l1_l2;  // L1 <-> L2 boundary
    BoundaryTraffic l2_mem; // L2 <-> memory boundary

    double l1_l2_per_unit() const;
    double l2_mem_per_unit() const;
};

/// Runs the trace to exhaustion (lockstep round-robin across cores, one
/// event per core per round) and flushes dirty lines at the end so
/// write-back traffic is fully accounted.
TrafficReport simulate(TraceSource& trace, const SimConfig& cfg);

/// LRU stack-distance histogram of a single-core trace at line granularity.
/// Distances are inclusive stack positions: in the line sequence a,b,a the
/// second access to a has distance 2. A fully associative LRU cache of k
/// lines therefore misses exactly the accesses with distance > k plus the
/// cold misses (Mattson).
struct ReuseHistogram {
    std::uint64_t line_bytes = 0;
    std::uint64_t cold = 0;
    std::map<std::uint64_t, std::uint64_t> counts; // distance -> accesses
    std::uint64_t total_accesses = 0;

    std::uint64_t fills_at(std::uint64_t capacity_lines) const;
    std::uint64_t fill_bytes_at(std::uint64_t capacity_bytes) const;
};

ReuseHistogram reuse_distance_histogram(TraceSource& trace, std::uint64_t line_bytes = 256);

} // namespace ecmkit
