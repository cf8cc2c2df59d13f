#pragma once

#include <string>
#include <vector>

#include "ecmkit/lattice.hpp"

namespace ecmkit {

enum class LcCondition { None, LCs, LCx, LCy, LCz, LCt };
enum class LcMode { Scalar, Vectorized };

const char* lc_name(LcCondition c);

/// One layer condition: if the per-core cache share exceeds threshold_bytes,
/// the next hierarchy level only has to move v_bytes_per_lup per site update.
struct LcEntry {
    LcCondition condition = LcCondition::None;
    double threshold_bytes = 0.0;
    double v_bytes_per_lup = 0.0;
};

struct LcReport {
    double cache_bytes = 0.0;   // total cache size S_i
    double share_bytes = 0.0;   // per-core share s_i = S_i / n
    int cores = 1;
    std::vector<LcEntry> entries; // ordered none, LC_s, LC_x, LC_y, LC_z, LC_t
    int satisfied = 0;            // index of the strongest satisfied condition

    const LcEntry& best() const { return entries[satisfied]; }
    LcCondition condition() const { return best().condition; }
    double v_bytes_per_lup() const { return best().v_bytes_per_lup; }
};

/// Layer-condition table for the domain-wall stencil. Conditions are
/// evaluated bottom-up (LC_t first) against the per-core share of the cache;
/// the d factor of the vectorized thresholds follows the layout (1 for RIRI,
/// 2 for RRII). w is the write-allocate factor entering the traffic columns
/// (2 with write-allocate, 1 with zero fill).
LcReport lc_analyze(const LatticeGeometry& geom, double cache_bytes, LcMode mode, int cores,
                    double w = 2.0);

/// Bytes touched per site update with no reuse at all.
double dw_footprint_bytes_per_lup();

} // namespace ecmkit
