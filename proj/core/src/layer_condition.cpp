#include "ecmkit/layer_condition.hpp"

#include "ecmkit/errors.hpp"

namespace ecmkit {

const char* lc_name(LcCondition c) {
    switch (c) {
        case LcCondition::None: return "none";
        case LcCondition::LCs: return "LC_s";
        case LcCondition::LCx: return "LC_x";
        case LcCondition::LCy: return "LC_y";
        case LcCondition::LCz: return "LC_z";
        case LcCondition::LCt: return "LC_t";
    }
    return "?";
}

double dw_footprint_bytes_per_lup() {
    // 8 gauge matrices, 8 input spinors, one output spinor, 16 B per complex.
    return (8 * 9 + 8 * 12 + 12) * 16.0;
}

LcReport lc_analyze(const LatticeGeometry& geom, double cache_bytes, LcMode mode, int cores,
                    double w) {
    geom.validate();
    if (cores < 1) throw validation_error("lc_analyze: cores must be >= 1");
    if (cache_bytes < 0) throw validation_error("lc_analyze: negative cache size");
    if (w < 1.0 || w > 2.0) throw validation_error("lc_analyze: w must be in [1, 2]");

    const double u = 72.0 / geom.ls; // gauge bytes amortized over the s loop, in complexes
    const double d = geom.layout == Layout::Rrii ? 2.0 : 1.0;
    const double lx = geom.lx, ly = geom.ly, lz = geom.lz, ls = geom.ls;

    auto traffic = [&](double spinors) { return (u + spinors * 12.0 + w * 12.0) * 16.0; };
    // Cache footprints keep a single copy of the output tile, hence +12
    // without the write-allocate factor.
    auto hold = [&](double spinors) { return (u + spinors * 12.0 + 12.0) * 16.0; };

    LcReport rep;
    rep.cache_bytes = cache_bytes;
    rep.cores = cores;
    rep.share_bytes = cache_bytes / cores;

    const bool vec = mode == LcMode::Vectorized;
    LcEntry none{LcCondition::None, 0.0, (72.0 + 96.0 + w * 12.0) * 16.0};
    LcEntry lcs{LcCondition::LCs, vec ? 11520.0 : 2880.0, traffic(8)};
    LcEntry lcx{LcCondition::LCx, (vec ? d * 8.0 : 2.0) * ls * hold(8), traffic(7)};
    LcEntry lcy{LcCondition::LCy, (vec ? d * 8.0 : 2.0) * ls * lx * hold(7), traffic(5)};
    LcEntry lcz{LcCondition::LCz, (vec ? 8.0 : 2.0) * ls * lx * ly * hold(5), traffic(3)};
    LcEntry lct{LcCondition::LCt, (vec ? 4.0 : 2.0) * ls * lx * ly * lz * hold(3), traffic(1)};
    rep.entries = {none, lcs, lcx, lcy, lcz, lct};

    rep.satisfied = 0;
    for (int i = static_cast<int>(rep.entries.size()) - 1; i >= 0; --i)
        if (rep.share_bytes > rep.entries[i].threshold_bytes) {
            rep.satisfied = i;
            break;
        }
    return rep;
}

} // namespace ecmkit
