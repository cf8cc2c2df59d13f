#include "ecmkit/spmv.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include "ecmkit/errors.hpp"
#include "ecmkit/machine_model.hpp"

namespace ecmkit {

namespace {

constexpr int kMaxAccumulators = 64;

void check_cfg(const SpmvConfig& cfg) {
    if (cfg.accumulators < 1 || cfg.accumulators > kMaxAccumulators)
        throw validation_error("spmv: accumulators out of range [1, 64]");
    if (cfg.threads < 1) throw validation_error("spmv: threads must be >= 1");
}

template <typename F>
void run_ranges(const std::vector<RowRange>& ranges, F&& body) {
    if (ranges.size() == 1) {
        body(ranges[0]);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(ranges.size());
    for (const RowRange& r : ranges)
        pool.emplace_back([&body, r] { body(r); });
    for (auto& t : pool) t.join();
}

} // namespace

void spmv_crs(const CrsMatrix& a, std::span<const double> x, std::span<double> y,
              const SpmvConfig& cfg) {
    check_cfg(cfg);
    if (x.size() != static_cast<size_t>(a.ncols) || y.size() != static_cast<size_t>(a.nrows))
        throw validation_error("spmv_crs: vector dimension mismatch");

    const int nacc = cfg.accumulators;
    auto ranges = partition(a, cfg.threads, cfg.partition_mode);
    run_ranges(ranges, [&](RowRange range) {
        double acc[kMaxAccumulators];
        for (std::int64_t i = range.first; i < range.second; ++i) {
            std::fill(acc, acc + nacc, 0.0);
            int m = 0;
            for (std::int64_t k = a.rp[i]; k < a.rp[i + 1]; ++k) {
                acc[m] += a.val[k] * x[a.ci[k]];
                if (++m == nacc) m = 0;
            }
            double sum = acc[0];
            for (int j = 1; j < nacc; ++j) sum += acc[j];
            y[i] += sum;
        }
    });
}

void spmv_sell(const SellMatrix& a, std::span<const double> x, std::span<double> y,
               const SpmvConfig& cfg) {
    check_cfg(cfg);
    if (x.size() != static_cast<size_t>(a.ncols) ||
        y.size() != static_cast<size_t>(a.nrows_padded))
        throw validation_error("spmv_sell: vector dimension mismatch");

    const int nacc = cfg.accumulators;
    const std::int32_t C = a.C;
    auto ranges = partition(a, cfg.threads, cfg.partition_mode);
    run_ranges(ranges, [&](RowRange range) {
        std::vector<double> acc(static_cast<size_t>(C) * nacc);
        for (std::int64_t i = range.first; i < range.second; ++i) {
            std::fill(acc.begin(), acc.end(), 0.0);
            for (std::int32_t j = 0; j < a.cl[i]; ++j) {
                std::int64_t base = a.cs[i] + static_cast<std::int64_t>(j) * C;
                int m = j % nacc;
                for (std::int32_t k = 0; k < C; ++k)
                    acc[static_cast<size_t>(k) * nacc + m] += a.val[base + k] * x[a.col[base + k]];
            }
            for (std::int32_t k = 0; k < C; ++k) {
                double sum = acc[static_cast<size_t>(k) * nacc];
                for (int j = 1; j < nacc; ++j) sum += acc[static_cast<size_t>(k) * nacc + j];
                y[i * C + k] += sum;
            }
        }
    });
}

SpmvVolume spmv_volume(std::int64_t nnz, std::int64_t nrows, std::int64_t ncols) {
    SpmvVolume v;
    v.v_mem_bytes = 12.0 * nnz + 8.0 * ncols + 16.0 * nrows;
    v.intensity = v.v_mem_bytes > 0 ? 2.0 * nnz / v.v_mem_bytes : 0.0;
    return v;
}

KernelProfile spmv_profile(const CrsMatrix& a, const MachineModel& model) {
    const double vl = model.simd_bytes / 8.0;
    const double nnzr = a.nrows > 0 ? static_cast<double>(a.nnz()) / a.nrows : 0.0;
    const double vec_iters = std::ceil(nnzr / vl);

    KernelProfile p;
    p.name = "spmv_crs";
    p.unit = "per-iteration"; // one matrix row
    p.load_dominated = true;
    p.instr_counts["load_std"] = vec_iters + 1.0; // value stream + y load
    p.instr_counts["load_gather_complex_plus_std"] = vec_iters;
    p.instr_counts["fmla"] = vec_iters;
    p.instr_counts["faddv"] = 1.0;
    p.instr_counts["store_std"] = 1.0;

    SpmvVolume v = spmv_volume(a.nnz(), a.nrows, a.ncols);
    double rows = std::max<std::int64_t>(a.nrows, 1);
    // L1<->L2: matrix data streams, the right-hand side is served from L2.
    p.vol_l1l2 = BoundaryVolume{(12.0 + 8.0) * nnzr + 8.0, 8.0};
    p.vol_l2mem = BoundaryVolume{v.v_mem_bytes / rows - 8.0, 8.0};
    return p;
}

KernelProfile spmv_profile(const SellMatrix& a, const MachineModel& model) {
    const double vl = model.simd_bytes / 8.0;
    const double vecs_per_col = a.C / vl; // SIMD loads per chunk column
    const double avg_cl = a.nchunks() > 0
                              ? static_cast<double>(a.padded_slots()) / (a.C * a.nchunks())
                              : 0.0;

    KernelProfile p;
    p.name = "spmv_sell";
    p.unit = "per-iteration"; // one chunk column (C lanes)
    p.load_dominated = true;
    // Chunk bookkeeping and the y update amortize over the chunk width.
    double per_col_amortized = avg_cl > 0 ? 1.0 / avg_cl : 0.0;
    p.instr_counts["load_std"] = vecs_per_col + per_col_amortized * vecs_per_col;
    p.instr_counts["load_gather_complex_plus_std"] = vecs_per_col;
    p.instr_counts["fmla"] = vecs_per_col;
    p.instr_counts["store_std"] = per_col_amortized * vecs_per_col;

    double cols_total = avg_cl > 0 ? static_cast<double>(a.padded_slots()) / a.C : 1.0;
    SpmvVolume v = spmv_volume(a.padded_slots(), a.nrows_padded, a.ncols);
    p.vol_l1l2 = BoundaryVolume{(12.0 + 8.0) * a.C + 16.0 * a.C * per_col_amortized,
                                8.0 * a.C * per_col_amortized};
    p.vol_l2mem = BoundaryVolume{v.v_mem_bytes / cols_total - 8.0 * a.C * per_col_amortized,
                                 8.0 * a.C * per_col_amortized};
    return p;
}

AccessTrace spmv_trace(const CrsMatrix& a, const SpmvConfig& cfg) {
    check_cfg(cfg);
    AccessTrace t;
    t.set_cores(cfg.threads);
    std::uint64_t rp_base = t.add_array("rp", (a.nrows + 1) * 8);
    std::uint64_t ci_base = t.add_array("ci", a.nnz() * 4);
    std::uint64_t val_base = t.add_array("val", a.nnz() * 8);
    std::uint64_t x_base = t.add_array("x", a.ncols * 8);
    std::uint64_t y_base = t.add_array("y", a.nrows * 8);
    std::uint16_t rp_t = t.tag_id("rp"), ci_t = t.tag_id("ci"), val_t = t.tag_id("val"),
                  x_t = t.tag_id("x"), y_t = t.tag_id("y");

    auto ranges = partition(a, cfg.threads, cfg.partition_mode);
    for (int core = 0; core < cfg.threads; ++core) {
        auto [lo, hi] = ranges[core];
        for (std::int64_t i = lo; i < hi; ++i) {
            t.push(core, AccessKind::Read, rp_base + (i + 1) * 8, 8, rp_t);
            t.push(core, AccessKind::Read, y_base + i * 8, 8, y_t);
            for (std::int64_t k = a.rp[i]; k < a.rp[i + 1]; ++k) {
                t.push(core, AccessKind::Read, ci_base + k * 4, 4, ci_t);
                t.push(core, AccessKind::Read, val_base + k * 8, 8, val_t);
                t.push(core, AccessKind::Read, x_base + static_cast<std::uint64_t>(a.ci[k]) * 8,
                       8, x_t);
            }
            t.push(core, AccessKind::Write, y_base + i * 8, 8, y_t);
        }
    }
    t.set_norm_units(a.nnz());
    return t;
}

AccessTrace spmv_trace(const SellMatrix& a, const SpmvConfig& cfg) {
    check_cfg(cfg);
    AccessTrace t;
    t.set_cores(cfg.threads);
    std::uint64_t cs_base = t.add_array("cs", a.nchunks() * 8);
    std::uint64_t cl_base = t.add_array("cl", a.nchunks() * 4);
    std::uint64_t col_base = t.add_array("col", a.padded_slots() * 4);
    std::uint64_t val_base = t.add_array("val", a.padded_slots() * 8);
    std::uint64_t x_base = t.add_array("x", a.ncols * 8);
    std::uint64_t y_base = t.add_array("y", a.nrows_padded * 8);
    std::uint16_t cs_t = t.tag_id("cs"), cl_t = t.tag_id("cl"), col_t = t.tag_id("col"),
                  val_t = t.tag_id("val"), x_t = t.tag_id("x"), y_t = t.tag_id("y");

    const std::int32_t C = a.C;
    auto ranges = partition(a, cfg.threads, cfg.partition_mode);
    for (int core = 0; core < cfg.threads; ++core) {
        auto [lo, hi] = ranges[core];
        for (std::int64_t i = lo; i < hi; ++i) {
            t.push(core, AccessKind::Read, cs_base + i * 8, 8, cs_t);
            t.push(core, AccessKind::Read, cl_base + i * 4, 4, cl_t);
            t.push(core, AccessKind::Read, y_base + i * C * 8, C * 8, y_t);
            for (std::int32_t j = 0; j < a.cl[i]; ++j) {
                std::int64_t base = a.cs[i] + static_cast<std::int64_t>(j) * C;
                t.push(core, AccessKind::Read, col_base + base * 4, C * 4, col_t);
                t.push(core, AccessKind::Read, val_base + base * 8, C * 8, val_t);
                for (std::int32_t k = 0; k < C; ++k)
                    t.push(core, AccessKind::Read,
                           x_base + static_cast<std::uint64_t>(a.col[base + k]) * 8, 8, x_t);
            }
            t.push(core, AccessKind::Write, y_base + i * C * 8, C * 8, y_t);
        }
    }
    t.set_norm_units(a.nnz_orig);
    return t;
}

} // namespace ecmkit
