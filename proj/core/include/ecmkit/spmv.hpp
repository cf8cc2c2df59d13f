#pragma once

#include <span>

#include "ecmkit/crs.hpp"
#include "ecmkit/kernel_profile.hpp"
#include "ecmkit/machine_model.hpp"
#include "ecmkit/reorder.hpp"
#include "ecmkit/sell.hpp"
#include "ecmkit/trace.hpp"

namespace ecmkit {

struct SpmvConfig {
    int accumulators = 1; // modulo-variable-expansion width, regroups row sums
    int threads = 1;
    PartitionMode partition_mode = PartitionMode::ByRows;
    bool emit_trace = false;
};

/// y += A x. With k accumulators each row is summed in k interleaved partial
/// sums reduced left-to-right at row end; for a fixed config the result is
/// bitwise reproducible and independent of the thread count (threads own
/// disjoint row ranges).
void spmv_crs(const CrsMatrix& a, std::span<const double> x, std::span<double> y,
              const SpmvConfig& cfg);

/// y += A x in the permuted numbering. x has ncols entries, y has
/// nrows_padded entries; padded lanes contribute exactly zero.
void spmv_sell(const SellMatrix& a, std::span<const double> x, std::span<double> y,
               const SpmvConfig& cfg);

/// Optimal-reuse memory volume 12*nnz + 8*ncols + 16*nrows and the resulting
/// flop/byte intensity (2 flops per nonzero).
struct SpmvVolume {
    double v_mem_bytes = 0.0;
    double intensity = 0.0;
};
SpmvVolume spmv_volume(std::int64_t nnz, std::int64_t nrows, std::int64_t ncols);

/// Instruction-count and traffic profile for the ECM model: per matrix row
/// for CRS, per chunk column for SELL. The right-hand-side access is modeled
/// as a complex gather paired with the index load.
KernelProfile spmv_profile(const CrsMatrix& a, const MachineModel& model);
KernelProfile spmv_profile(const SellMatrix& a, const MachineModel& model);

/// Synthetic-address access trace of one y += A x sweep, suitable for the
/// cache simulator. Normalization unit is one nonzero.
AccessTrace spmv_trace(const CrsMatrix& a, const SpmvConfig& cfg);
AccessTrace spmv_trace(const SellMatrix& a, const SpmvConfig& cfg);

} // namespace ecmkit
