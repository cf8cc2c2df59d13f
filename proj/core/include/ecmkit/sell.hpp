#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ecmkit/crs.hpp"

namespace ecmkit {

/// SELL-C-sigma storage: rows sorted by descending length within scopes of
/// sigma rows, packed into zero-padded chunks of height C, stored
/// column-major per chunk. The permutation is applied to column indices as
/// well for square matrices, so the stored matrix is P A P^T.
struct SellMatrix {
    std::int32_t C = 0;
    std::int64_t sigma = 0; // effective scope after rounding/clipping
    std::int64_t nrows_orig = 0;
    std::int64_t nrows_padded = 0; // C * nchunks
    std::int64_t ncols = 0;
    std::int64_t nnz_orig = 0;
    std::vector<std::int32_t> cl;       // chunk widths
    std::vector<std::int64_t> cs;       // chunk start offsets into col/val
    std::vector<std::int32_t> col;      // padded, column-major per chunk
    std::vector<double> val;            // padded, column-major per chunk
    std::vector<std::int64_t> row_perm; // old row -> new row
    double beta = 1.0;                  // nnz / padded slots
    bool cols_permuted = false;         // true for square inputs

    std::int64_t nchunks() const { return static_cast<std::int64_t>(cl.size()); }
    std::int64_t padded_slots() const { return static_cast<std::int64_t>(val.size()); }

    void validate() const;
};

/// Converts canonical CRS to SELL-C-sigma. sigma is rounded up to the
/// nearest multiple of C and clipped to the row count; ties in the
/// descending length sort keep original row order, so the conversion is
/// deterministic. Padded slots carry the column index of the last real entry
/// in their lane (0 for empty lanes) and value 0.
SellMatrix to_sell(const CrsMatrix& a, std::int32_t C, std::int64_t sigma);

/// Versioned binary cache format for converted matrices.
void save_sell(const SellMatrix& m, const std::string& path);
SellMatrix load_sell(const std::string& path);

} // namespace ecmkit
