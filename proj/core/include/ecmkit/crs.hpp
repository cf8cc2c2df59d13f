#pragma once

#include <cstdint>
#include <vector>

namespace ecmkit {

/// Compressed row storage. Canonical form: row pointers non-decreasing,
/// column indices strictly increasing within each row. Column indices are
/// 32-bit on purpose (4-byte indexing is part of the traffic model).
struct CrsMatrix {
    std::int64_t nrows = 0;
    std::int64_t ncols = 0;
    std::vector<std::int64_t> rp;  // length nrows + 1
    std::vector<std::int32_t> ci;  // length nnz
    std::vector<double> val;       // length nnz

    std::int64_t nnz() const { return static_cast<std::int64_t>(ci.size()); }
    std::int64_t row_len(std::int64_t i) const { return rp[i + 1] - rp[i]; }

    /// Throws validation_error when the canonical-form invariants are broken.
    void validate() const;
};

/// Dense rectangular matrix in sparse clothing: every row has exactly nnzr
/// nonzeros in columns 0..nnzr-1. Values come from a fixed-seed generator.
CrsMatrix gen_drect(std::int64_t nrows, std::int64_t nnzr);

/// 27-point stencil operator on an n^3 grid with boundary truncation,
/// 26 on the diagonal and -1 off-diagonal.
CrsMatrix gen_hpcg(int n);

/// Uniformly random pattern with the given density, strictly canonical,
/// reproducible from the seed.
CrsMatrix gen_random(std::int64_t nrows, std::int64_t ncols, double density,
                     std::uint64_t seed);

/// max |i - j| over the stored pattern.
std::int64_t matrix_bandwidth(const CrsMatrix& a);

/// Symmetric permutation P A P^T; perm maps old index -> new index.
CrsMatrix permute_symmetric(const CrsMatrix& a, const std::vector<std::int64_t>& perm);

} // namespace ecmkit
