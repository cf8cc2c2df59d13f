#include "ecmkit/crs.hpp"

#include <algorithm>
#include <random>

#include "ecmkit/errors.hpp"

namespace ecmkit {

void CrsMatrix::validate() const {
    if (nrows < 0 || ncols < 0) throw validation_error("negative matrix dimension");
    if (rp.size() != static_cast<size_t>(nrows) + 1)
        throw validation_error("row pointer array has wrong length");
    if (rp.front() != 0) throw validation_error("rp[0] must be 0");
    if (rp.back() != nnz()) throw validation_error("rp[nrows] must equal nnz");
    if (ci.size() != val.size()) throw validation_error("ci/val length mismatch");
    for (std::int64_t i = 0; i < nrows; ++i) {
        if (rp[i + 1] < rp[i]) throw validation_error("row pointers must be non-decreasing");
        for (std::int64_t k = rp[i]; k < rp[i + 1]; ++k) {
            if (ci[k] < 0 || ci[k] >= ncols)
                throw validation_error("column index out of range in row " + std::to_string(i));
            if (k > rp[i] && ci[k] <= ci[k - 1])
                throw validation_error("column indices not strictly increasing in row " +
                                       std::to_string(i));
        }
    }
}

CrsMatrix gen_drect(std::int64_t nrows, std::int64_t nnzr) {
    if (nrows < 1 || nnzr < 1) throw validation_error("gen_drect: nrows, nnzr must be >= 1");
    CrsMatrix a;
    a.nrows = nrows;
    a.ncols = nnzr;
    a.rp.resize(nrows + 1);
    a.ci.resize(nrows * nnzr);
    a.val.resize(nrows * nnzr);
    std::mt19937_64 rng(0x5eed0d12ec7ull);
    std::uniform_real_distribution<double> dist(0.1, 1.0);
    for (std::int64_t i = 0; i < nrows; ++i) {
        a.rp[i] = i * nnzr;
        for (std::int64_t j = 0; j < nnzr; ++j) {
            a.ci[i * nnzr + j] = static_cast<std::int32_t>(j);
            a.val[i * nnzr + j] = dist(rng);
        }
    }
    a.rp[nrows] = nrows * nnzr;
    return a;
}

CrsMatrix gen_hpcg(int n) {
    if (n < 2) throw validation_error("gen_hpcg: n must be >= 2");
    std::int64_t nn = n;
    CrsMatrix a;
    a.nrows = nn * nn * nn;
    a.ncols = a.nrows;
    a.rp.reserve(a.nrows + 1);
    a.rp.push_back(0);
    a.ci.reserve(a.nrows * 27);
    a.val.reserve(a.nrows * 27);
    for (std::int64_t z = 0; z < nn; ++z)
        for (std::int64_t y = 0; y < nn; ++y)
            for (std::int64_t x = 0; x < nn; ++x) {
                std::int64_t row = (z * nn + y) * nn + x;
                for (std::int64_t dz = -1; dz <= 1; ++dz)
                    for (std::int64_t dy = -1; dy <= 1; ++dy)
                        for (std::int64_t dx = -1; dx <= 1; ++dx) {
                            std::int64_t xx = x + dx, yy = y + dy, zz = z + dz;
                            if (xx < 0 || xx >= nn || yy < 0 || yy >= nn || zz < 0 || zz >= nn)
                                continue;
                            std::int64_t col = (zz * nn + yy) * nn + xx;
                            a.ci.push_back(static_cast<std::int32_t>(col));
                            a.val.push_back(col == row ? 26.0 : -1.0);
                        }
                a.rp.push_back(static_cast<std::int64_t>(a.ci.size()));
            }
    return a;
}

CrsMatrix gen_random(std::int64_t nrows, std::int64_t ncols, double density,
                     std::uint64_t seed) {
    if (nrows < 1 || ncols < 1) throw validation_error("gen_random: empty shape");
    if (density < 0 || density > 1) throw validation_error("gen_random: density out of [0,1]");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    std::uniform_real_distribution<double> value(-1.0, 1.0);
    CrsMatrix a;
    a.nrows = nrows;
    a.ncols = ncols;
    a.rp.push_back(0);
    for (std::int64_t i = 0; i < nrows; ++i) {
        for (std::int64_t j = 0; j < ncols; ++j)
            if (coin(rng) < density) {
                a.ci.push_back(static_cast<std::int32_t>(j));
                a.val.push_back(value(rng));
            }
        a.rp.push_back(static_cast<std::int64_t>(a.ci.size()));
    }
    return a;
}

std::int64_t matrix_bandwidth(const CrsMatrix& a) {
    std::int64_t bw = 0;
    for (std::int64_t i = 0; i < a.nrows; ++i)
        for (std::int64_t k = a.rp[i]; k < a.rp[i + 1]; ++k)
            bw = std::max(bw, std::abs(i - static_cast<std::int64_t>(a.ci[k])));
    return bw;
}

CrsMatrix permute_symmetric(const CrsMatrix& a, const std::vector<std::int64_t>& perm) {
    if (a.nrows != a.ncols) throw validation_error("symmetric permutation needs a square matrix");
    if (perm.size() != static_cast<size_t>(a.nrows))
        throw validation_error("permutation length mismatch");

    std::vector<std::int64_t> inv(perm.size());
    for (size_t i = 0; i < perm.size(); ++i) {
        if (perm[i] < 0 || perm[i] >= a.nrows) throw validation_error("permutation out of range");
        inv[perm[i]] = static_cast<std::int64_t>(i);
    }

    CrsMatrix b;
    b.nrows = a.nrows;
    b.ncols = a.ncols;
    b.rp.resize(a.nrows + 1);
    b.ci.resize(a.ci.size());
    b.val.resize(a.val.size());
    b.rp[0] = 0;
    std::vector<std::pair<std::int32_t, double>> row;
    for (std::int64_t ni = 0; ni < b.nrows; ++ni) {
        std::int64_t oi = inv[ni];
        row.clear();
        for (std::int64_t k = a.rp[oi]; k < a.rp[oi + 1]; ++k)
            row.emplace_back(static_cast<std::int32_t>(perm[a.ci[k]]), a.val[k]);
        std::sort(row.begin(), row.end());
        std::int64_t base = b.rp[ni];
        for (size_t k = 0; k < row.size(); ++k) {
            b.ci[base + k] = row[k].first;
            b.val[base + k] = row[k].second;
        }
        b.rp[ni + 1] = base + static_cast<std::int64_t>(row.size());
    }
    return b;
}

} // namespace ecmkit
