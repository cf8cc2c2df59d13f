#include "ecmkit/sell.hpp"

#include <algorithm>
#include <cstring>
#include <fstream>
#include <numeric>

#include "ecmkit/errors.hpp"

namespace ecmkit {

void SellMatrix::validate() const {
    if (C < 1) throw validation_error("sell: C must be >= 1");
    if (nrows_padded != nchunks() * C) throw validation_error("sell: padded row count mismatch");
    if (cs.size() != cl.size()) throw validation_error("sell: cl/cs length mismatch");
    std::int64_t expect = 0;
    for (std::int64_t i = 0; i < nchunks(); ++i) {
        if (cs[i] != expect) throw validation_error("sell: chunk start offsets inconsistent");
        expect += static_cast<std::int64_t>(C) * cl[i];
    }
    if (expect != padded_slots()) throw validation_error("sell: padded slot count inconsistent");
    if (col.size() != val.size()) throw validation_error("sell: col/val length mismatch");
    for (std::int32_t c : col)
        if (c < 0 || c >= ncols) throw validation_error("sell: column index out of range");
    if (beta <= 0.0 || beta > 1.0) throw validation_error("sell: beta out of (0, 1]");
    std::vector<bool> hit(nrows_orig, false);
    if (row_perm.size() != static_cast<size_t>(nrows_orig))
        throw validation_error("sell: row_perm length mismatch");
    for (std::int64_t p : row_perm) {
        if (p < 0 || p >= nrows_orig || hit[p])
            throw validation_error("sell: row_perm is not a bijection");
        hit[p] = true;
    }
}

SellMatrix to_sell(const CrsMatrix& a, std::int32_t C, std::int64_t sigma) {
    if (C < 1 || sigma < 1) throw validation_error("to_sell: C and sigma must be >= 1");
    a.validate();

    SellMatrix m;
    m.C = C;
    m.nrows_orig = a.nrows;
    m.ncols = a.ncols;
    m.nnz_orig = a.nnz();
    m.cols_permuted = a.nrows == a.ncols;

    std::int64_t sigma_eff = (sigma + C - 1) / C * C;
    m.sigma = std::min<std::int64_t>(std::max<std::int64_t>(sigma_eff, 1), std::max<std::int64_t>(a.nrows, 1));

    // Stable descending-length sort within each sigma scope.
    std::vector<std::int64_t> new_to_old(a.nrows);
    std::iota(new_to_old.begin(), new_to_old.end(), 0);
    for (std::int64_t s = 0; s < a.nrows; s += m.sigma) {
        auto begin = new_to_old.begin() + s;
        auto end = new_to_old.begin() + std::min(s + m.sigma, a.nrows);
        std::stable_sort(begin, end, [&](std::int64_t x, std::int64_t y) {
            return a.row_len(x) > a.row_len(y);
        });
    }
    m.row_perm.resize(a.nrows);
    for (std::int64_t n = 0; n < a.nrows; ++n) m.row_perm[new_to_old[n]] = n;

    std::int64_t nchunks = (a.nrows + C - 1) / C;
    m.nrows_padded = nchunks * C;
    m.cl.resize(nchunks);
    m.cs.resize(nchunks);

    // Rows in permuted order with columns remapped (square case) and
    // re-sorted so each stored row is canonical in the permuted numbering.
    std::vector<std::vector<std::pair<std::int32_t, double>>> rows(a.nrows);
    for (std::int64_t old = 0; old < a.nrows; ++old) {
        auto& row = rows[m.row_perm[old]];
        row.reserve(a.row_len(old));
        for (std::int64_t k = a.rp[old]; k < a.rp[old + 1]; ++k) {
            std::int32_t c = a.ci[k];
            if (m.cols_permuted) c = static_cast<std::int32_t>(m.row_perm[c]);
            row.emplace_back(c, a.val[k]);
        }
        if (m.cols_permuted) std::sort(row.begin(), row.end());
    }

    std::int64_t slots = 0;
    for (std::int64_t i = 0; i < nchunks; ++i) {
        std::int32_t width = 0;
        for (std::int32_t k = 0; k < C; ++k) {
            std::int64_t r = i * C + k;
            if (r < a.nrows)
                width = std::max(width, static_cast<std::int32_t>(rows[r].size()));
        }
        m.cl[i] = width;
        m.cs[i] = slots;
        slots += static_cast<std::int64_t>(C) * width;
    }

    m.col.assign(slots, 0);
    m.val.assign(slots, 0.0);
    for (std::int64_t i = 0; i < nchunks; ++i) {
        for (std::int32_t k = 0; k < C; ++k) {
            std::int64_t r = i * C + k;
            const auto* row = r < a.nrows ? &rows[r] : nullptr;
            std::int64_t len = row ? static_cast<std::int64_t>(row->size()) : 0;
            std::int32_t pad_col = len > 0 ? (*row)[len - 1].first : 0;
            for (std::int32_t j = 0; j < m.cl[i]; ++j) {
                std::int64_t at = m.cs[i] + static_cast<std::int64_t>(j) * C + k;
                if (j < len) {
                    m.col[at] = (*row)[j].first;
                    m.val[at] = (*row)[j].second;
                } else {
                    m.col[at] = pad_col;
                }
            }
        }
    }

    m.beta = slots > 0 ? static_cast<double>(a.nnz()) / static_cast<double>(slots) : 1.0;
    m.validate();
    return m;
}

namespace {

constexpr char kMagic[8] = {'E', 'C', 'M', 'S', 'E', 'L', 'L', '\0'};
constexpr std::uint32_t kVersion = 1;

template <typename T>
void put(std::ostream& out, const T& v) {
    out.write(reinterpret_cast<const char*>(&v), sizeof v);
}

template <typename T>
void put_vec(std::ostream& out, const std::vector<T>& v) {
    put(out, static_cast<std::uint64_t>(v.size()));
    out.write(reinterpret_cast<const char*>(v.data()), v.size() * sizeof(T));
}

template <typename T>
void get(std::istream& in, T& v, const std::string& path) {
    in.read(reinterpret_cast<char*>(&v), sizeof v);
    if (!in) throw io_error("truncated sell file: " + path);
}

template <typename T>
void get_vec(std::istream& in, std::vector<T>& v, const std::string& path) {
    std::uint64_t n = 0;
    get(in, n, path);
    v.resize(n);
    in.read(reinterpret_cast<char*>(v.data()), n * sizeof(T));
    if (!in) throw io_error("truncated sell file: " + path);
}

} // namespace

void save_sell(const SellMatrix& m, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw io_error("cannot write file: " + path);
    out.write(kMagic, sizeof kMagic);
    put(out, kVersion);
    put(out, m.C);
    put(out, m.sigma);
    put(out, m.nrows_orig);
    put(out, m.nrows_padded);
    put(out, m.ncols);
    put(out, m.nnz_orig);
    put(out, m.beta);
    put(out, static_cast<std::uint8_t>(m.cols_permuted));
    put_vec(out, m.cl);
    put_vec(out, m.cs);
    put_vec(out, m.col);
    put_vec(out, m.val);
    put_vec(out, m.row_perm);
    if (!out) throw io_error("write failed: " + path);
}

SellMatrix load_sell(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw io_error("cannot open file: " + path);
    char magic[8];
    in.read(magic, sizeof magic);
    if (!in || std::memcmp(magic, kMagic, sizeof kMagic) != 0)
        throw validation_error(path + ": not an ecmkit sell file");
    std::uint32_t version = 0;
    get(in, version, path);
    if (version != kVersion)
        throw validation_error(path + ": unsupported sell file version " +
                               std::to_string(version));
    SellMatrix m;
    get(in, m.C, path);
    get(in, m.sigma, path);
    get(in, m.nrows_orig, path);
    get(in, m.nrows_padded, path);
    get(in, m.ncols, path);
    get(in, m.nnz_orig, path);
    get(in, m.beta, path);
    std::uint8_t perm = 0;
    get(in, perm, path);
    m.cols_permuted = perm != 0;
    get_vec(in, m.cl, path);
    get_vec(in, m.cs, path);
    get_vec(in, m.col, path);
    get_vec(in, m.val, path);
    get_vec(in, m.row_perm, path);
    m.validate();
    return m;
}

} // namespace ecmkit
