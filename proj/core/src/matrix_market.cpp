#include "ecmkit/matrix_market.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

#include "ecmkit/errors.hpp"

namespace ecmkit {

namespace {

std::string lower(std::string s) {
    for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return s;
}

[[noreturn]] void fail(const std::string& source, const std::string& msg) {
    throw validation_error(source + ": " + msg);
}

} // namespace

CrsMatrix read_matrix_market(std::istream& in, const std::string& source) {
    std::string line;
    if (!std::getline(in, line)) fail(source, "empty file");

    std::istringstream header(lower(line));
    std::string banner, object, fmt, field, symmetry;
    header >> banner >> object >> fmt >> field >> symmetry;
    if (banner != "%%matrixmarket" || object != "matrix")
        fail(source, "not a Matrix Market file");
    if (fmt != "coordinate") fail(source, "only coordinate format is supported");
    bool pattern = field == "pattern";
    if (field != "real" && field != "integer" && !pattern)
        fail(source, "unsupported field type '" + field + "'");
    bool symmetric = symmetry == "symmetric";
    if (!symmetric && symmetry != "general")
        fail(source, "unsupported symmetry '" + symmetry + "'");

    // Skip comments and blank lines up to the size line.
    std::int64_t nrows = 0, ncols = 0, nentries = 0;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '%') continue;
        std::istringstream sz(line);
        if (!(sz >> nrows >> ncols >> nentries)) fail(source, "malformed size line: " + line);
        break;
    }
    if (nrows <= 0 || ncols <= 0) fail(source, "missing or invalid size line");

    struct Entry {
        std::int64_t r, c;
        double v;
    };
    std::vector<Entry> entries;
    entries.reserve(symmetric ? 2 * nentries : nentries);

    std::int64_t seen = 0;
    while (seen < nentries && std::getline(in, line)) {
        if (line.empty() || line[0] == '%') continue;
        std::istringstream es(line);
        std::int64_t r, c;
        double v = 1.0;
        if (!(es >> r >> c)) fail(source, "malformed entry: " + line);
        if (!pattern && !(es >> v)) fail(source, "entry missing value: " + line);
        if (r < 1 || r > nrows || c < 1 || c > ncols)
            fail(source, "entry index out of range: " + line);
        entries.push_back({r - 1, c - 1, v});
        if (symmetric && r != c) entries.push_back({c - 1, r - 1, v});
        ++seen;
    }
    if (seen != nentries)
        fail(source, "file declares " + std::to_string(nentries) + " entries but contains " +
                         std::to_string(seen));

    std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
        return a.r != b.r ? a.r < b.r : a.c < b.c;
    });

    CrsMatrix a;
    a.nrows = nrows;
    a.ncols = ncols;
    a.rp.assign(nrows + 1, 0);
    for (size_t k = 0; k < entries.size();) {
        size_t j = k;
        double sum = 0.0;
        while (j < entries.size() && entries[j].r == entries[k].r && entries[j].c == entries[k].c)
            sum += entries[j++].v;
        a.ci.push_back(static_cast<std::int32_t>(entries[k].c));
        a.val.push_back(sum);
        a.rp[entries[k].r + 1]++;
        k = j;
    }
    for (std::int64_t i = 0; i < nrows; ++i) a.rp[i + 1] += a.rp[i];
    a.validate();
    return a;
}

CrsMatrix read_matrix_market(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw io_error("cannot open file: " + path);
    return read_matrix_market(in, path);
}

void write_matrix_market(const CrsMatrix& a, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw io_error("cannot write file: " + path);
    out << "%%MatrixMarket matrix coordinate real general\n";
    out << a.nrows << " " << a.ncols << " " << a.nnz() << "\n";
    char buf[64];
    for (std::int64_t i = 0; i < a.nrows; ++i)
        for (std::int64_t k = a.rp[i]; k < a.rp[i + 1]; ++k) {
            std::snprintf(buf, sizeof buf, "%lld %d %.17g\n", static_cast<long long>(i + 1),
                          a.ci[k] + 1, a.val[k]);
            out << buf;
        }
    if (!out) throw io_error("write failed: " + path);
}

} // namespace ecmkit
