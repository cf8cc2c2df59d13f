#include "ecmkit/reorder.hpp"

#include <algorithm>
#include <numeric>

#include "ecmkit/errors.hpp"

namespace ecmkit {

std::pair<CrsMatrix, std::vector<std::int64_t>> rcm_reorder(const CrsMatrix& a) {
    if (a.nrows != a.ncols) throw validation_error("rcm_reorder needs a square matrix");
    std::int64_t n = a.nrows;

    // Symmetrized adjacency without self loops.
    std::vector<std::vector<std::int64_t>> adj(n);
    for (std::int64_t i = 0; i < n; ++i)
        for (std::int64_t k = a.rp[i]; k < a.rp[i + 1]; ++k) {
            std::int64_t j = a.ci[k];
            if (j == i) continue;
            adj[i].push_back(j);
            adj[j].push_back(i);
        }
    for (auto& nb : adj) {
        std::sort(nb.begin(), nb.end());
        nb.erase(std::unique(nb.begin(), nb.end()), nb.end());
    }
    auto degree = [&](std::int64_t v) { return static_cast<std::int64_t>(adj[v].size()); };

    std::vector<bool> visited(n, false);
    std::vector<std::int64_t> order;
    order.reserve(n);
    std::vector<std::int64_t> queue;

    for (std::int64_t seed = 0; seed < n; ++seed) {
        if (visited[seed]) continue;

        // Find the minimum-degree vertex of this component.
        std::int64_t start = seed;
        queue.assign(1, seed);
        visited[seed] = true;
        std::vector<std::int64_t> component{seed};
        for (size_t q = 0; q < queue.size(); ++q)
            for (std::int64_t w : adj[queue[q]])
                if (!visited[w]) {
                    visited[w] = true;
                    queue.push_back(w);
                    component.push_back(w);
                }
        for (std::int64_t v : component)
            if (degree(v) < degree(start) || (degree(v) == degree(start) && v < start)) start = v;
        for (std::int64_t v : component) visited[v] = false;

        // Cuthill-McKee BFS, then reverse this component's slice.
        size_t comp_begin = order.size();
        visited[start] = true;
        queue.assign(1, start);
        for (size_t q = 0; q < queue.size(); ++q) {
            std::int64_t v = queue[q];
            order.push_back(v);
            std::vector<std::int64_t> next;
            for (std::int64_t w : adj[v])
                if (!visited[w]) next.push_back(w);
            std::sort(next.begin(), next.end(), [&](std::int64_t x, std::int64_t y) {
                return degree(x) != degree(y) ? degree(x) < degree(y) : x < y;
            });
            for (std::int64_t w : next) {
                visited[w] = true;
                queue.push_back(w);
            }
        }
        std::reverse(order.begin() + comp_begin, order.end());
    }

    std::vector<std::int64_t> perm(n); // old -> new
    for (std::int64_t ni = 0; ni < n; ++ni) perm[order[ni]] = ni;
    return {permute_symmetric(a, perm), perm};
}

std::vector<RowRange> partition_weights(const std::vector<std::int64_t>& weights, int nparts) {
    if (nparts < 1) throw validation_error("partition: nparts must be >= 1");
    std::int64_t n = static_cast<std::int64_t>(weights.size());
    std::int64_t total = std::accumulate(weights.begin(), weights.end(), std::int64_t{0});
    std::int64_t lo = 0, hi = total;
    for (std::int64_t w : weights) lo = std::max(lo, w);

    auto parts_needed = [&](std::int64_t cap) {
        int parts = 1;
        std::int64_t cur = 0;
        for (std::int64_t w : weights) {
            if (cur + w > cap) {
                ++parts;
                cur = 0;
            }
            cur += w;
        }
        return parts;
    };

    while (lo < hi) {
        std::int64_t mid = lo + (hi - lo) / 2;
        if (parts_needed(mid) <= nparts)
            hi = mid;
        else
            lo = mid + 1;
    }

    std::vector<RowRange> ranges;
    std::int64_t begin = 0, cur = 0;
    for (std::int64_t i = 0; i < n; ++i) {
        if (cur + weights[i] > lo && cur > 0) {
            ranges.emplace_back(begin, i);
            begin = i;
            cur = 0;
        }
        cur += weights[i];
    }
    ranges.emplace_back(begin, n);
    while (static_cast<int>(ranges.size()) < nparts) ranges.emplace_back(n, n);
    return ranges;
}

namespace {

std::vector<RowRange> partition_even(std::int64_t n, int nparts) {
    std::vector<RowRange> ranges(nparts);
    for (int p = 0; p < nparts; ++p)
        ranges[p] = {n * p / nparts, n * (p + 1) / nparts};
    return ranges;
}

} // namespace

std::vector<RowRange> partition(const CrsMatrix& a, int nparts, PartitionMode mode) {
    if (nparts < 1) throw validation_error("partition: nparts must be >= 1");
    if (mode == PartitionMode::ByRows) return partition_even(a.nrows, nparts);
    std::vector<std::int64_t> weights(a.nrows);
    for (std::int64_t i = 0; i < a.nrows; ++i) weights[i] = a.row_len(i);
    return partition_weights(weights, nparts);
}

std::vector<RowRange> partition(const SellMatrix& a, int nparts, PartitionMode mode) {
    if (nparts < 1) throw validation_error("partition: nparts must be >= 1");
    if (mode == PartitionMode::ByRows) return partition_even(a.nchunks(), nparts);
    // Padded slots are the actual per-chunk work.
    std::vector<std::int64_t> weights(a.nchunks());
    for (std::int64_t i = 0; i < a.nchunks(); ++i)
        weights[i] = static_cast<std::int64_t>(a.C) * a.cl[i];
    return partition_weights(weights, nparts);
}

} // namespace ecmkit
