#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "ecmkit/cache_sim.hpp"
#include "ecmkit/errors.hpp"

using namespace ecmkit;

namespace {

AccessTrace stream_trace(std::uint64_t bytes, AccessKind kind, std::uint32_t step = 64) {
    AccessTrace t;
    std::uint64_t base = t.add_array("a", bytes);
    std::uint16_t tag = t.tag_id("a");
    for (std::uint64_t off = 0; off < bytes; off += step)
        t.push(0, kind, base + off, step, tag);
    t.set_norm_units(bytes / step);
    return t;
}

} // namespace

TEST_CASE("cold sequential stream misses once per line") {
    AccessTrace t = stream_trace(1 << 20, AccessKind::Read);
    SimConfig cfg;
    cfg.l1_capacity = 64 * 1024;
    TrafficReport rep = simulate(t, cfg);
    CHECK(rep.l1_l2.load_bytes == (1 << 20));
    CHECK(rep.l1_l2.store_bytes == 0);
    CHECK(rep.l2_mem.load_bytes == (1 << 20));
}

TEST_CASE("a repeated line hits") {
    AccessTrace t;
    std::uint64_t base = t.add_array("a", 4096);
    std::uint16_t tag = t.tag_id("a");
    t.push(0, AccessKind::Read, base, 8, tag);
    t.push(0, AccessKind::Read, base + 8, 8, tag); // same 256 B line
    t.set_norm_units(2);
    TrafficReport rep = simulate(t, SimConfig{});
    CHECK(rep.l1_l2.load_bytes == 256);
    CHECK(rep.l2_mem.load_bytes == 256);
}

TEST_CASE("triad-style streams cost four lines per three touched") {
    // b and c read, a written: write-allocate plus write-back makes it
    // 256 B of memory traffic per 64 B vector iteration.
    std::uint64_t n = 1 << 22;
    AccessTrace t;
    std::uint64_t a = t.add_array("a", n), b = t.add_array("b", n), c = t.add_array("c", n);
    std::uint16_t ta = t.tag_id("a"), tb = t.tag_id("b"), tc = t.tag_id("c");
    for (std::uint64_t off = 0; off < n; off += 64) {
        t.push(0, AccessKind::Read, b + off, 64, tb);
        t.push(0, AccessKind::Read, c + off, 64, tc);
        t.push(0, AccessKind::Write, a + off, 64, ta);
    }
    t.set_norm_units(n / 64);
    SimConfig cfg;
    TrafficReport rep = simulate(t, cfg);
    CHECK(rep.l2_mem.total() == 4 * n);
    CHECK(rep.l2_mem_per_unit() == doctest::Approx(256.0));
    CHECK(rep.l2_mem.load_bytes == 3 * n);
    CHECK(rep.l2_mem.store_bytes == n);
}

TEST_CASE("pure store stream balances loads and stores at every boundary") {
    AccessTrace t = stream_trace(1 << 21, AccessKind::Write);
    TrafficReport rep = simulate(t, SimConfig{});
    CHECK(rep.l1_l2.load_bytes == rep.l1_l2.store_bytes);
    CHECK(rep.l2_mem.load_bytes == rep.l2_mem.store_bytes);
    CHECK(rep.l1_l2.load_bytes == (1 << 21));
}

TEST_CASE("single-tag full-capacity partition equals no partitioning") {
    std::mt19937_64 rng(11);
    AccessTrace t;
    std::uint64_t base = t.add_array("a", 1 << 20);
    std::uint16_t tag = t.tag_id("a");
    for (int i = 0; i < 20000; ++i)
        t.push(0, AccessKind::Read, base + (rng() % (1 << 20)), 8, tag);
    t.set_norm_units(20000);

    SimConfig plain;
    plain.l1_capacity = 16 * 1024;
    plain.l2_capacity = 256 * 1024;
    SimConfig parted = plain;
    parted.l1_partitions["a"] = 1.0;
    parted.l2_partitions["a"] = 1.0;

    TrafficReport r1 = simulate(t, plain);
    TrafficReport r2 = simulate(t, parted);
    CHECK(r1.l1_l2.load_bytes == r2.l1_l2.load_bytes);
    CHECK(r1.l2_mem.load_bytes == r2.l2_mem.load_bytes);
    CHECK(r1.l2_mem.store_bytes == r2.l2_mem.store_bytes);
}

TEST_CASE("a smaller sector evicts a streaming tag sooner") {
    // The tagged stream revisits a 512 KiB window; with a small partition it
    // can no longer keep the window resident in L2.
    AccessTrace t;
    std::uint64_t base = t.add_array("m", 512 * 1024);
    std::uint16_t tag = t.tag_id("m");
    for (int pass = 0; pass < 4; ++pass)
        for (std::uint64_t off = 0; off < 512 * 1024; off += 256)
            t.push(0, AccessKind::Read, base + off, 256, tag);
    t.set_norm_units(1);

    SimConfig roomy;
    roomy.l2_capacity = 1024 * 1024;
    SimConfig tight = roomy;
    tight.l2_partitions["m"] = 0.125; // 128 KiB sector

    CHECK(simulate(t, roomy).l2_mem.load_bytes == 512 * 1024);
    CHECK(simulate(t, tight).l2_mem.load_bytes == 4 * 512 * 1024);
}

TEST_CASE("fraction sums above one are rejected") {
    SimConfig cfg;
    cfg.l2_partitions["a"] = 0.7;
    cfg.l2_partitions["b"] = 0.6;
    AccessTrace t = stream_trace(4096, AccessKind::Read);
    CHECK_THROWS_AS(simulate(t, cfg), validation_error);
}

TEST_CASE("address overflow is reported") {
    AccessTrace t;
    std::uint64_t base = t.add_array("a", 128);
    t.push(0, AccessKind::Read, base + 256, 8, t.tag_id("a"));
    t.set_norm_units(1);
    CHECK_THROWS_AS(simulate(t, SimConfig{}), validation_error);
}

TEST_CASE("stack distances: a b a") {
    AccessTrace t;
    std::uint64_t base = t.add_array("a", 4096);
    std::uint16_t tag = t.tag_id("a");
    t.push(0, AccessKind::Read, base, 8, tag);       // a
    t.push(0, AccessKind::Read, base + 256, 8, tag); // b
    t.push(0, AccessKind::Read, base, 8, tag);       // a again
    t.set_norm_units(3);
    ReuseHistogram h = reuse_distance_histogram(t, 256);
    CHECK(h.cold == 2);
    REQUIRE(h.counts.size() == 1);
    CHECK(h.counts.begin()->first == 2);
    CHECK(h.fills_at(1) == 3); // distance 2 misses in a single-line cache
    CHECK(h.fills_at(2) == 2);
}

TEST_CASE("sequential stream is all cold") {
    AccessTrace t = stream_trace(1 << 16, AccessKind::Read, 256);
    ReuseHistogram h = reuse_distance_histogram(t, 256);
    CHECK(h.cold == (1 << 16) / 256);
    CHECK(h.counts.empty());
}

TEST_CASE("histogram traffic equals simulation for every capacity") {
    std::mt19937_64 rng(42);
    for (int trial = 0; trial < 50; ++trial) {
        AccessTrace t;
        std::uint64_t span = 1 << (12 + rng() % 8);
        std::uint64_t base = t.add_array("a", span);
        std::uint16_t tag = t.tag_id("a");
        int n = 500 + static_cast<int>(rng() % 3000);
        for (int i = 0; i < n; ++i) {
            // Mix of strided and random accesses, loads and stores.
            std::uint64_t addr = rng() % 4 == 0 ? (i * 64) % (span - 64) : rng() % (span - 8);
            t.push(0, rng() % 3 == 0 ? AccessKind::Write : AccessKind::Read, base + addr, 8,
                   tag);
        }
        t.set_norm_units(n);
        ReuseHistogram h = reuse_distance_histogram(t, 256);

        for (std::uint64_t cap : {256u, 512u, 1024u, 4096u, 16384u, 65536u}) {
            SimConfig cfg;
            cfg.l1_capacity = cap;
            cfg.l2_capacity = 1 << 22;
            TrafficReport rep = simulate(t, cfg);
            CHECK_MESSAGE(rep.l1_l2.load_bytes == h.fill_bytes_at(cap), "capacity ", cap);
        }
        // Miss counts never increase with capacity.
        std::uint64_t prev = ~0ull;
        for (std::uint64_t cap = 1; cap <= 512; cap *= 2) {
            std::uint64_t fills = h.fills_at(cap);
            CHECK(fills <= prev);
            prev = fills;
        }
    }
}

TEST_CASE("multicore: per-core traffic sums to the aggregate") {
    std::mt19937_64 rng(9);
    AccessTrace t;
    t.set_cores(4);
    std::uint64_t base = t.add_array("a", 1 << 20);
    std::uint16_t tag = t.tag_id("a");
    for (int i = 0; i < 10000; ++i)
        t.push(static_cast<int>(rng() % 4), rng() % 2 ? AccessKind::Write : AccessKind::Read,
               base + (rng() % (1 << 20)), 8, tag);
    t.set_norm_units(10000);
    SimConfig cfg;
    cfg.l1_capacity = 8 * 1024;
    cfg.l2_capacity = 128 * 1024;
    TrafficReport rep = simulate(t, cfg);
    std::uint64_t l1_load = 0, l1_store = 0, l2_load = 0, l2_store = 0;
    for (int c = 0; c < 4; ++c) {
        l1_load += rep.l1_l2.core_load_bytes[c];
        l1_store += rep.l1_l2.core_store_bytes[c];
        l2_load += rep.l2_mem.core_load_bytes[c];
        l2_store += rep.l2_mem.core_store_bytes[c];
    }
    CHECK(l1_load == rep.l1_l2.load_bytes);
    CHECK(l1_store == rep.l1_l2.store_bytes);
    CHECK(l2_load == rep.l2_mem.load_bytes);
    CHECK(l2_store == rep.l2_mem.store_bytes);
}

TEST_CASE("shared l2 sees cross-core reuse") {
    // Two cores touch the same array in lockstep: the second toucher hits.
    AccessTrace t;
    t.set_cores(2);
    std::uint64_t base = t.add_array("a", 1 << 18);
    std::uint16_t tag = t.tag_id("a");
    for (std::uint64_t off = 0; off < (1 << 18); off += 256) {
        t.push(0, AccessKind::Read, base + off, 256, tag);
        t.push(1, AccessKind::Read, base + off, 256, tag);
    }
    t.set_norm_units(1);
    SimConfig cfg;
    cfg.l1_capacity = 1024; // tiny, so reuse must come from L2
    cfg.l2_capacity = 1 << 20;
    TrafficReport rep = simulate(t, cfg);
    CHECK(rep.l2_mem.load_bytes == (1 << 18));      // one fetch per line
    CHECK(rep.l1_l2.load_bytes == 2 * (1 << 18));   // both private L1s miss
}
