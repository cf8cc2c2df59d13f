#include "ecmkit/cache_sim.hpp"

#include <unordered_map>

#include "ecmkit/errors.hpp"

namespace ecmkit {

void SimConfig::validate() const {
    if (line_bytes == 0 || (line_bytes & (line_bytes - 1)) != 0)
        throw validation_error("sim: line_bytes must be a power of two");
    if (l1_capacity % line_bytes != 0 || l2_capacity % line_bytes != 0)
        throw validation_error("sim: capacities must be multiples of line_bytes");
    if (l2_shared_by < 1) throw validation_error("sim: l2_shared_by must be >= 1");
    for (const auto* parts : {&l1_partitions, &l2_partitions}) {
        double sum = 0.0;
        for (const auto& [tag, frac] : *parts) {
            if (frac < 0.0 || frac > 1.0)
                throw validation_error("sim: partition fraction out of [0,1] for tag '" + tag +
                                       "'");
            sum += frac;
        }
        if (sum > 1.0 + 1e-12)
            throw validation_error("sim: partition fractions sum to more than 1");
    }
}

double TrafficReport::l1_l2_per_unit() const {
    return norm_units ? static_cast<double>(l1_l2.total()) / norm_units : 0.0;
}

double TrafficReport::l2_mem_per_unit() const {
    return norm_units ? static_cast<double>(l2_mem.total()) / norm_units : 0.0;
}

namespace {

constexpr std::uint32_t kEmpty = 0xffffffffu;

std::uint64_t splitmix(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

/// Fully associative exact-LRU stack: intrusive list over a fixed node pool,
/// open-addressing line lookup with backward-shift deletion.
class LruStack {
public:
    explicit LruStack(std::uint64_t capacity_lines) : capacity_(capacity_lines) {
        if (capacity_ > 0) {
            nodes_.resize(capacity_);
            std::uint64_t slots = 16;
            while (slots < capacity_ * 4) slots <<= 1;
            table_.assign(slots, kEmpty);
            mask_ = slots - 1;
        }
    }

    struct AccessResult {
        bool hit = false;
        bool evicted_dirty = false;
        std::uint8_t evicted_core = 0;
    };

    AccessResult access(std::uint64_t line, bool write, std::uint8_t core) {
        AccessResult r;
        if (capacity_ == 0) {
            // Degenerate partition: every access misses; writes bounce
            // straight back as write-back traffic.
            r.evicted_dirty = write;
            r.evicted_core = core;
            return r;
        }
        std::uint64_t slot = find(line);
        if (table_[slot] != kEmpty) {
            std::uint32_t idx = table_[slot];
            touch(idx);
            if (write) {
                nodes_[idx].dirty = 1;
                nodes_[idx].dirty_core = core;
            }
            r.hit = true;
            return r;
        }
        std::uint32_t idx;
        if (size_ < capacity_) {
            idx = static_cast<std::uint32_t>(size_++);
        } else {
            idx = static_cast<std::uint32_t>(tail_);
            unlink(idx);
            if (nodes_[idx].dirty) {
                r.evicted_dirty = true;
                r.evicted_core = nodes_[idx].dirty_core;
            }
            erase_key(nodes_[idx].line);
            slot = find(line); // table shifted, recompute
        }
        nodes_[idx].line = line;
        nodes_[idx].dirty = write ? 1 : 0;
        nodes_[idx].dirty_core = core;
        link_front(idx);
        table_[slot] = idx;
        return r;
    }

    template <typename F>
    void flush_dirty(F&& fn) {
        for (std::int32_t i = head_; i != -1; i = nodes_[i].next)
            if (nodes_[i].dirty) {
                fn(nodes_[i].line, nodes_[i].dirty_core);
                nodes_[i].dirty = 0;
            }
    }

private:
    struct Node {
        std::uint64_t line = 0;
        std::int32_t prev = -1;
        std::int32_t next = -1;
        std::uint8_t dirty = 0;
        std::uint8_t dirty_core = 0;
    };

    std::uint64_t find(std::uint64_t line) const {
        std::uint64_t slot = splitmix(line) & mask_;
        while (table_[slot] != kEmpty && nodes_[table_[slot]].line != line)
            slot = (slot + 1) & mask_;
        return slot;
    }

    void erase_key(std::uint64_t line) {
        std::uint64_t i = find(line);
        table_[i] = kEmpty;
        std::uint64_t j = i;
        for (;;) {
            j = (j + 1) & mask_;
            if (table_[j] == kEmpty) break;
            std::uint64_t k = splitmix(nodes_[table_[j]].line) & mask_;
            // Can the entry at j move back to the freed slot i?
            bool between = i <= j ? (k <= i || k > j) : (k <= i && k > j);
            if (between) {
                table_[i] = table_[j];
                table_[j] = kEmpty;
                i = j;
            }
        }
    }

    void touch(std::uint32_t idx) {
        if (head_ == static_cast<std::int32_t>(idx)) return;
        unlink(idx);
        link_front(idx);
    }

    void unlink(std::uint32_t idx) {
        Node& n = nodes_[idx];
        if (n.prev != -1) nodes_[n.prev].next = n.next;
        if (n.next != -1) nodes_[n.next].prev = n.prev;
        if (head_ == static_cast<std::int32_t>(idx)) head_ = n.next;
        if (tail_ == static_cast<std::int32_t>(idx)) tail_ = n.prev;
        n.prev = n.next = -1;
    }

    void link_front(std::uint32_t idx) {
        Node& n = nodes_[idx];
        n.prev = -1;
        n.next = head_;
        if (head_ != -1) nodes_[head_].prev = static_cast<std::int32_t>(idx);
        head_ = static_cast<std::int32_t>(idx);
        if (tail_ == -1) tail_ = static_cast<std::int32_t>(idx);
    }

    std::uint64_t capacity_ = 0;
    std::uint64_t size_ = 0;
    std::vector<Node> nodes_;
    std::vector<std::uint32_t> table_;
    std::uint64_t mask_ = 0;
    std::int32_t head_ = -1;
    std::int32_t tail_ = -1;
};

/// One physical cache (a core's L1 or a shared L2), possibly split into
/// per-stream partitions with independent stacks.
struct LevelInstance {
    std::vector<LruStack> parts;
    std::vector<std::uint32_t> tag_to_part;

    LevelInstance(std::uint64_t capacity, std::uint64_t line_bytes,
                  const std::map<std::string, double>& partitions,
                  const std::vector<std::string>& tags) {
        double tagged = 0.0;
        for (const auto& [tag, frac] : partitions) tagged += frac;
        std::uint64_t default_lines =
            static_cast<std::uint64_t>((1.0 - tagged) * capacity + 0.5) / line_bytes;
        parts.emplace_back(default_lines);
        tag_to_part.assign(tags.size(), 0);
        for (const auto& [tag, frac] : partitions) {
            std::uint64_t lines =
                static_cast<std::uint64_t>(frac * capacity + 0.5) / line_bytes;
            parts.emplace_back(lines);
            for (size_t i = 0; i < tags.size(); ++i)
                if (tags[i] == tag) tag_to_part[i] = static_cast<std::uint32_t>(parts.size() - 1);
        }
    }

    LruStack& stack_for(std::uint16_t tag) { return parts[tag_to_part[tag]]; }
};

} // namespace

TrafficReport simulate(TraceSource& trace, const SimConfig& cfg) {
    cfg.validate();
    int ncores = trace.cores();
    if (ncores < 1) throw validation_error("sim: trace has no cores");

    std::vector<LevelInstance> l1s;
    l1s.reserve(ncores);
    for (int c = 0; c < ncores; ++c)
        l1s.emplace_back(cfg.l1_capacity, cfg.line_bytes, cfg.l1_partitions, trace.tags());
    int nl2 = (ncores + cfg.l2_shared_by - 1) / cfg.l2_shared_by;
    std::vector<LevelInstance> l2s;
    l2s.reserve(nl2);
    for (int i = 0; i < nl2; ++i)
        l2s.emplace_back(cfg.l2_capacity, cfg.line_bytes, cfg.l2_partitions, trace.tags());

    TrafficReport rep;
    rep.line_bytes = cfg.line_bytes;
    rep.norm_units = trace.norm_units();
    rep.l1_l2.core_load_bytes.assign(ncores, 0);
    rep.l1_l2.core_store_bytes.assign(ncores, 0);
    rep.l2_mem.core_load_bytes.assign(ncores, 0);
    rep.l2_mem.core_store_bytes.assign(ncores, 0);

    const std::uint64_t lb = cfg.line_bytes;
    const std::uint64_t space = trace.address_space_bytes();
    trace.reset();

    TraceEvent ev;
    bool any = true;
    while (any) {
        any = false;
        for (int core = 0; core < ncores; ++core) {
            if (!trace.next(core, ev)) continue;
            any = true;
            if (ev.addr + ev.size > space)
                throw validation_error("sim: address overflow beyond declared address space");
            bool write = ev.kind == AccessKind::Write;
            std::uint64_t first = ev.addr / lb;
            std::uint64_t last = (ev.addr + ev.size - 1) / lb;
            LevelInstance& l1 = l1s[core];
            LevelInstance& l2 = l2s[core / cfg.l2_shared_by];
            for (std::uint64_t line = first; line <= last; ++line) {
                auto r1 = l1.stack_for(ev.tag).access(line, write,
                                                      static_cast<std::uint8_t>(core));
                if (!r1.hit) {
                    rep.l1_l2.load_bytes += lb;
                    rep.l1_l2.core_load_bytes[core] += lb;
                }
                if (r1.evicted_dirty) {
                    rep.l1_l2.store_bytes += lb;
                    rep.l1_l2.core_store_bytes[core] += lb;
                }
                auto r2 = l2.stack_for(ev.tag).access(line, write,
                                                      static_cast<std::uint8_t>(core));
                if (!r2.hit) {
                    rep.l2_mem.load_bytes += lb;
                    rep.l2_mem.core_load_bytes[core] += lb;
                }
                if (r2.evicted_dirty) {
                    rep.l2_mem.store_bytes += lb;
                    rep.l2_mem.core_store_bytes[r2.evicted_core] += lb;
                }
            }
        }
    }

    // Write back whatever is still dirty so streaming stores balance.
    for (int core = 0; core < ncores; ++core)
        for (auto& part : l1s[core].parts)
            part.flush_dirty([&](std::uint64_t, std::uint8_t owner) {
                rep.l1_l2.store_bytes += lb;
                rep.l1_l2.core_store_bytes[owner] += lb;
            });
    for (auto& l2 : l2s)
        for (auto& part : l2.parts)
            part.flush_dirty([&](std::uint64_t, std::uint8_t owner) {
                rep.l2_mem.store_bytes += lb;
                rep.l2_mem.core_store_bytes[owner] += lb;
            });
    return rep;
}

std::uint64_t ReuseHistogram::fills_at(std::uint64_t capacity_lines) const {
    std::uint64_t fills = cold;
    for (auto it = counts.upper_bound(capacity_lines); it != counts.end(); ++it)
        fills += it->second;
    return fills;
}

std::uint64_t ReuseHistogram::fill_bytes_at(std::uint64_t capacity_bytes) const {
    return fills_at(capacity_bytes / line_bytes) * line_bytes;
}

namespace {

class Fenwick {
public:
    explicit Fenwick(std::size_t n) : bits_(n + 1, 0) {}
    void add(std::size_t i, int delta) {
        for (++i; i < bits_.size(); i += i & (~i + 1)) bits_[i] += delta;
    }
    std::int64_t prefix(std::size_t i) const { // sum of [0, i]
        std::int64_t s = 0;
        for (++i; i > 0; i -= i & (~i + 1)) s += bits_[i];
        return s;
    }

private:
    std::vector<std::int64_t> bits_;
};

} // namespace

ReuseHistogram reuse_distance_histogram(TraceSource& trace, std::uint64_t line_bytes) {
    if (trace.cores() != 1)
        throw validation_error("reuse distance analysis is defined for single-core traces");

    // First pass: count line accesses so the time index can be sized.
    trace.reset();
    TraceEvent ev;
    std::uint64_t total = 0;
    while (trace.next(0, ev))
        total += (ev.addr + ev.size - 1) / line_bytes - ev.addr / line_bytes + 1;

    ReuseHistogram h;
    h.line_bytes = line_bytes;
    h.total_accesses = total;

    Fenwick marked(total);
    std::unordered_map<std::uint64_t, std::uint64_t> last;
    last.reserve(1 << 16);

    trace.reset();
    std::uint64_t t = 0;
    while (trace.next(0, ev)) {
        std::uint64_t first = ev.addr / line_bytes;
        std::uint64_t end = (ev.addr + ev.size - 1) / line_bytes;
        for (std::uint64_t line = first; line <= end; ++line, ++t) {
            auto it = last.find(line);
            if (it == last.end()) {
                ++h.cold;
            } else {
                // Lines whose most recent access lies after ours sit above us
                // in the stack; the inclusive position adds one for the line
                // itself.
                std::int64_t above = marked.prefix(t) - marked.prefix(it->second);
                ++h.counts[static_cast<std::uint64_t>(above) + 1];
                marked.add(it->second, -1);
            }
            marked.add(t, 1);
            last[line] = t;
        }
    }
    return h;
}

} // namespace ecmkit
