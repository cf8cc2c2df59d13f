#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

namespace ecmkit {

enum class AccessKind : std::uint8_t { Read = 0, Write = 1 };

struct TraceEvent {
    std::uint64_t addr = 0;
    std::uint32_t size = 0;
    std::uint16_t tag = 0;
    std::uint8_t core = 0;
    AccessKind kind = AccessKind::Read;
};

/// Per-core event streams consumed by the cache simulator in lockstep
/// round-robin order. Sources can be materialized traces or generators that
/// produce events on the fly (large lattice traces never touch memory as a
/// whole).
class TraceSource {
public:
    virtual ~TraceSource() = default;
    virtual int cores() const = 0;
    virtual const std::vector<std::string>& tags() const = 0;
    /// Synthetic addresses are compact; simulators may allocate flat
    /// line-index maps over this span.
    virtual std::uint64_t address_space_bytes() const = 0;
    /// Work items (LUPs, nonzeros, iterations) for per-unit normalization.
    virtual std::uint64_t norm_units() const = 0;
    virtual void reset() = 0;
    virtual bool next(int core, TraceEvent& ev) = 0;
};

/// Materialized trace with synthetic array address map. Arrays are placed at
/// page-aligned, non-aliasing bases in registration order.
class AccessTrace : public TraceSource {
public:
    static constexpr std::uint64_t kPageBytes = 1u << 21;

    /// Registers an array and returns its base address; the array name
    /// doubles as the stream tag.
    std::uint64_t add_array(const std::string& name, std::uint64_t bytes);
    std::uint16_t tag_id(const std::string& name) const;

    void push(int core, AccessKind kind, std::uint64_t addr, std::uint32_t size,
              std::uint16_t tag);
    void set_norm_units(std::uint64_t units) { norm_units_ = units; }
    void set_cores(int cores);

    const std::vector<TraceEvent>& events() const { return events_; }

    int cores() const override { return ncores_; }
    const std::vector<std::string>& tags() const override { return tags_; }
    std::uint64_t address_space_bytes() const override { return top_; }
    std::uint64_t norm_units() const override { return norm_units_; }
    void reset() override;
    bool next(int core, TraceEvent& ev) override;

private:
    friend AccessTrace load_trace(const std::string& path);
    friend AccessTrace materialize_trace(TraceSource& source, std::uint64_t max_events);

    std::vector<TraceEvent> events_;
    std::vector<std::string> tags_;
    std::vector<std::uint64_t> bases_;
    std::uint64_t top_ = 0;
    std::uint64_t norm_units_ = 0;
    int ncores_ = 1;
    // per-core cursors into events_
    std::vector<std::vector<std::uint32_t>> percore_;
    std::vector<std::uint32_t> cursor_;
    bool indexed_ = false;
    void build_index();
};

void save_trace(const AccessTrace& t, const std::string& path);
AccessTrace load_trace(const std::string& path);

/// Drains a generator into a materialized trace (lockstep event order), e.g.
/// for writing lattice traces to disk. Refuses traces beyond max_events.
AccessTrace materialize_trace(TraceSource& source,
                              std::uint64_t max_events = 200'000'000);

} // namespace ecmkit
