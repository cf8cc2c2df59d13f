#include "ecmkit/trace.hpp"

#include <cstring>
#include <fstream>

#include "ecmkit/errors.hpp"

namespace ecmkit {

std::uint64_t AccessTrace::add_array(const std::string& name, std::uint64_t bytes) {
    for (const auto& t : tags_)
        if (t == name) throw validation_error("trace: duplicate array '" + name + "'");
    std::uint64_t base = (top_ + kPageBytes - 1) / kPageBytes * kPageBytes;
    tags_.push_back(name);
    bases_.push_back(base);
    top_ = base + bytes;
    return base;
}

std::uint16_t AccessTrace::tag_id(const std::string& name) const {
    for (size_t i = 0; i < tags_.size(); ++i)
        if (tags_[i] == name) return static_cast<std::uint16_t>(i);
    throw validation_error("trace: unknown array '" + name + "'");
}

void AccessTrace::set_cores(int cores) {
    if (cores < 1 || cores > 255) throw validation_error("trace: core count out of range");
    ncores_ = cores;
}

void AccessTrace::push(int core, AccessKind kind, std::uint64_t addr, std::uint32_t size,
                       std::uint16_t tag) {
    if (core < 0 || core >= ncores_) throw validation_error("trace: core id out of range");
    if (size == 0) throw validation_error("trace: zero-size access");
    TraceEvent ev;
    ev.addr = addr;
    ev.size = size;
    ev.tag = tag;
    ev.core = static_cast<std::uint8_t>(core);
    ev.kind = kind;
    events_.push_back(ev);
    indexed_ = false;
}

void AccessTrace::build_index() {
    percore_.assign(ncores_, {});
    for (std::uint32_t i = 0; i < events_.size(); ++i)
        percore_[events_[i].core].push_back(i);
    cursor_.assign(ncores_, 0);
    indexed_ = true;
}

void AccessTrace::reset() {
    if (!indexed_) build_index();
    cursor_.assign(ncores_, 0);
}

bool AccessTrace::next(int core, TraceEvent& ev) {
    if (!indexed_) build_index();
    auto& cur = cursor_[core];
    const auto& list = percore_[core];
    if (cur >= list.size()) return false;
    ev = events_[list[cur++]];
    return true;
}

AccessTrace materialize_trace(TraceSource& source, std::uint64_t max_events) {
    AccessTrace t;
    t.ncores_ = source.cores();
    t.tags_ = source.tags();
    t.top_ = source.address_space_bytes();
    t.norm_units_ = source.norm_units();
    source.reset();
    TraceEvent ev;
    bool any = true;
    while (any) {
        any = false;
        for (int core = 0; core < t.ncores_; ++core)
            if (source.next(core, ev)) {
                any = true;
                t.events_.push_back(ev);
                if (t.events_.size() > max_events)
                    throw validation_error("trace too large to materialize (" +
                                           std::to_string(max_events) + " event cap)");
            }
    }
    return t;
}

namespace {

constexpr char kMagic[8] = {'E', 'C', 'M', 'T', 'R', 'A', 'C', 'E'};
constexpr std::uint32_t kVersion = 1;

template <typename T>
void put(std::ostream& out, const T& v) {
    out.write(reinterpret_cast<const char*>(&v), sizeof v);
}

template <typename T>
void get(std::istream& in, T& v, const std::string& path) {
    in.read(reinterpret_cast<char*>(&v), sizeof v);
    if (!in) throw io_error("truncated trace file: " + path);
}

} // namespace

void save_trace(const AccessTrace& t, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw io_error("cannot write file: " + path);
    out.write(kMagic, sizeof kMagic);
    put(out, kVersion);
    put(out, static_cast<std::uint32_t>(t.cores()));
    put(out, t.norm_units());
    put(out, t.address_space_bytes());
    put(out, static_cast<std::uint32_t>(t.tags().size()));
    for (const auto& tag : t.tags()) {
        put(out, static_cast<std::uint32_t>(tag.size()));
        out.write(tag.data(), tag.size());
    }
    put(out, static_cast<std::uint64_t>(t.events().size()));
    for (const TraceEvent& ev : t.events()) {
        put(out, ev.addr);
        put(out, ev.size);
        put(out, ev.tag);
        put(out, ev.core);
        put(out, static_cast<std::uint8_t>(ev.kind));
    }
    if (!out) throw io_error("write failed: " + path);
}

AccessTrace load_trace(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw io_error("cannot open file: " + path);
    char magic[8];
    in.read(magic, sizeof magic);
    if (!in || std::memcmp(magic, kMagic, sizeof kMagic) != 0)
        throw validation_error(path + ": not an ecmkit trace file");
    std::uint32_t version = 0;
    get(in, version, path);
    if (version != kVersion)
        throw validation_error(path + ": unsupported trace version " + std::to_string(version));

    AccessTrace t;
    std::uint32_t ncores = 0, ntags = 0;
    get(in, ncores, path);
    get(in, t.norm_units_, path);
    get(in, t.top_, path);
    get(in, ntags, path);
    t.ncores_ = static_cast<int>(ncores);
    for (std::uint32_t i = 0; i < ntags; ++i) {
        std::uint32_t len = 0;
        get(in, len, path);
        std::string tag(len, '\0');
        in.read(tag.data(), len);
        if (!in) throw io_error("truncated trace file: " + path);
        t.tags_.push_back(tag);
    }
    std::uint64_t nevents = 0;
    get(in, nevents, path);
    t.events_.reserve(nevents);
    for (std::uint64_t i = 0; i < nevents; ++i) {
        TraceEvent ev;
        std::uint8_t kind = 0;
        get(in, ev.addr, path);
        get(in, ev.size, path);
        get(in, ev.tag, path);
        get(in, ev.core, path);
        get(in, kind, path);
        ev.kind = static_cast<AccessKind>(kind);
        t.events_.push_back(ev);
    }
    return t;
}

} // namespace ecmkit
