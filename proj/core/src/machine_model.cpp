#include "ecmkit/machine_model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "ecmkit/errors.hpp"
#include "ecmkit/kvfile.hpp"

namespace ecmkit {

namespace {

constexpr const char* kFormatTag = "ecmkit-machine/1";

InstrKind parse_kind(const std::string& s, const std::string& ctx) {
    if (s == "load") return InstrKind::Load;
    if (s == "store") return InstrKind::Store;
    if (s == "compute") return InstrKind::Compute;
    if (s == "predicate") return InstrKind::Predicate;
    throw validation_error(ctx + ": unknown instruction kind '" + s + "'");
}

const char* kind_name(InstrKind k) {
    switch (k) {
        case InstrKind::Load: return "load";
        case InstrKind::Store: return "store";
        case InstrKind::Compute: return "compute";
        case InstrKind::Predicate: return "predicate";
    }
    return "?";
}

bool is_pow2(std::uint64_t v) { return v != 0 && (v & (v - 1)) == 0; }

const KvEntry* find_or_throw(const KvSection& sec, const std::string& key,
                             const std::string& src) {
    const KvEntry* e = sec.find(key);
    if (!e)
        throw validation_error(src + ": missing key '" + key + "' in section [" + sec.name + "]");
    return e;
}

void validate(const MachineModel& m, const std::string& source) {
    auto fail = [&](const std::string& field, const std::string& msg) {
        throw validation_error(source + ": field '" + field + "': " + msg);
    };

    if (m.clock_hz <= 0) fail("machine.clock_hz", "must be > 0");
    if (m.simd_bytes <= 0) fail("machine.simd_bytes", "must be > 0");
    if (m.cores_per_domain < 1) fail("machine.cores_per_domain", "must be >= 1");
    if (m.num_domains < 1) fail("machine.num_domains", "must be >= 1");
    if (m.peak_flops <= 0) fail("machine.peak_flops", "must be > 0");
    if (m.mem_bw_readonly_chip < m.mem_bw_readonly_domain)
        fail("machine.mem_bw_readonly_chip", "chip bandwidth below domain bandwidth");
    if (m.mem_bw_triad_chip < m.mem_bw_triad_domain)
        fail("machine.mem_bw_triad_chip", "chip bandwidth below domain bandwidth");
    if (m.levels.empty()) fail("level", "at least one memory level required");

    for (size_t i = 0; i < m.levels.size(); ++i) {
        const MemLevel& lv = m.levels[i];
        bool unbounded = lv.capacity_bytes == 0;
        if (!is_pow2(lv.line_bytes))
            fail("level." + lv.name + ".line_bytes", "must be a power of two");
        if (!unbounded && (lv.load_bw <= 0 || lv.store_bw <= 0))
            fail("level." + lv.name + ".load_bw", "cache levels need load_bw, store_bw > 0");
        if (lv.shared_by_cores < 1)
            fail("level." + lv.name + ".shared_by_cores", "must be >= 1");
        if (i > 0) {
            const MemLevel& below = m.levels[i - 1];
            bool below_unbounded = below.capacity_bytes == 0;
            // capacity 0 means unbounded and may only appear at the top
            if (below_unbounded)
                fail("level." + below.name + ".capacity_bytes",
                     "unbounded level must be the last one");
            if (!unbounded && lv.capacity_bytes <= below.capacity_bytes)
                fail("level." + lv.name + ".capacity_bytes",
                     "capacity must strictly increase up the hierarchy (" + lv.name +
                         " <= " + below.name + ")");
        }
    }

    for (const auto& [name, spec] : m.instructions) {
        if (spec.recip_throughput_cy <= 0)
            fail("instruction." + name + ".recip_throughput", "must be > 0");
        if (spec.latency_cy < 0)
            fail("instruction." + name + ".latency", "must be >= 0");
        double port_sum = 0.0;
        for (const auto& [port, cy] : spec.port_cycles) {
            if (std::find(m.ports.begin(), m.ports.end(), port) == m.ports.end())
                fail("instruction." + name + ".ports", "undeclared port group '" + port + "'");
            if (cy < 0) fail("instruction." + name + ".ports", "negative port cycles");
            port_sum += cy;
        }
        if (port_sum + 1e-9 < spec.recip_throughput_cy)
            fail("instruction." + name + ".ports",
                 "port cycles sum below reciprocal throughput");
    }
}

} // namespace

const MemLevel& MachineModel::level(const std::string& name) const {
    for (const auto& lv : levels)
        if (lv.name == name) return lv;
    throw validation_error("machine '" + this->name + "': no memory level named '" + name + "'");
}

bool MachineModel::has_level(const std::string& name) const {
    for (const auto& lv : levels)
        if (lv.name == name) return true;
    return false;
}

double MachineModel::mem_bw_domain(bool load_dominated) const {
    return load_dominated ? mem_bw_readonly_domain : mem_bw_triad_domain;
}

double MachineModel::mem_bytes_per_cycle(bool load_dominated) const {
    return mem_bw_domain(load_dominated) / clock_hz;
}

namespace {

MachineModel parse_machine_model_kv(const KvFile& file) {
    const std::string& src = file.source;
    const KvSection& root = file.require_section("");
    if (root.require("format") != kFormatTag)
        throw validation_error(src + ": unsupported format '" + root.require("format") +
                               "', expected " + kFormatTag);

    MachineModel m;
    const KvSection& mach = file.require_section("machine");
    auto d = [&](const std::string& key) {
        const KvEntry* e = mach.find(key);
        if (!e) throw validation_error(src + ": missing key '" + key + "' in [machine]");
        return kv_as_double(*e, src);
    };
    m.name = mach.require("name");
    m.clock_hz = d("clock_hz");
    m.simd_bytes = static_cast<int>(d("simd_bytes"));
    m.cores_per_domain = static_cast<int>(d("cores_per_domain"));
    m.num_domains = static_cast<int>(d("num_domains"));
    m.mem_bw_readonly_domain = d("mem_bw_readonly_domain");
    m.mem_bw_triad_domain = d("mem_bw_triad_domain");
    m.mem_bw_readonly_chip = d("mem_bw_readonly_chip");
    m.mem_bw_triad_chip = d("mem_bw_triad_chip");
    m.peak_flops = d("peak_flops");
    if (const KvEntry* e = mach.find("ports")) m.ports = kv_as_tokens(*e);

    for (const KvSection* sec : file.sections_with_prefix("level.")) {
        MemLevel lv;
        lv.name = sec->name.substr(std::string("level.").size());
        lv.capacity_bytes =
            static_cast<std::uint64_t>(kv_as_double(*find_or_throw(*sec, "capacity_bytes", src), src));
        lv.line_bytes =
            static_cast<std::uint64_t>(kv_as_double(*find_or_throw(*sec, "line_bytes", src), src));
        lv.load_bw = kv_as_double(*find_or_throw(*sec, "load_bw", src), src);
        lv.store_bw = kv_as_double(*find_or_throw(*sec, "store_bw", src), src);
        lv.shared_by_cores =
            static_cast<int>(kv_as_int(*find_or_throw(*sec, "shared_by_cores", src), src));
        m.levels.push_back(lv);
    }

    for (const KvSection* sec : file.sections_with_prefix("instruction.")) {
        InstructionSpec spec;
        spec.iclass = sec->name.substr(std::string("instruction.").size());
        spec.kind = parse_kind(sec->require("kind"), src + ": [" + sec->name + "]");
        spec.recip_throughput_cy = kv_as_double(*find_or_throw(*sec, "recip_throughput", src), src);
        spec.latency_cy = kv_as_double(*find_or_throw(*sec, "latency", src), src);
        if (const KvEntry* e = sec->find("ports")) {
            for (const std::string& tok : kv_as_tokens(*e)) {
                size_t colon = tok.find(':');
                if (colon == std::string::npos)
                    throw validation_error(src + ": [" + sec->name +
                                           "] ports entries must look like PORT:cycles");
                KvEntry cy{tok.substr(0, colon), tok.substr(colon + 1), e->line};
                spec.port_cycles[tok.substr(0, colon)] = kv_as_double(cy, src);
            }
        }
        if (m.instructions.count(spec.iclass))
            throw validation_error(src + ": duplicate instruction class '" + spec.iclass + "'");
        m.instructions[spec.iclass] = spec;
    }

    validate(m, src);
    return m;
}

} // namespace

MachineModel parse_machine_model(const std::string& text, const std::string& source) {
    return parse_machine_model_kv(kv_parse_string(text, source));
}

MachineModel load_machine_model(const std::string& path) {
    return parse_machine_model_kv(kv_parse_file(path));
}

std::string serialize_machine_model(const MachineModel& m) {
    std::ostringstream out;
    auto f = kv_format_double;
    out << "format = " << kFormatTag << "\n\n";
    out << "[machine]\n";
    out << "name = " << m.name << "\n";
    out << "clock_hz = " << f(m.clock_hz) << "\n";
    out << "simd_bytes = " << m.simd_bytes << "\n";
    out << "cores_per_domain = " << m.cores_per_domain << "\n";
    out << "num_domains = " << m.num_domains << "\n";
    out << "mem_bw_readonly_domain = " << f(m.mem_bw_readonly_domain) << "\n";
    out << "mem_bw_triad_domain = " << f(m.mem_bw_triad_domain) << "\n";
    out << "mem_bw_readonly_chip = " << f(m.mem_bw_readonly_chip) << "\n";
    out << "mem_bw_triad_chip = " << f(m.mem_bw_triad_chip) << "\n";
    out << "peak_flops = " << f(m.peak_flops) << "\n";
    out << "ports =";
    for (const auto& p : m.ports) out << " " << p;
    out << "\n";
    for (const auto& lv : m.levels) {
        out << "\n[level." << lv.name << "]\n";
        out << "capacity_bytes = " << lv.capacity_bytes << "\n";
        out << "line_bytes = " << lv.line_bytes << "\n";
        out << "load_bw = " << f(lv.load_bw) << "\n";
        out << "store_bw = " << f(lv.store_bw) << "\n";
        out << "shared_by_cores = " << lv.shared_by_cores << "\n";
    }
    for (const auto& [name, spec] : m.instructions) {
        out << "\n[instruction." << name << "]\n";
        out << "kind = " << kind_name(spec.kind) << "\n";
        out << "recip_throughput = " << f(spec.recip_throughput_cy) << "\n";
        out << "latency = " << f(spec.latency_cy) << "\n";
        if (!spec.port_cycles.empty()) {
            out << "ports =";
            for (const auto& [port, cy] : spec.port_cycles) out << " " << port << ":" << f(cy);
            out << "\n";
        }
    }
    return out.str();
}

const InstructionSpec& lookup_instruction(const MachineModel& m, const std::string& iclass) {
    auto it = m.instructions.find(iclass);
    if (it != m.instructions.end()) return it->second;
    std::ostringstream msg;
    msg << "unknown instruction class '" << iclass << "'; known classes:";
    for (const auto& [name, spec] : m.instructions) msg << " " << name;
    throw validation_error(msg.str());
}

bool operator==(const MemLevel& a, const MemLevel& b) {
    return a.name == b.name && a.capacity_bytes == b.capacity_bytes &&
           a.line_bytes == b.line_bytes && a.load_bw == b.load_bw && a.store_bw == b.store_bw &&
           a.shared_by_cores == b.shared_by_cores;
}

bool operator==(const InstructionSpec& a, const InstructionSpec& b) {
    return a.iclass == b.iclass && a.kind == b.kind &&
           a.recip_throughput_cy == b.recip_throughput_cy && a.latency_cy == b.latency_cy &&
           a.port_cycles == b.port_cycles;
}

bool operator==(const MachineModel& a, const MachineModel& b) {
    return a.name == b.name && a.clock_hz == b.clock_hz && a.simd_bytes == b.simd_bytes &&
           a.cores_per_domain == b.cores_per_domain && a.num_domains == b.num_domains &&
           a.levels == b.levels && a.mem_bw_readonly_domain == b.mem_bw_readonly_domain &&
           a.mem_bw_triad_domain == b.mem_bw_triad_domain &&
           a.mem_bw_readonly_chip == b.mem_bw_readonly_chip &&
           a.mem_bw_triad_chip == b.mem_bw_triad_chip && a.peak_flops == b.peak_flops &&
           a.ports == b.ports && a.instructions == b.instructions;
}

} // namespace ecmkit
