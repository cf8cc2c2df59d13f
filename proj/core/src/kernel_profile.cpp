#include "ecmkit/kernel_profile.hpp"

#include <fstream>
#include <sstream>

#include "ecmkit/errors.hpp"
#include "ecmkit/kvfile.hpp"

namespace ecmkit {

namespace {

constexpr const char* kFormatTag = "ecmkit-kernel/1";

BoundaryVolume parse_volume(const KvSection& sec, const std::string& src) {
    BoundaryVolume v;
    if (const KvEntry* e = sec.find("load")) v.load_bytes = kv_as_double(*e, src);
    if (const KvEntry* e = sec.find("store")) v.store_bytes = kv_as_double(*e, src);
    if (v.load_bytes < 0 || v.store_bytes < 0)
        throw validation_error(src + ": [" + sec.name + "]: volumes must be >= 0");
    return v;
}

} // namespace

void KernelProfile::derive_volumes_from_streams() {
    if (streams.empty()) return;
    BoundaryVolume v;
    for (const StreamSpec& s : streams) {
        if (s.is_store) {
            v.store_bytes += s.bytes_per_unit;
            if (s.write_allocate) v.load_bytes += s.bytes_per_unit;
        } else {
            v.load_bytes += s.bytes_per_unit;
        }
    }
    if (!vol_l1l2) vol_l1l2 = v;
    if (!vol_l2mem) vol_l2mem = v;
}

KernelProfile parse_kernel_profile(const std::string& text, const std::string& source) {
    KvFile file = kv_parse_string(text, source);
    const std::string& src = file.source;
    const KvSection& root = file.require_section("");
    if (root.require("format") != kFormatTag)
        throw validation_error(src + ": unsupported format '" + root.require("format") +
                               "', expected " + kFormatTag);

    KernelProfile p;
    const KvSection& kern = file.require_section("kernel");
    p.name = kern.require("name");
    p.unit = kern.require("unit");
    if (p.unit != "per-VL" && p.unit != "per-LUP" && p.unit != "per-iteration")
        throw validation_error(src + ": unknown unit '" + p.unit + "'");
    if (const KvEntry* e = kern.find("load_dominated")) p.load_dominated = kv_as_bool(*e, src);

    if (const KvSection* sec = file.find_section("instructions")) {
        for (const KvEntry& e : sec->entries) {
            double count = kv_as_double(e, src);
            if (count < 0)
                throw validation_error(src + ": instruction count for '" + e.key +
                                       "' must be >= 0");
            p.instr_counts[e.key] = count;
        }
    }

    if (const KvSection* sec = file.find_section("streams")) {
        for (const KvEntry& e : sec->entries) {
            std::istringstream in(e.value);
            std::string kind;
            double bytes = -1;
            std::string flag;
            in >> kind >> bytes;
            in >> flag;
            StreamSpec s;
            s.name = e.key;
            if (kind == "store")
                s.is_store = true;
            else if (kind != "load")
                throw validation_error(src + ": stream '" + e.key +
                                       "': expected 'load|store <bytes> [wa]'");
            if (bytes < 0)
                throw validation_error(src + ": stream '" + e.key + "': bad byte count");
            s.bytes_per_unit = bytes;
            if (!flag.empty()) {
                if (flag != "wa" || !s.is_store)
                    throw validation_error(src + ": stream '" + e.key +
                                           "': only stores take the 'wa' flag");
                s.write_allocate = true;
            }
            p.streams.push_back(s);
        }
    }

    if (const KvSection* sec = file.find_section("volumes.l1l2")) p.vol_l1l2 = parse_volume(*sec, src);
    if (const KvSection* sec = file.find_section("volumes.l2mem")) p.vol_l2mem = parse_volume(*sec, src);

    if (const KvSection* sec = file.find_section("override")) {
        const KvEntry* c = sec->find("t_c_ol");
        if (!c) throw validation_error(src + ": [override] needs t_c_ol");
        OverrideTimes o;
        o.t_c_ol = kv_as_double(*c, src);
        if (const KvEntry* e = sec->find("t_l1_ld")) o.t_l1_ld = kv_as_double(*e, src);
        if (const KvEntry* e = sec->find("t_l1_st")) o.t_l1_st = kv_as_double(*e, src);
        p.override_times = o;
    }

    if (!p.override_times && p.instr_counts.empty())
        throw validation_error(src + ": kernel '" + p.name +
                               "' has neither instruction counts nor override times");

    p.derive_volumes_from_streams();
    return p;
}

KernelProfile load_kernel_profile(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw io_error("cannot open file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_kernel_profile(buf.str(), path);
}

std::string serialize_kernel_profile(const KernelProfile& p) {
    std::ostringstream out;
    out << "format = " << kFormatTag << "\n\n[kernel]\n";
    out << "name = " << p.name << "\n";
    out << "unit = " << p.unit << "\n";
    out << "load_dominated = " << (p.load_dominated ? "true" : "false") << "\n";
    if (!p.instr_counts.empty()) {
        out << "\n[instructions]\n";
        for (const auto& [iclass, count] : p.instr_counts)
            out << iclass << " = " << kv_format_double(count) << "\n";
    }
    if (!p.streams.empty()) {
        out << "\n[streams]\n";
        for (const auto& s : p.streams) {
            out << s.name << " = " << (s.is_store ? "store" : "load") << " "
                << kv_format_double(s.bytes_per_unit);
            if (s.write_allocate) out << " wa";
            out << "\n";
        }
    }
    auto emit_vol = [&out](const char* name, const BoundaryVolume& v) {
        out << "\n[" << name << "]\n";
        out << "load = " << kv_format_double(v.load_bytes) << "\n";
        out << "store = " << kv_format_double(v.store_bytes) << "\n";
    };
    if (p.vol_l1l2) emit_vol("volumes.l1l2", *p.vol_l1l2);
    if (p.vol_l2mem) emit_vol("volumes.l2mem", *p.vol_l2mem);
    if (p.override_times) {
        out << "\n[override]\n";
        out << "t_c_ol = " << kv_format_double(p.override_times->t_c_ol) << "\n";
        out << "t_l1_ld = " << kv_format_double(p.override_times->t_l1_ld) << "\n";
        out << "t_l1_st = " << kv_format_double(p.override_times->t_l1_st) << "\n";
    }
    return out.str();
}

} // namespace ecmkit
