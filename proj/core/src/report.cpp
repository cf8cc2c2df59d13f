#include "ecmkit/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <json.hpp>

#include "ecmkit/errors.hpp"

namespace ecmkit {

std::string format_number(double v) {
    char buf[64];
    if (v == static_cast<long long>(v) && std::abs(v) < 1e15) {
        std::snprintf(buf, sizeof buf, "%lld", static_cast<long long>(v));
        return buf;
    }
    for (int prec = 1; prec <= 17; ++prec) {
        std::snprintf(buf, sizeof buf, "%.*g", prec, v);
        if (std::stod(buf) == v) break;
    }
    return buf;
}

std::string Report::to_csv() const {
    std::ostringstream out;
    for (size_t c = 0; c < columns.size(); ++c) {
        if (c) out << ",";
        out << columns[c].name;
        if (columns[c].unit != "-") out << "[" << columns[c].unit << "]";
    }
    out << "\n";
    for (const auto& row : rows) {
        for (size_t c = 0; c < row.size(); ++c) {
            if (c) out << ",";
            if (std::holds_alternative<double>(row[c]))
                out << format_number(std::get<double>(row[c]));
            else
                out << std::get<std::string>(row[c]);
        }
        out << "\n";
    }
    return out.str();
}

std::string Report::to_json() const {
    nlohmann::ordered_json j;
    j["schema"] = kReportSchema;
    j["tool_version"] = kToolVersion;
    j["command"] = command;
    j["input_digest"] = input_digest;
    nlohmann::ordered_json cols = nlohmann::ordered_json::array();
    for (const auto& c : columns) cols.push_back({{"name", c.name}, {"unit", c.unit}});
    j["columns"] = cols;
    nlohmann::ordered_json rws = nlohmann::ordered_json::array();
    for (const auto& row : rows) {
        nlohmann::ordered_json r = nlohmann::ordered_json::array();
        for (const auto& cell : row) {
            if (std::holds_alternative<double>(cell))
                r.push_back(std::get<double>(cell));
            else
                r.push_back(std::get<std::string>(cell));
        }
        rws.push_back(r);
    }
    j["rows"] = rws;
    return j.dump(2) + "\n";
}

void Report::write(const std::string& path) const {
    if (path == "-" || path.empty()) {
        std::cout << to_csv();
        return;
    }
    bool json = path.size() >= 5 && path.substr(path.size() - 5) == ".json";
    std::ofstream out(path);
    if (!out) throw io_error("cannot write file: " + path);
    out << (json ? to_json() : to_csv());
    if (!out) throw io_error("write failed: " + path);
}

std::uint64_t fnv1a(std::string_view bytes, std::uint64_t seed) {
    std::uint64_t h = seed;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

std::string fnv1a_hex(std::string_view bytes) {
    char buf[24];
    std::snprintf(buf, sizeof buf, "%016llx",
                  static_cast<unsigned long long>(fnv1a(bytes)));
    return buf;
}

std::string digest_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw io_error("cannot open file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return fnv1a_hex(buf.str());
}

} // namespace ecmkit
