#include "ecmkit/kvfile.hpp"

#include <cctype>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "ecmkit/errors.hpp"

namespace ecmkit {

namespace {

std::string trim(const std::string& s) {
    size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    size_t e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

[[noreturn]] void parse_fail(const std::string& source, int line, const std::string& msg) {
    throw validation_error(source + ":" + std::to_string(line) + ": " + msg);
}

} // namespace

const KvEntry* KvSection::find(const std::string& key) const {
    for (const auto& e : entries)
        if (e.key == key) return &e;
    return nullptr;
}

std::string KvSection::require(const std::string& key) const {
    const KvEntry* e = find(key);
    if (!e) throw validation_error("missing key '" + key + "' in section [" + name + "]");
    return e->value;
}

std::optional<std::string> KvSection::get(const std::string& key) const {
    const KvEntry* e = find(key);
    if (!e) return std::nullopt;
    return e->value;
}

const KvSection* KvFile::find_section(const std::string& name) const {
    for (const auto& s : sections)
        if (s.name == name) return &s;
    return nullptr;
}

const KvSection& KvFile::require_section(const std::string& name) const {
    const KvSection* s = find_section(name);
    if (!s) throw validation_error(source + ": missing section [" + name + "]");
    return *s;
}

std::vector<const KvSection*> KvFile::sections_with_prefix(const std::string& prefix) const {
    std::vector<const KvSection*> out;
    for (const auto& s : sections)
        if (s.name.rfind(prefix, 0) == 0) out.push_back(&s);
    return out;
}

KvFile kv_parse_string(const std::string& text, const std::string& source) {
    KvFile file;
    file.source = source;
    file.sections.push_back(KvSection{"", 0, {}});

    std::istringstream in(text);
    std::string raw;
    int lineno = 0;
    while (std::getline(in, raw)) {
        ++lineno;
        std::string line = raw;
        size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;

        if (line.front() == '[') {
            if (line.back() != ']')
                parse_fail(source, lineno, "unterminated section header: " + trim(raw));
            std::string name = trim(line.substr(1, line.size() - 2));
            if (name.empty()) parse_fail(source, lineno, "empty section name");
            file.sections.push_back(KvSection{name, lineno, {}});
            continue;
        }

        size_t eq = line.find('=');
        if (eq == std::string::npos)
            parse_fail(source, lineno, "expected 'key = value': " + line);
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (key.empty()) parse_fail(source, lineno, "empty key");
        file.sections.back().entries.push_back(KvEntry{key, value, lineno});
    }
    return file;
}

KvFile kv_parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw io_error("cannot open file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return kv_parse_string(buf.str(), path);
}

double kv_as_double(const KvEntry& entry, const std::string& source) {
    const std::string& v = entry.value;
    size_t slash = v.find('/');
    auto one = [&](const std::string& s) {
        try {
            size_t pos = 0;
            double d = std::stod(s, &pos);
            if (pos != s.size()) throw std::invalid_argument(s);
            return d;
        } catch (const std::exception&) {
            parse_fail(source, entry.line, "key '" + entry.key + "': not a number: " + s);
        }
    };
    if (slash == std::string::npos) return one(v);
    double num = one(trim(v.substr(0, slash)));
    double den = one(trim(v.substr(slash + 1)));
    if (den == 0.0) parse_fail(source, entry.line, "key '" + entry.key + "': division by zero");
    return num / den;
}

long long kv_as_int(const KvEntry& entry, const std::string& source) {
    const std::string& v = entry.value;
    long long out = 0;
    auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc{} || ptr != v.data() + v.size())
        parse_fail(source, entry.line, "key '" + entry.key + "': not an integer: " + v);
    return out;
}

bool kv_as_bool(const KvEntry& entry, const std::string& source) {
    if (entry.value == "true" || entry.value == "1" || entry.value == "on") return true;
    if (entry.value == "false" || entry.value == "0" || entry.value == "off") return false;
    parse_fail(source, entry.line, "key '" + entry.key + "': not a boolean: " + entry.value);
}

std::vector<std::string> kv_as_tokens(const KvEntry& entry) {
    std::vector<std::string> out;
    std::istringstream in(entry.value);
    std::string tok;
    while (in >> tok) out.push_back(tok);
    return out;
}

std::string kv_format_double(double v) {
    // Shortest representation that round-trips exactly.
    char buf[64];
    for (int prec = 1; prec <= 17; ++prec) {
        std::snprintf(buf, sizeof buf, "%.*g", prec, v);
        if (std::stod(buf) == v) break;
    }
    return buf;
}

} // namespace ecmkit
