#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace ecmkit {

/// One `key = value` line together with its source line number (for error
/// messages).
struct KvEntry {
    std::string key;
    std::string value;
    int line = 0;
};

/// A `[section]` or `[section.sub]` block.
struct KvSection {
    std::string name;
    int line = 0;
    std::vector<KvEntry> entries;

    const KvEntry* find(const std::string& key) const;
    std::string require(const std::string& key) const;
    std::optional<std::string> get(const std::string& key) const;
};

/// Minimal line-oriented config format used for machine models and kernel
/// profiles:
///
///   # comment
///   format = ecmkit-machine/1
///   [section.subsection]
///   key = value
///
/// Keys before the first section header live in the unnamed section "".
/// Values are free-form strings; typed access goes through the kv_as_*
/// helpers. Rationals like `2/3` are accepted wherever a number is expected.
struct KvFile {
    std::vector<KvSection> sections;
    std::string source;   // path or "<string>", for error messages

    const KvSection* find_section(const std::string& name) const;
    const KvSection& require_section(const std::string& name) const;
    std::vector<const KvSection*> sections_with_prefix(const std::string& prefix) const;
};

KvFile kv_parse_file(const std::string& path);
KvFile kv_parse_string(const std::string& text, const std::string& source = "<string>");

double kv_as_double(const KvEntry& entry, const std::string& source);
long long kv_as_int(const KvEntry& entry, const std::string& source);
bool kv_as_bool(const KvEntry& entry, const std::string& source);
std::vector<std::string> kv_as_tokens(const KvEntry& entry);

/// Canonical serialization helper: emits `key = value` lines under section
/// headers in the order given. Numbers should be pre-formatted with
/// kv_format_double so that a round trip reproduces them exactly.
std::string kv_format_double(double v);

} // namespace ecmkit
