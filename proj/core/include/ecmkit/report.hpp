#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace ecmkit {

constexpr const char* kToolVersion = "1.0.0";
constexpr const char* kReportSchema = "ecmkit-report/1";

/// Tabular result of a CLI subcommand. Numeric columns carry units; output
/// is byte-stable for fixed inputs (no timestamps).
struct ReportColumn {
    std::string name;
    std::string unit; // "-" for string columns
};

struct Report {
    std::string command;
    std::string input_digest;
    std::vector<ReportColumn> columns;
    using Cell = std::variant<double, std::string>;
    std::vector<std::vector<Cell>> rows;

    void add_column(const std::string& name, const std::string& unit) {
        columns.push_back({name, unit});
    }
    std::vector<Cell>& add_row() { return rows.emplace_back(); }

    std::string to_csv() const;
    std::string to_json() const;
    /// Picks CSV or JSON by file extension; "-" writes CSV to stdout.
    void write(const std::string& path) const;
};

std::uint64_t fnv1a(std::string_view bytes, std::uint64_t seed = 0xcbf29ce484222325ull);
std::string fnv1a_hex(std::string_view bytes);
std::string digest_file(const std::string& path);

std::string format_number(double v);

} // namespace ecmkit
