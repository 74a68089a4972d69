#pragma once

/**
 * @file io.hpp
 * @brief CSV output.  Every file starts with three comment lines,
 *
 *   # edlab-csv/1 <kind>
 *   # config {...}
 *   # metadata {...}
 *
 * followed by a fixed header row for that kind.  Reals are written in the
 * shortest form that reads back to the same double.
 */

#include <charconv>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "edlab/error.hpp"

namespace edlab {

inline constexpr const char* kCsvVersion = "edlab-csv/1";

inline std::string csv_field(double v) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return ec == std::errc() ? std::string(buf, ptr) : std::string("nan");
}

inline std::string csv_field(std::uint64_t v) { return std::to_string(v); }

/// Quotes a text field when it contains a separator, quote or newline.
inline std::string csv_quote(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char ch : s) {
        if (ch == '"') out += '"';
        out += ch;
    }
    return out + "\"";
}

class CsvTable {
  public:
    CsvTable() = default;
    CsvTable(std::string kind, std::vector<std::string> columns)
        : kind_(std::move(kind)), columns_(std::move(columns)) {}

    void add(std::vector<std::string> row) {
        if (row.size() != columns_.size())
            throw DomainError("CSV row has " + std::to_string(row.size()) + " fields, header has " +
                              std::to_string(columns_.size()));
        rows_.push_back(std::move(row));
    }

    const std::string& kind() const noexcept { return kind_; }
    const std::vector<std::string>& columns() const noexcept { return columns_; }
    const std::vector<std::vector<std::string>>& rows() const noexcept { return rows_; }

    std::string render(const std::string& config_json, const std::string& metadata_json) const {
        std::string out = std::string("# ") + kCsvVersion + " " + kind_ + "\n";
        out += "# config " + config_json + "\n";
        out += "# metadata " + metadata_json + "\n";
        append_row(out, columns_);
        for (const auto& r : rows_) append_row(out, r);
        return out;
    }

  private:
    static void append_row(std::string& out, const std::vector<std::string>& fields) {
        for (std::size_t i = 0; i < fields.size(); ++i) out += (i ? "," : "") + csv_quote(fields[i]);
        out += "\n";
    }

    std::string kind_;
    std::vector<std::string> columns_;
    std::vector<std::vector<std::string>> rows_;
};

} // namespace edlab
