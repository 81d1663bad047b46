#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace gridcap::csv {

/// Comma-separated table with a header row. Blank lines and lines starting
/// with '#' are skipped; fields may be double-quoted.
struct Table {
    std::string path;
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
    std::vector<int> lines;

    int column(std::string_view name) const;
    int require_column(std::string_view name) const;
    bool has_column(std::string_view name) const { return column(name) >= 0; }
};

Table read(const std::filesystem::path& path);
Table parse(std::string_view text, std::string path = "<memory>");

/// Accessor for one data row that reports errors as file:line.
class Row {
public:
    Row(const Table& table, std::size_t index) : table_(table), index_(index) {}

    std::string where() const;
    std::string_view text(std::string_view column) const;
    /// Empty string when the column is absent.
    std::string_view text_or_empty(std::string_view column) const;
    double number(std::string_view column) const;
    /// `fallback` when the column is absent or the cell is blank.
    double number_or(std::string_view column, double fallback) const;
    int integer(std::string_view column) const;
    bool flag(std::string_view column, bool fallback = false) const;

private:
    const Table& table_;
    std::size_t index_;
};

/// Parses a double; "inf"/"unbounded" give +infinity. Empty optional on failure.
std::optional<double> to_number(std::string_view text);

void write(const std::filesystem::path& path, const std::vector<std::string>& header,
           const std::vector<std::vector<std::string>>& rows);

} // namespace gridcap::csv
