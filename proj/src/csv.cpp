#include "gridcap/csv.hpp"

#include "gridcap/errors.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

namespace gridcap::csv {

namespace {

std::string_view trim(std::string_view s)
{
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

std::vector<std::string> split(std::string_view line)
{
    std::vector<std::string> out;
    std::string cell;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                cell += '"';
                ++i;
            } else if (c == '"') {
                quoted = false;
            } else {
                cell += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            out.emplace_back(trim(cell));
            cell.clear();
        } else {
            cell += c;
        }
    }
    out.emplace_back(trim(cell));
    return out;
}

bool needs_quotes(const std::string& s)
{
    return s.find_first_of(",\"\n") != std::string::npos;
}

} // namespace

int Table::column(std::string_view name) const
{
    auto it = std::find(header.begin(), header.end(), name);
    return it == header.end() ? -1 : static_cast<int>(it - header.begin());
}

int Table::require_column(std::string_view name) const
{
    const int c = column(name);
    if (c < 0) {
        throw ValidationError(path + ": missing column '" + std::string(name) + "'");
    }
    return c;
}

Table parse(std::string_view text, std::string path)
{
    Table t;
    t.path = std::move(path);
    std::size_t pos = 0;
    int line_no = 0;
    while (pos <= text.size()) {
        const std::size_t end = std::min(text.find('\n', pos), text.size());
        std::string_view line = trim(text.substr(pos, end - pos));
        ++line_no;
        pos = end + 1;
        if (line.empty() || line.front() == '#') {
            if (end == text.size()) break;
            continue;
        }
        auto cells = split(line);
        if (t.header.empty()) {
            t.header = std::move(cells);
        } else {
            if (cells.size() != t.header.size()) {
                throw ValidationError(t.path + ":" + std::to_string(line_no) + ": expected " +
                                      std::to_string(t.header.size()) + " fields, found " +
                                      std::to_string(cells.size()));
            }
            t.rows.push_back(std::move(cells));
            t.lines.push_back(line_no);
        }
        if (end == text.size()) break;
    }
    if (t.header.empty()) {
        throw ValidationError(t.path + ": empty table (no header row)");
    }
    return t;
}

Table read(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ValidationError("missing table " + path.string());
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse(buf.str(), path.string());
}

std::optional<double> to_number(std::string_view text)
{
    text = trim(text);
    if (text == "inf" || text == "unbounded" || text == "Inf" || text == "infinity") {
        return std::numeric_limits<double>::infinity();
    }
    if (!text.empty() && text.front() == '+') text.remove_prefix(1);
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size() || std::isnan(value)) {
        return std::nullopt;
    }
    return value;
}

std::string Row::where() const
{
    return table_.path + ":" + std::to_string(table_.lines.at(index_));
}

std::string_view Row::text(std::string_view column) const
{
    return table_.rows.at(index_)[static_cast<std::size_t>(table_.require_column(column))];
}

std::string_view Row::text_or_empty(std::string_view column) const
{
    const int c = table_.column(column);
    return c < 0 ? std::string_view{} : std::string_view(table_.rows.at(index_)[static_cast<std::size_t>(c)]);
}

double Row::number(std::string_view column) const
{
    const auto cell = text(column);
    auto value = to_number(cell);
    if (!value) {
        throw ValidationError(where() + ": column '" + std::string(column) + "': '" + std::string(cell) +
                              "' is not a number");
    }
    return *value;
}

double Row::number_or(std::string_view column, double fallback) const
{
    const auto cell = text_or_empty(column);
    if (trim(cell).empty()) return fallback;
    return number(column);
}

int Row::integer(std::string_view column) const
{
    const double v = number(column);
    if (v != std::floor(v) || std::abs(v) > 1e9) {
        throw ValidationError(where() + ": column '" + std::string(column) + "' must be an integer");
    }
    return static_cast<int>(v);
}

bool Row::flag(std::string_view column, bool fallback) const
{
    const auto cell = trim(text_or_empty(column));
    if (cell.empty()) return fallback;
    if (cell == "1" || cell == "true" || cell == "yes" || cell == "TRUE") return true;
    if (cell == "0" || cell == "false" || cell == "no" || cell == "FALSE") return false;
    throw ValidationError(where() + ": column '" + std::string(column) + "': '" + std::string(cell) +
                          "' is not a flag (use 0/1)");
}

void write(const std::filesystem::path& path, const std::vector<std::string>& header,
           const std::vector<std::vector<std::string>>& rows)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot open " + path.string() + " for writing");
    }
    auto emit = [&](const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i) out << ',';
            if (needs_quotes(cells[i])) {
                std::string q = cells[i];
                std::size_t p = 0;
                while ((p = q.find('"', p)) != std::string::npos) {
                    q.insert(p, 1, '"');
                    p += 2;
                }
                out << '"' << q << '"';
            } else {
                out << cells[i];
            }
        }
        out << '\n';
    };
    emit(header);
    for (const auto& r : rows) emit(r);
    if (!out) {
        throw std::runtime_error("failed writing " + path.string());
    }
}

} // namespace gridcap::csv
