#include "mstlens/csv.hpp"
#include "mstlens/types.hpp"

#include <charconv>
#include <fstream>
#include <ostream>
#include <sstream>

namespace mstlens::csv {

namespace {

std::string where(std::string_view source, std::size_t line) {
    return std::string(source) + ":" + std::to_string(line);
}

} // namespace

Table parse(std::string_view text, std::string_view source) {
    if (text.starts_with("\xEF\xBB\xBF")) text.remove_prefix(3);

    std::vector<std::vector<std::string>> records;
    std::vector<std::string> record;
    std::string cell;
    bool quoted = false;
    bool cell_was_quoted = false;
    std::size_t line = 1;

    auto end_record = [&] {
        record.push_back(std::move(cell));
        cell.clear();
        cell_was_quoted = false;
        const bool blank = record.size() == 1 && record.front().empty();
        if (!blank) records.push_back(std::move(record));
        record.clear();
    };

    for (std::size_t i = 0; i < text.size(); ++i) {
        const char ch = text[i];
        if (quoted) {
            if (ch == '"') {
                if (i + 1 < text.size() && text[i + 1] == '"') {
                    cell.push_back('"');
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                if (ch == '\n') ++line;
                cell.push_back(ch);
            }
            continue;
        }
        switch (ch) {
        case '"':
            if (!cell.empty() || cell_was_quoted)
                throw InputError(where(source, line) + ": stray quote inside unquoted cell");
            quoted = true;
            cell_was_quoted = true;
            break;
        case ',':
            record.push_back(std::move(cell));
            cell.clear();
            cell_was_quoted = false;
            break;
        case '\r':
            if (i + 1 < text.size() && text[i + 1] == '\n') break;
            end_record();
            ++line;
            break;
        case '\n':
            end_record();
            ++line;
            break;
        default:
            cell.push_back(ch);
        }
    }
    if (quoted) throw InputError(where(source, line) + ": unterminated quoted cell");
    if (!cell.empty() || !record.empty() || cell_was_quoted) end_record();

    if (records.empty()) throw InputError(std::string(source) + ": empty file (a header row is required)");

    Table table;
    table.header = std::move(records.front());
    for (std::size_t r = 1; r < records.size(); ++r) {
        if (records[r].size() != table.header.size())
            throw InputError(std::string(source) + ": row " + std::to_string(r) + " has " +
                             std::to_string(records[r].size()) + " cells, header has " +
                             std::to_string(table.header.size()));
        table.rows.push_back(std::move(records[r]));
    }
    return table;
}

Table read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse(buffer.str(), path);
}

std::optional<double> parse_number(std::string_view cell) {
    while (!cell.empty() && (cell.front() == ' ' || cell.front() == '\t')) cell.remove_prefix(1);
    while (!cell.empty() && (cell.back() == ' ' || cell.back() == '\t')) cell.remove_suffix(1);
    if (cell.starts_with('+')) cell.remove_prefix(1);
    if (cell.empty()) return std::nullopt;
    double value = 0.0;
    const auto* first = cell.data();
    const auto* last = cell.data() + cell.size();
    auto [ptr, ec] = std::from_chars(first, last, value, std::chars_format::general);
    if (ec != std::errc() || ptr != last) return std::nullopt;
    return value;
}

std::string format_number(double value) {
    char buffer[64];
    auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof buffer, value);
    return std::string(buffer, ptr);
}

std::string quote_if_needed(std::string_view cell) {
    if (cell.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(cell);
    std::string out = "\"";
    for (char ch : cell) {
        if (ch == '"') out.push_back('"');
        out.push_back(ch);
    }
    out.push_back('"');
    return out;
}

void write_row(std::ostream& out, const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) out << ',';
        out << quote_if_needed(cells[i]);
    }
    out << '\n';
}

} // namespace mstlens::csv
