#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace mstlens::csv {

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};

/// RFC 4180 subset: comma separated, double-quote quoting with "" escapes, LF or CRLF
/// line endings. A UTF-8 byte-order mark is skipped. Blank trailing lines are ignored.
/// Every row must have as many cells as the header.
Table parse(std::string_view text, std::string_view source = "<memory>");
Table read_file(const std::string& path);

/// Strict decimal parse: optional sign, digits, optional fraction and exponent. Surrounding
/// blanks are tolerated; anything else (including empty) yields nullopt.
std::optional<double> parse_number(std::string_view cell);

/// Shortest decimal text that parses back to exactly `value`.
std::string format_number(double value);

std::string quote_if_needed(std::string_view cell);
void write_row(std::ostream& out, const std::vector<std::string>& cells);

} // namespace mstlens::csv
