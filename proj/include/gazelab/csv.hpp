#pragma once

#include <cstdint>
#include <istream>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace gazelab::csv {

struct Row {
    std::int64_t line_number = 0;  // 1-based line of the record's first physical line
    std::vector<std::string> fields;
};

struct Table {
    std::vector<std::string> header;
    std::vector<Row> rows;

    std::optional<std::size_t> column(std::string_view name) const;
};

/// Comma-delimited, double-quote escaping, header row required.
/// Quoted fields may contain commas, quotes ("") and newlines.
Table read(std::istream& in);
Table read_string(std::string_view text);

/// Quotes a field only when it contains a delimiter, quote, or line break.
std::string escape(std::string_view field);
/// One record including the trailing newline.
std::string format_row(const std::vector<std::string>& fields);

}  // namespace gazelab::csv
