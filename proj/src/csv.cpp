#include "gazelab/csv.hpp"

#include <sstream>

namespace gazelab::csv {

std::optional<std::size_t> Table::column(std::string_view name) const {
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (header[i] == name) return i;
    }
    return std::nullopt;
}

namespace {

// Reads one logical record. Returns false at end of input.
bool read_record(std::istream& in, std::vector<std::string>& fields, std::int64_t& line_counter) {
    fields.clear();
    std::string field;
    bool in_quotes = false;
    bool any = false;
    char c;
    while (in.get(c)) {
        any = true;
        if (in_quotes) {
            if (c == '"') {
                if (in.peek() == '"') {
                    in.get(c);
                    field.push_back('"');
                } else {
                    in_quotes = false;
                }
            } else {
                if (c == '\n') ++line_counter;
                field.push_back(c);
            }
            continue;
        }
        if (c == '"') {
            in_quotes = true;
        } else if (c == ',') {
            fields.push_back(std::move(field));
            field.clear();
        } else if (c == '\r') {
            if (in.peek() == '\n') in.get(c);
            ++line_counter;
            fields.push_back(std::move(field));
            return true;
        } else if (c == '\n') {
            ++line_counter;
            fields.push_back(std::move(field));
            return true;
        } else {
            field.push_back(c);
        }
    }
    if (!any) return false;
    fields.push_back(std::move(field));
    return true;
}

bool blank(const std::vector<std::string>& fields) {
    return fields.size() == 1 && fields[0].find_first_not_of(" \t") == std::string::npos;
}

}  // namespace

Table read(std::istream& in) {
    Table table;
    std::int64_t line = 1;
    std::vector<std::string> fields;

    // Skip a UTF-8 byte order mark.
    if (in.peek() == 0xEF) {
        char bom[3];
        in.read(bom, 3);
        if (!(static_cast<unsigned char>(bom[1]) == 0xBB && static_cast<unsigned char>(bom[2]) == 0xBF)) {
            in.seekg(0);
        }
    }

    while (true) {
        std::int64_t start = line;
        if (!read_record(in, fields, line)) break;
        if (blank(fields)) continue;
        if (table.header.empty()) {
            for (auto& f : fields) {
                auto b = f.find_first_not_of(" \t");
                auto e = f.find_last_not_of(" \t");
                table.header.push_back(b == std::string::npos ? std::string() : f.substr(b, e - b + 1));
            }
            continue;
        }
        table.rows.push_back(Row{start, fields});
    }
    return table;
}

Table read_string(std::string_view text) {
    std::istringstream in{std::string(text)};
    return read(in);
}

std::string escape(std::string_view field) {
    if (field.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(field);
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out.push_back('"');
        out.push_back(c);
    }
    out.push_back('"');
    return out;
}

std::string format_row(const std::vector<std::string>& fields) {
    std::string out;
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) out.push_back(',');
        out += escape(fields[i]);
    }
    out.push_back('\n');
    return out;
}

}  // namespace gazelab::csv
