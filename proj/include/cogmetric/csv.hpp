#pragma once

#include <cstddef>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "cogmetric/errors.hpp"

namespace cogmetric {

// One parsed CSV table. row_lines holds the 1-based line number each data row
// starts on (the header is line 1).
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
    std::vector<std::size_t> row_lines;
};

// RFC 4180 reader: quoted fields, "" escapes, embedded separators and line
// breaks, CRLF or LF endings. Throws FormatError on an unterminated quote or
// stray quote inside an unquoted field.
inline CsvTable parse_csv(std::string_view text) {
    CsvTable table;
    std::vector<std::string> record;
    std::string field;
    std::size_t line = 1;
    std::size_t record_line = 1;
    bool in_quotes = false;
    bool was_quoted = false;
    bool any_field_content = false;

    const auto end_field = [&] {
        record.push_back(std::move(field));
        field.clear();
        was_quoted = false;
    };
    const auto end_record = [&] {
        end_field();
        if (table.header.empty()) {
            table.header = std::move(record);
        } else {
            table.rows.push_back(std::move(record));
            table.row_lines.push_back(record_line);
        }
        record.clear();
        any_field_content = false;
    };

    std::size_t i = 0;
    while (i < text.size()) {
        const char c = text[i];
        if (in_quotes) {
            if (c == '"') {
                if (i + 1 < text.size() && text[i + 1] == '"') {
                    field += '"';
                    i += 2;
                } else {
                    in_quotes = false;
                    ++i;
                }
            } else {
                if (c == '\n') ++line;
                field += c;
                ++i;
            }
            continue;
        }
        switch (c) {
            case '"':
                if (!field.empty() || was_quoted)
                    throw FormatError("line " + std::to_string(line) +
                                      ": quote inside unquoted field");
                in_quotes = true;
                was_quoted = true;
                any_field_content = true;
                ++i;
                break;
            case ',':
                end_field();
                any_field_content = true;
                ++i;
                break;
            case '\r':
                ++i;
                break;
            case '\n':
                if (any_field_content || !record.empty() || !field.empty() || was_quoted)
                    end_record();
                ++line;
                record_line = line;
                ++i;
                break;
            default:
                field += c;
                any_field_content = true;
                ++i;
                break;
        }
    }
    if (in_quotes) throw FormatError("unterminated quoted field at end of input");
    if (any_field_content || !record.empty() || !field.empty()) end_record();
    return table;
}

// Quote a field when RFC 4180 requires it.
inline std::string csv_escape(std::string_view field) {
    const bool needs_quotes =
        field.find_first_of(",\"\r\n") != std::string_view::npos;
    if (!needs_quotes) return std::string(field);
    std::string out = "\"";
    for (const char c : field) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

inline void write_csv_row(std::ostream& os, const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i > 0) os << ',';
        os << csv_escape(fields[i]);
    }
    os << '\n';
}

} // namespace cogmetric
