#pragma once

#include <cctype>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "json.hpp"

#include "cogmetric/adapters.hpp"
#include "cogmetric/csv.hpp"
#include "cogmetric/errors.hpp"
#include "cogmetric/timestamp.hpp"
#include "cogmetric/types.hpp"

namespace cogmetric {

enum class InputFormat { csv, json };

enum class ScoringUnit { post, account };

inline std::string_view scoring_unit_name(ScoringUnit u) {
    return u == ScoringUnit::post ? "post" : "account";
}

inline std::optional<ScoringUnit> parse_scoring_unit(std::string_view name) {
    if (name == "post") return ScoringUnit::post;
    if (name == "account") return ScoringUnit::account;
    return std::nullopt;
}

// One record straight out of an export file, before normalization. Counts are
// keyed by the platform's native interaction names.
struct RawEngagementRow {
    std::string content_id;
    std::string platform = "generic";
    Timestamp captured_at;
    std::int64_t transmissions = 1;
    std::map<std::string, std::int64_t> raw_counts;
    std::string source;
    ScoringUnit scoring_unit = ScoringUnit::post;
    std::vector<std::string> warnings;
};

// A normalized record: counts carry only canonical or explicitly configured
// custom types, and warnings note anything normalization dropped.
struct EngagementRecord {
    std::string content_id;
    std::string platform;
    Timestamp captured_at;
    std::int64_t transmissions = 1;
    InteractionCounts counts;
    ScoringUnit scoring_unit = ScoringUnit::post;
    std::vector<std::string> warnings;

    bool operator==(const EngagementRecord&) const = default;
};

// One per-row schema violation; processing continues past these.
struct RowIssue {
    std::string source;
    std::string location;
    std::string message;
};

struct Diagnostics {
    std::vector<RowIssue> errors;
    std::vector<std::string> warnings;
    std::size_t rows_in = 0;
    std::size_t duplicates_dropped = 0;

    void merge(Diagnostics other) {
        for (auto& e : other.errors) errors.push_back(std::move(e));
        for (auto& w : other.warnings) warnings.push_back(std::move(w));
        rows_in += other.rows_in;
        duplicates_dropped += other.duplicates_dropped;
    }
};

struct ParsedRows {
    std::vector<RawEngagementRow> rows;
    Diagnostics diagnostics;
};

struct Dataset {
    std::vector<EngagementRecord> records;
    Diagnostics diagnostics;
};

inline bool is_valid_utf8(std::string_view text) {
    std::size_t i = 0;
    while (i < text.size()) {
        const unsigned char c = static_cast<unsigned char>(text[i]);
        std::size_t len = 0;
        std::uint32_t code = 0;
        if (c < 0x80) {
            ++i;
            continue;
        } else if ((c & 0xE0) == 0xC0) {
            len = 2;
            code = c & 0x1F;
        } else if ((c & 0xF0) == 0xE0) {
            len = 3;
            code = c & 0x0F;
        } else if ((c & 0xF8) == 0xF0) {
            len = 4;
            code = c & 0x07;
        } else {
            return false;
        }
        if (i + len > text.size()) return false;
        for (std::size_t k = 1; k < len; ++k) {
            const unsigned char cc = static_cast<unsigned char>(text[i + k]);
            if ((cc & 0xC0) != 0x80) return false;
            code = (code << 6) | (cc & 0x3F);
        }
        if (len == 2 && code < 0x80) return false;
        if (len == 3 && (code < 0x800 || (code >= 0xD800 && code <= 0xDFFF))) return false;
        if (len == 4 && (code < 0x10000 || code > 0x10FFFF)) return false;
        i += len;
    }
    return true;
}

namespace detail {

inline std::optional<std::int64_t> parse_int(std::string_view text) {
    if (text.empty()) return std::nullopt;
    std::size_t i = 0;
    bool negative = false;
    if (text[0] == '-' || text[0] == '+') {
        negative = text[0] == '-';
        i = 1;
        if (i == text.size()) return std::nullopt;
    }
    std::int64_t value = 0;
    for (; i < text.size(); ++i) {
        if (text[i] < '0' || text[i] > '9') return std::nullopt;
        if (__builtin_mul_overflow(value, 10, &value)) return std::nullopt;
        if (__builtin_add_overflow(value, text[i] - '0', &value)) return std::nullopt;
    }
    return negative ? -value : value;
}

inline const char* kRequiredCsvHeader[] = {"content_id", "platform", "captured_at",
                                           "transmissions"};

inline ParsedRows parse_rows_csv(std::string_view input, std::string_view source) {
    const CsvTable table = parse_csv(input);
    if (table.header.size() < 4)
        throw FormatError("csv header must start with "
                          "content_id,platform,captured_at,transmissions");
    for (std::size_t i = 0; i < 4; ++i) {
        if (table.header[i] != kRequiredCsvHeader[i])
            throw FormatError("csv header column " + std::to_string(i + 1) + " must be '" +
                              kRequiredCsvHeader[i] + "', got '" + table.header[i] + "'");
    }
    std::set<std::string> seen_columns;
    for (const auto& column : table.header) {
        if (!seen_columns.insert(column).second)
            throw FormatError("duplicate csv column '" + column + "'");
    }

    ParsedRows out;
    out.diagnostics.rows_in = table.rows.size();
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        const auto& cells = table.rows[r];
        const std::string location = "line " + std::to_string(table.row_lines[r]);
        const auto reject = [&](const std::string& message) {
            out.diagnostics.errors.push_back({std::string(source), location, message});
        };
        if (cells.size() != table.header.size()) {
            reject("expected " + std::to_string(table.header.size()) + " fields, got " +
                   std::to_string(cells.size()));
            continue;
        }
        RawEngagementRow row;
        row.source = source;
        row.content_id = cells[0];
        if (row.content_id.empty()) {
            reject("content_id must be non-empty");
            continue;
        }
        row.platform = cells[1];
        try {
            row.captured_at = Timestamp::parse(cells[2]);
        } catch (const FormatError& e) {
            reject(e.what());
            continue;
        }
        const auto transmissions = parse_int(cells[3]);
        if (!transmissions || *transmissions < 1) {
            reject("transmissions must be >= 1");
            continue;
        }
        row.transmissions = *transmissions;
        bool ok = true;
        for (std::size_t c = 4; c < cells.size(); ++c) {
            if (cells[c].empty()) continue;  // empty cell means the type is absent
            const auto count = parse_int(cells[c]);
            if (!count || *count < 0) {
                reject("column '" + table.header[c] + "' must be a non-negative integer, got '" +
                       cells[c] + "'");
                ok = false;
                break;
            }
            row.raw_counts[table.header[c]] = *count;
        }
        if (ok) out.rows.push_back(std::move(row));
    }
    return out;
}

inline bool json_is_count(const nlohmann::json& value) {
    return value.is_number_integer() && !value.is_boolean();
}

inline ParsedRows parse_rows_json(std::string_view input, std::string_view source) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(input);
    } catch (const nlohmann::json::parse_error& e) {
        throw FormatError(std::string("json parse error: ") + e.what());
    }
    if (!doc.is_array()) throw FormatError("json input must be an array of records");

    ParsedRows out;
    out.diagnostics.rows_in = doc.size();
    for (std::size_t i = 0; i < doc.size(); ++i) {
        const auto& element = doc[i];
        const std::string location = "element " + std::to_string(i);
        const auto reject = [&](const std::string& message) {
            out.diagnostics.errors.push_back({std::string(source), location, message});
        };
        if (!element.is_object()) {
            reject("record must be a json object");
            continue;
        }

        RawEngagementRow row;
        row.source = source;
        const bool legacy = element.contains("post_id") && !element.contains("content_id");
        try {
            if (legacy) {
                // Legacy flat shape: post_id plus flat count keys, one
                // transmission, no timestamp.
                const auto& id = element.at("post_id");
                if (id.is_string())
                    row.content_id = id.get<std::string>();
                else if (json_is_count(id))
                    row.content_id = std::to_string(id.get<std::int64_t>());
                else
                    throw FormatError("post_id must be a string or integer");
                for (const auto& [key, value] : element.items()) {
                    if (key == "post_id") continue;
                    if (key == "transmissions") {
                        if (!json_is_count(value) || value.get<std::int64_t>() < 1)
                            throw FormatError("transmissions must be >= 1");
                        row.transmissions = value.get<std::int64_t>();
                        continue;
                    }
                    if (!json_is_count(value) || value.get<std::int64_t>() < 0)
                        throw FormatError("count '" + key + "' must be a non-negative integer");
                    row.raw_counts[key] = value.get<std::int64_t>();
                }
            } else {
                const auto& id = element.at("content_id");
                if (!id.is_string() || id.get<std::string>().empty())
                    throw FormatError("content_id must be a non-empty string");
                row.content_id = id.get<std::string>();
                if (element.contains("platform")) {
                    if (!element["platform"].is_string())
                        throw FormatError("platform must be a string");
                    row.platform = element["platform"].get<std::string>();
                }
                if (!element.contains("captured_at") || !element["captured_at"].is_string())
                    throw FormatError("captured_at is required");
                row.captured_at = Timestamp::parse(element["captured_at"].get<std::string>());
                if (!element.contains("transmissions") || !json_is_count(element["transmissions"]) ||
                    element["transmissions"].get<std::int64_t>() < 1)
                    throw FormatError("transmissions must be >= 1");
                row.transmissions = element["transmissions"].get<std::int64_t>();
                if (!element.contains("counts") || !element["counts"].is_object())
                    throw FormatError("counts must be an object of name -> integer");
                for (const auto& [key, value] : element["counts"].items()) {
                    if (!json_is_count(value) || value.get<std::int64_t>() < 0)
                        throw FormatError("count '" + key + "' must be a non-negative integer");
                    row.raw_counts[key] = value.get<std::int64_t>();
                }
                if (element.contains("scoring_unit")) {
                    if (!element["scoring_unit"].is_string())
                        throw FormatError("scoring_unit must be 'post' or 'account'");
                    const auto unit =
                        parse_scoring_unit(element["scoring_unit"].get<std::string>());
                    if (!unit) throw FormatError("scoring_unit must be 'post' or 'account'");
                    row.scoring_unit = *unit;
                }
                if (element.contains("warnings")) {
                    if (!element["warnings"].is_array())
                        throw FormatError("warnings must be an array of strings");
                    for (const auto& w : element["warnings"]) {
                        if (!w.is_string()) throw FormatError("warnings must be an array of strings");
                        row.warnings.push_back(w.get<std::string>());
                    }
                }
            }
        } catch (const FormatError& e) {
            reject(e.what());
            continue;
        } catch (const nlohmann::json::exception& e) {
            reject(e.what());
            continue;
        }
        out.rows.push_back(std::move(row));
    }
    return out;
}

} // namespace detail

// Parse one exported file into raw rows. Throws FormatError when the input is
// not UTF-8 or the file-level structure is wrong; per-row violations are
// collected in the diagnostics and parsing continues.
inline ParsedRows parse_rows(std::string_view input, InputFormat format,
                             std::string_view source = "") {
    if (!is_valid_utf8(input)) throw FormatError("input is not valid UTF-8");
    return format == InputFormat::csv ? detail::parse_rows_csv(input, source)
                                      : detail::parse_rows_json(input, source);
}

// Normalize one raw row: rename native interaction names per the adapter,
// drop excluded names with a warning, and sum counts that land on the same
// type. Unknown native names raise UnknownNativeInteractionError.
inline EngagementRecord normalize(const RawEngagementRow& row, const PlatformAdapter& adapter) {
    if (row.content_id.empty()) throw FormatError("content_id must be non-empty");
    if (row.transmissions < 1) throw FormatError("transmissions must be >= 1");

    EngagementRecord record;
    record.content_id = row.content_id;
    record.platform = row.platform;
    record.captured_at = row.captured_at;
    record.transmissions = row.transmissions;
    record.scoring_unit = row.scoring_unit;
    record.warnings = row.warnings;
    for (const auto& [native, count] : row.raw_counts) {
        if (count < 0) throw InvalidCountError("count for '" + native + "' must be non-negative");
        if (adapter.is_excluded(native)) {
            record.warnings.push_back(native + " excluded");
            continue;
        }
        record.counts.add(adapter.resolve(native), count);
    }
    return record;
}

namespace detail {

inline std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError(path.string(), "cannot open for reading");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    if (in.bad()) throw IoError(path.string(), "read failed");
    return std::move(buffer).str();
}

inline InputFormat detect_format(const std::filesystem::path& path, std::string_view content) {
    std::string ext = path.extension().string();
    for (auto& c : ext) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    if (ext == ".json") return InputFormat::json;
    if (ext == ".csv") return InputFormat::csv;
    const auto first = content.find_first_not_of(" \t\r\n");
    if (first != std::string_view::npos && (content[first] == '[' || content[first] == '{'))
        return InputFormat::json;
    return InputFormat::csv;
}

} // namespace detail

// Batch entry point: parse and normalize every path, deduplicate repeated
// (content_id, captured_at) captures, and report every drop in the
// diagnostics. rows_in == records out + row errors + duplicates dropped.
inline Dataset load_dataset(const std::vector<std::filesystem::path>& paths,
                            const AdapterRegistry& adapters) {
    Dataset dataset;
    std::set<std::pair<std::string, Timestamp>> seen;
    for (const auto& path : paths) {
        const std::string content = detail::read_text_file(path);
        const InputFormat format = detail::detect_format(path, content);
        ParsedRows parsed = parse_rows(content, format, path.string());
        dataset.diagnostics.merge(std::move(parsed.diagnostics));
        for (const auto& row : parsed.rows) {
            EngagementRecord record;
            try {
                record = normalize(row, adapters.for_platform(row.platform));
            } catch (const Error& e) {
                dataset.diagnostics.errors.push_back({row.source, "content_id " + row.content_id,
                                                      e.what()});
                continue;
            }
            if (!seen.emplace(record.content_id, record.captured_at).second) {
                dataset.diagnostics.duplicates_dropped += 1;
                dataset.diagnostics.warnings.push_back(
                    "duplicate capture of '" + record.content_id + "' at " +
                    record.captured_at.to_string() + " dropped (" + row.source + ")");
                continue;
            }
            for (const auto& warning : record.warnings)
                dataset.diagnostics.warnings.push_back("'" + record.content_id + "': " + warning);
            dataset.records.push_back(std::move(record));
        }
    }
    return dataset;
}

} // namespace cogmetric
