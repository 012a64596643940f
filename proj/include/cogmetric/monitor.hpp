#pragma once

#include <fcntl.h>
#include <unistd.h>

#include <cerrno>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "cogmetric/errors.hpp"
#include "cogmetric/ingest.hpp"
#include "cogmetric/metric.hpp"
#include "cogmetric/serialize.hpp"
#include "cogmetric/timestamp.hpp"
#include "cogmetric/types.hpp"

namespace cogmetric {

// One persisted capture. seq is a store-global append counter so a store can
// be replayed in its original order from the log files alone.
struct Snapshot {
    std::uint64_t seq = 0;
    EngagementRecord record;
    Assessment assessment;

    bool operator==(const Snapshot&) const = default;
};

// Emitted on an upward crossing into {A, A+} or when the viral multiplier
// increases while in A+. Downward crossings never emit.
struct FlagEvent {
    std::string content_id;
    Timestamp at;
    Grade from_grade = Grade::F;
    Grade to_grade = Grade::F;
    double effectiveness_before = 0.0;
    double effectiveness_after = 0.0;

    bool operator==(const FlagEvent&) const = default;
};

struct TrendPoint {
    Timestamp captured_at;
    double effectiveness = 0.0;
    Grade grade = Grade::F;
    double delta_e = 0.0;
};

struct AppendResult {
    Snapshot snapshot;
    std::optional<FlagEvent> event;
};

struct ReevaluationRow {
    std::string content_id;
    double old_effectiveness = 0.0;
    double new_effectiveness = 0.0;
    Grade old_grade = Grade::F;
    Grade new_grade = Grade::F;
};

struct ReevaluationReport {
    WeightScheme scheme;
    bool canonical_scheme = true;
    std::vector<ReevaluationRow> rows;
};

inline void to_json(nlohmann::json& j, const Snapshot& snapshot) {
    j = nlohmann::json{{"seq", snapshot.seq},
                       {"record", snapshot.record},
                       {"assessment", snapshot.assessment}};
}
inline void from_json(const nlohmann::json& j, Snapshot& snapshot) {
    j.at("seq").get_to(snapshot.seq);
    j.at("record").get_to(snapshot.record);
    j.at("assessment").get_to(snapshot.assessment);
}

inline void to_json(nlohmann::json& j, const FlagEvent& event) {
    j = nlohmann::json{{"content_id", event.content_id},
                       {"at", event.at},
                       {"from_grade", event.from_grade},
                       {"to_grade", event.to_grade},
                       {"effectiveness_before", event.effectiveness_before},
                       {"effectiveness_after", event.effectiveness_after}};
}
inline void from_json(const nlohmann::json& j, FlagEvent& event) {
    j.at("content_id").get_to(event.content_id);
    j.at("at").get_to(event.at);
    j.at("from_grade").get_to(event.from_grade);
    j.at("to_grade").get_to(event.to_grade);
    j.at("effectiveness_before").get_to(event.effectiveness_before);
    j.at("effectiveness_after").get_to(event.effectiveness_after);
}

inline void to_json(nlohmann::json& j, const ReevaluationRow& row) {
    j = nlohmann::json{{"content_id", row.content_id},
                       {"old_effectiveness", row.old_effectiveness},
                       {"new_effectiveness", row.new_effectiveness},
                       {"old_grade", row.old_grade},
                       {"new_grade", row.new_grade},
                       {"grade_changed", row.old_grade != row.new_grade}};
}

inline void to_json(nlohmann::json& j, const ReevaluationReport& report) {
    j = nlohmann::json{{"scheme", report.scheme},
                       {"canonical_scheme", report.canonical_scheme},
                       {"rows", report.rows}};
}

namespace detail {

// Series files are named after the content id; characters that are unsafe in
// file names are percent-encoded, and the one id that would collide with the
// event sink is escaped too.
inline std::string encode_series_filename(const std::string& content_id) {
    static const char hex[] = "0123456789ABCDEF";
    std::string out;
    for (const unsigned char c : content_id) {
        const bool safe = (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') ||
                          (c >= '0' && c <= '9') || c == '.' || c == '_' || c == '-';
        if (safe) {
            out += static_cast<char>(c);
        } else {
            out += '%';
            out += hex[c >> 4];
            out += hex[c & 0xF];
        }
    }
    if (out == "events") out = "%65vents";
    return out;
}

// Append one line and fsync so the append is durable before success is
// reported.
inline void append_line_durable(const std::filesystem::path& file, const std::string& line) {
    const int fd = ::open(file.c_str(), O_WRONLY | O_APPEND | O_CREAT, 0644);
    if (fd < 0)
        throw StorageError("cannot open '" + file.string() + "': " + std::strerror(errno));
    std::string payload = line;
    payload += '\n';
    std::size_t written = 0;
    while (written < payload.size()) {
        const ssize_t n = ::write(fd, payload.data() + written, payload.size() - written);
        if (n < 0) {
            const int err = errno;
            ::close(fd);
            throw StorageError("write to '" + file.string() + "' failed: " + std::strerror(err));
        }
        written += static_cast<std::size_t>(n);
    }
    if (::fsync(fd) != 0) {
        const int err = errno;
        ::close(fd);
        throw StorageError("fsync of '" + file.string() + "' failed: " + std::strerror(err));
    }
    ::close(fd);
}

inline std::vector<std::string> read_lines(const std::filesystem::path& file) {
    const std::string content = read_text_file(file);
    std::vector<std::string> lines;
    std::size_t start = 0;
    while (start < content.size()) {
        std::size_t end = content.find('\n', start);
        if (end == std::string::npos) end = content.size();
        if (end > start) lines.push_back(content.substr(start, end - start));
        start = end + 1;
    }
    return lines;
}

} // namespace detail

// Append-only snapshot log, one newline-delimited json file per content id
// plus an events.ndjson sink, all under one root directory. The active weight
// scheme is persisted in scheme.json so re-reading the store reproduces the
// same assessments.
class SnapshotStore {
public:
    explicit SnapshotStore(std::filesystem::path root,
                           std::optional<WeightScheme> scheme = std::nullopt)
        : root_(std::move(root)) {
        namespace fs = std::filesystem;
        std::error_code ec;
        fs::create_directories(root_, ec);
        if (ec) throw StorageError("cannot create store root '" + root_.string() + "': " +
                                   ec.message());

        const fs::path scheme_file = root_ / "scheme.json";
        if (fs::exists(scheme_file)) {
            nlohmann::json doc;
            try {
                doc = nlohmann::json::parse(detail::read_text_file(scheme_file));
            } catch (const nlohmann::json::parse_error& e) {
                throw StorageError("corrupt scheme.json in '" + root_.string() + "': " + e.what());
            }
            scheme_ = doc.get<WeightScheme>();
            if (scheme && !(*scheme == scheme_))
                throw StorageError("store '" + root_.string() +
                                   "' was created with a different weight scheme");
        } else {
            scheme_ = scheme.value_or(WeightScheme::paper_default());
            nlohmann::json doc = scheme_;
            detail::append_line_durable(scheme_file, doc.dump());
        }

        for (const auto& entry : fs::directory_iterator(root_)) {
            if (!entry.is_regular_file()) continue;
            const fs::path& path = entry.path();
            if (path.extension() != ".ndjson" || path.filename() == "events.ndjson") continue;
            const std::vector<Snapshot> snapshots = load_snapshots(path);
            if (snapshots.empty()) continue;
            // Appends keep each series file chronological, so the last line
            // is the series' latest state.
            const Snapshot& latest = snapshots.back();
            state_[latest.record.content_id] =
                SeriesState{latest.record.captured_at,       latest.assessment.flagged,
                            latest.assessment.viral_multiplier, latest.assessment.grade,
                            latest.assessment.effectiveness,  snapshots.size()};
            for (const Snapshot& snapshot : snapshots)
                if (snapshot.seq >= next_seq_) next_seq_ = snapshot.seq + 1;
        }
    }

    SnapshotStore(const SnapshotStore&) = delete;
    SnapshotStore& operator=(const SnapshotStore&) = delete;

    const WeightScheme& scheme() const { return scheme_; }
    const std::filesystem::path& root() const { return root_; }

    // Persist one capture. The record's captured_at must be strictly later
    // than the series' latest snapshot. Returns the snapshot and, when the
    // flag predicate newly fires or the viral multiplier grows within A+,
    // the emitted FlagEvent.
    AppendResult append_snapshot(const EngagementRecord& record) {
        std::lock_guard<std::mutex> lock(mu_);
        const auto it = state_.find(record.content_id);
        if (it != state_.end() && record.captured_at <= it->second.latest)
            throw OutOfOrderSnapshotError(record.content_id);

        Snapshot snapshot;
        snapshot.seq = next_seq_;
        snapshot.record = record;
        snapshot.assessment = assess(record.counts, record.transmissions, scheme_);

        const nlohmann::json line = snapshot;
        detail::append_line_durable(series_file(record.content_id), line.dump());

        const SeriesState previous =
            it != state_.end() ? it->second : SeriesState{};
        std::optional<FlagEvent> event;
        const bool newly_flagged = !previous.flagged && snapshot.assessment.flagged;
        const bool viral_rise = snapshot.assessment.grade == Grade::APlus &&
                                snapshot.assessment.viral_multiplier > previous.viral;
        if (newly_flagged || viral_rise) {
            event = FlagEvent{record.content_id,        record.captured_at,
                              previous.grade,           snapshot.assessment.grade,
                              previous.effectiveness,   snapshot.assessment.effectiveness};
            const nlohmann::json event_line = *event;
            detail::append_line_durable(root_ / "events.ndjson", event_line.dump());
        }

        state_[record.content_id] =
            SeriesState{record.captured_at, snapshot.assessment.flagged,
                        snapshot.assessment.viral_multiplier, snapshot.assessment.grade,
                        snapshot.assessment.effectiveness, previous.count + 1};
        ++next_seq_;
        return {std::move(snapshot), std::move(event)};
    }

    std::vector<std::string> series_ids() const {
        std::lock_guard<std::mutex> lock(mu_);
        std::vector<std::string> ids;
        ids.reserve(state_.size());
        for (const auto& [id, state] : state_) ids.push_back(id);
        return ids;
    }

    bool has_series(const std::string& content_id) const {
        std::lock_guard<std::mutex> lock(mu_);
        return state_.contains(content_id);
    }

    // All snapshots of one series, chronological.
    std::vector<Snapshot> series(const std::string& content_id) const {
        {
            std::lock_guard<std::mutex> lock(mu_);
            if (!state_.contains(content_id)) throw UnknownContentIdError(content_id);
        }
        return load_snapshots(series_file(content_id));
    }

    // Chronological trend rows; the first row's delta is zero. Stored grades
    // are revalidated against the stored effectiveness.
    std::vector<TrendPoint> series_trend(const std::string& content_id) const {
        const std::vector<Snapshot> snapshots = series(content_id);
        std::vector<TrendPoint> trend;
        trend.reserve(snapshots.size());
        double previous_e = 0.0;
        for (std::size_t i = 0; i < snapshots.size(); ++i) {
            const auto& a = snapshots[i].assessment;
            if (assign_grade(a.effectiveness) != a.grade)
                throw StorageError("stored grade for '" + content_id +
                                   "' does not match its stored effectiveness");
            trend.push_back({snapshots[i].record.captured_at, a.effectiveness, a.grade,
                             i == 0 ? 0.0 : a.effectiveness - previous_e});
            previous_e = a.effectiveness;
        }
        return trend;
    }

    std::vector<FlagEvent> events() const {
        const std::filesystem::path file = root_ / "events.ndjson";
        if (!std::filesystem::exists(file)) return {};
        std::vector<FlagEvent> out;
        for (const auto& line : detail::read_lines(file)) {
            try {
                out.push_back(nlohmann::json::parse(line).get<FlagEvent>());
            } catch (const nlohmann::json::exception& e) {
                throw StorageError("corrupt events.ndjson: " + std::string(e.what()));
            }
        }
        return out;
    }

    // Recompute every series' latest snapshot under another scheme, without
    // touching the stored history.
    ReevaluationReport reevaluate_all(const WeightScheme& new_scheme) const {
        ReevaluationReport report;
        report.scheme = new_scheme;
        report.canonical_scheme = new_scheme.is_paper_default();
        for (const auto& id : series_ids()) {
            const std::vector<Snapshot> snapshots = series(id);
            if (snapshots.empty()) continue;
            const Snapshot& latest = snapshots.back();
            const Assessment fresh =
                assess(latest.record.counts, latest.record.transmissions, new_scheme);
            report.rows.push_back({id, latest.assessment.effectiveness, fresh.effectiveness,
                                   latest.assessment.grade, fresh.grade});
        }
        return report;
    }

private:
    struct SeriesState {
        Timestamp latest;
        bool flagged = false;
        std::uint64_t viral = 0;
        Grade grade = Grade::F;
        double effectiveness = 0.0;
        std::size_t count = 0;
    };

    std::filesystem::path series_file(const std::string& content_id) const {
        return root_ / (detail::encode_series_filename(content_id) + ".ndjson");
    }

    static std::vector<Snapshot> load_snapshots(const std::filesystem::path& file) {
        std::vector<Snapshot> out;
        for (const auto& line : detail::read_lines(file)) {
            try {
                out.push_back(nlohmann::json::parse(line).get<Snapshot>());
            } catch (const nlohmann::json::exception& e) {
                throw StorageError("corrupt snapshot line in '" + file.string() + "': " +
                                   e.what());
            }
        }
        return out;
    }

    std::filesystem::path root_;
    WeightScheme scheme_;
    std::map<std::string, SeriesState> state_;
    std::uint64_t next_seq_ = 1;
    mutable std::mutex mu_;
};

} // namespace cogmetric
