#pragma once

#include <filesystem>
#include <string>

#include "json.hpp"

#include "cogmetric/adapters.hpp"
#include "cogmetric/analysis.hpp"
#include "cogmetric/errors.hpp"
#include "cogmetric/ingest.hpp"
#include "cogmetric/timestamp.hpp"
#include "cogmetric/types.hpp"

// JSON conversions for the library's value types. nlohmann::json keeps object
// keys sorted, so every serialization here is byte-stable across runs.
namespace cogmetric {

inline void to_json(nlohmann::json& j, const Timestamp& ts) { j = ts.to_string(); }
inline void from_json(const nlohmann::json& j, Timestamp& ts) {
    ts = Timestamp::parse(j.get<std::string>());
}

inline void to_json(nlohmann::json& j, const InteractionCounts& counts) {
    j = nlohmann::json::object();
    for (const auto& [type, count] : counts.entries()) j[type.name()] = count;
}
inline void from_json(const nlohmann::json& j, InteractionCounts& counts) {
    counts = InteractionCounts();
    for (const auto& [name, value] : j.items())
        counts.set(InteractionType::from_name(name), value.get<std::int64_t>());
}

inline void to_json(nlohmann::json& j, const WeightScheme& scheme) {
    j = nlohmann::json::object();
    for (const auto& [type, weight] : scheme.entries()) j[type.name()] = weight;
}
inline void from_json(const nlohmann::json& j, WeightScheme& scheme) {
    scheme = WeightScheme();
    for (const auto& [name, value] : j.items()) {
        if (!value.is_number()) throw ConfigError("weight for '" + name + "' must be a number");
        scheme.set(InteractionType::from_name(name), value.get<double>());
    }
}

inline void to_json(nlohmann::json& j, const Grade& grade) { j = std::string(grade_name(grade)); }
inline void from_json(const nlohmann::json& j, Grade& grade) {
    const auto parsed = parse_grade(j.get<std::string>());
    if (!parsed) throw FormatError("unknown grade '" + j.get<std::string>() + "'");
    grade = *parsed;
}

inline void to_json(nlohmann::json& j, const Assessment& a) {
    j = nlohmann::json{{"weighted_score", a.weighted_score},
                       {"effectiveness", a.effectiveness},
                       {"grade", a.grade},
                       {"viral_multiplier", a.viral_multiplier},
                       {"flagged", a.flagged},
                       {"canonical_scheme", a.canonical_scheme}};
}
inline void from_json(const nlohmann::json& j, Assessment& a) {
    j.at("weighted_score").get_to(a.weighted_score);
    j.at("effectiveness").get_to(a.effectiveness);
    j.at("grade").get_to(a.grade);
    j.at("viral_multiplier").get_to(a.viral_multiplier);
    j.at("flagged").get_to(a.flagged);
    j.at("canonical_scheme").get_to(a.canonical_scheme);
}

inline void to_json(nlohmann::json& j, const EngagementRecord& record) {
    j = nlohmann::json{{"content_id", record.content_id},
                       {"platform", record.platform},
                       {"captured_at", record.captured_at},
                       {"transmissions", record.transmissions},
                       {"counts", record.counts}};
    if (record.scoring_unit != ScoringUnit::post)
        j["scoring_unit"] = std::string(scoring_unit_name(record.scoring_unit));
    if (!record.warnings.empty()) j["warnings"] = record.warnings;
}
inline void from_json(const nlohmann::json& j, EngagementRecord& record) {
    record = EngagementRecord();
    j.at("content_id").get_to(record.content_id);
    j.at("platform").get_to(record.platform);
    j.at("captured_at").get_to(record.captured_at);
    j.at("transmissions").get_to(record.transmissions);
    j.at("counts").get_to(record.counts);
    if (j.contains("scoring_unit")) {
        const auto unit = parse_scoring_unit(j["scoring_unit"].get<std::string>());
        if (!unit) throw FormatError("scoring_unit must be 'post' or 'account'");
        record.scoring_unit = *unit;
    }
    if (j.contains("warnings")) j["warnings"].get_to(record.warnings);
}

inline void to_json(nlohmann::json& j, const ScoredRecord& scored) {
    j = nlohmann::json{{"record", scored.record}, {"assessment", scored.assessment}};
}
inline void from_json(const nlohmann::json& j, ScoredRecord& scored) {
    j.at("record").get_to(scored.record);
    j.at("assessment").get_to(scored.assessment);
}

inline void to_json(nlohmann::json& j, const CampaignReport& report) {
    nlohmann::json distribution = nlohmann::json::object();
    for (const auto& [grade, count] : report.grade_distribution)
        distribution[std::string(grade_name(grade))] = count;
    j = nlohmann::json{{"key", report.key},
                       {"units", report.units},
                       {"total_counts", report.total_counts},
                       {"total_transmissions", report.total_transmissions},
                       {"aggregate", report.aggregate},
                       {"grade_distribution", distribution},
                       {"flagged_ids", report.flagged_ids}};
}

// File loaders for the two CLI-facing config formats.

inline WeightScheme load_weight_scheme(const std::filesystem::path& path) {
    const std::string content = detail::read_text_file(path);
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(content);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError("weight scheme '" + path.string() + "': " + e.what());
    }
    if (!doc.is_object())
        throw ConfigError("weight scheme '" + path.string() + "' must be a json object");
    return doc.get<WeightScheme>();
}

// Registry file: json map platform -> {rename: {...}, exclude: [...]}.
// Entries extend or replace the built-in defaults per platform.
inline AdapterRegistry load_adapter_registry(const std::filesystem::path& path) {
    const std::string content = detail::read_text_file(path);
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(content);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError("adapter registry '" + path.string() + "': " + e.what());
    }
    if (!doc.is_object())
        throw ConfigError("adapter registry '" + path.string() + "' must be a json object");
    AdapterRegistry registry = AdapterRegistry::defaults();
    for (const auto& [platform, spec] : doc.items()) {
        if (!spec.is_object())
            throw ConfigError("adapter '" + platform + "' must be a json object");
        std::map<std::string, InteractionType> rename;
        std::set<std::string> exclude;
        if (spec.contains("rename")) {
            if (!spec["rename"].is_object())
                throw ConfigError("adapter '" + platform + "': rename must be an object");
            for (const auto& [native, target] : spec["rename"].items()) {
                if (!target.is_string())
                    throw ConfigError("adapter '" + platform + "': rename target for '" + native +
                                      "' must be a string");
                rename.emplace(native, InteractionType::from_name(target.get<std::string>()));
            }
        }
        if (spec.contains("exclude")) {
            if (!spec["exclude"].is_array())
                throw ConfigError("adapter '" + platform + "': exclude must be an array");
            for (const auto& name : spec["exclude"]) {
                if (!name.is_string())
                    throw ConfigError("adapter '" + platform + "': exclude entries must be strings");
                exclude.insert(name.get<std::string>());
            }
        }
        registry.put(PlatformAdapter(platform, std::move(rename), std::move(exclude)));
    }
    return registry;
}

} // namespace cogmetric
