#pragma once

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <map>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "cogmetric/errors.hpp"
#include "cogmetric/ingest.hpp"
#include "cogmetric/metric.hpp"
#include "cogmetric/types.hpp"

namespace cogmetric {

// Optional removal of interactions attributable to the attacker's own
// accounts: per transmission, the attacker is assumed to contribute the
// configured interactions (one like and one comment by default). Off by
// default; the published grade thresholds already embed this baseline.
struct SelfInteractionPolicy {
    std::map<InteractionType, std::int64_t> deductions = {{InteractionType::like(), 1},
                                                          {InteractionType::comment(), 1}};
    bool enabled = false;
};

// Subtract deduction * transmissions per type, clamped at zero. Identity when
// the policy is disabled.
inline InteractionCounts apply_self_interaction_deduction(const InteractionCounts& counts,
                                                          const SelfInteractionPolicy& policy,
                                                          std::int64_t transmissions) {
    if (!policy.enabled) return counts;
    if (transmissions < 1) throw ZeroTransmissionsError();
    InteractionCounts out;
    for (const auto& [type, count] : counts.entries()) {
        const auto it = policy.deductions.find(type);
        std::int64_t deducted = count;
        if (it != policy.deductions.end()) {
            if (it->second < 0)
                throw ConfigError("deduction for '" + type.name() + "' must be non-negative");
            std::int64_t total_deduction = 0;
            if (__builtin_mul_overflow(it->second, transmissions, &total_deduction))
                deducted = 0;
            else
                deducted = count > total_deduction ? count - total_deduction : 0;
        }
        out.set(type, deducted);
    }
    return out;
}

struct ScoredRecord {
    EngagementRecord record;
    Assessment assessment;
};

// Assess every record, after the optional self-interaction deduction. Output
// order is input order. Errors from the metric layer are rethrown annotated
// with the offending content id.
inline std::vector<ScoredRecord> score_records(std::span<const EngagementRecord> records,
                                               const WeightScheme& scheme,
                                               const SelfInteractionPolicy& policy = {}) {
    std::vector<ScoredRecord> out;
    out.reserve(records.size());
    for (const auto& record : records) {
        const std::string context = "record '" + record.content_id + "'";
        try {
            const InteractionCounts counts =
                apply_self_interaction_deduction(record.counts, policy, record.transmissions);
            out.push_back({record, assess(counts, record.transmissions, scheme)});
        } catch (const UnknownInteractionTypeError& e) {
            throw UnknownInteractionTypeError(e.type_name(), context);
        } catch (const ZeroTransmissionsError&) {
            throw ZeroTransmissionsError(context);
        } catch (const Error& e) {
            throw Error(context + ": " + e.what());
        }
    }
    return out;
}

// Scored unit assessments plus one aggregate assessment over the summed
// counts and summed transmissions of a record group.
struct CampaignReport {
    std::string key;
    std::vector<ScoredRecord> units;
    InteractionCounts total_counts;
    std::int64_t total_transmissions = 0;
    Assessment aggregate;
    std::map<Grade, std::size_t> grade_distribution;
    std::vector<std::string> flagged_ids;
};

// Aggregate one account or campaign: counts are summed pointwise and
// transmissions summed before scoring, so the aggregate effectiveness is
// (sum I) / (sum t), not the mean of per-record ratios.
inline CampaignReport aggregate_account(std::string key,
                                        std::span<const EngagementRecord> records,
                                        const WeightScheme& scheme,
                                        const SelfInteractionPolicy& policy = {}) {
    if (records.empty()) throw EmptyGroupError();
    CampaignReport report;
    report.key = std::move(key);
    report.units = score_records(records, scheme, policy);
    for (const auto& unit : report.units) {
        const InteractionCounts counts = apply_self_interaction_deduction(
            unit.record.counts, policy, unit.record.transmissions);
        report.total_counts = report.total_counts.plus(counts);
        if (__builtin_add_overflow(report.total_transmissions, unit.record.transmissions,
                                   &report.total_transmissions))
            throw InvalidCountError("aggregate transmissions overflow");
        report.grade_distribution[unit.assessment.grade] += 1;
        if (unit.assessment.flagged) report.flagged_ids.push_back(unit.record.content_id);
    }
    report.aggregate = assess(report.total_counts, report.total_transmissions, scheme);
    return report;
}

enum class RankKey { effectiveness, viral_multiplier };

// Stable descending sort by the chosen key; ties resolve by key id ascending.
inline std::vector<CampaignReport> rank_reports(std::vector<CampaignReport> reports, RankKey key) {
    std::stable_sort(reports.begin(), reports.end(),
                     [key](const CampaignReport& a, const CampaignReport& b) {
                         if (key == RankKey::effectiveness) {
                             if (a.aggregate.effectiveness != b.aggregate.effectiveness)
                                 return a.aggregate.effectiveness > b.aggregate.effectiveness;
                         } else {
                             if (a.aggregate.viral_multiplier != b.aggregate.viral_multiplier)
                                 return a.aggregate.viral_multiplier > b.aggregate.viral_multiplier;
                         }
                         return a.key < b.key;
                     });
    return reports;
}

// Pre-aggregation exclusion hook (bot filtering and the like); no heuristic
// ships with the library.
template <typename Predicate>
std::vector<EngagementRecord> filter_records(std::span<const EngagementRecord> records,
                                             Predicate&& keep) {
    std::vector<EngagementRecord> out;
    for (const auto& record : records)
        if (keep(record)) out.push_back(record);
    return out;
}

// Plain-text table for one report: effectiveness, grade, and the grade's
// descriptive label per unit, then the aggregate line.
inline std::string render_report_table(const CampaignReport& report) {
    std::ostringstream os;
    char line[160];
    os << "Report: " << report.key << "\n";
    std::snprintf(line, sizeof(line), "%-24s %14s  %-5s %s\n", "content_id", "E", "grade",
                  "description");
    os << line;
    for (const auto& unit : report.units) {
        std::snprintf(line, sizeof(line), "%-24s %14.2f  %-5s %s%s\n",
                      unit.record.content_id.c_str(), unit.assessment.effectiveness,
                      std::string(grade_name(unit.assessment.grade)).c_str(),
                      std::string(grade_description(unit.assessment.grade)).c_str(),
                      unit.assessment.flagged ? "  [flagged]" : "");
        os << line;
    }
    std::snprintf(line, sizeof(line), "%-24s %14.2f  %-5s %s (t=%lld)\n", "aggregate",
                  report.aggregate.effectiveness,
                  std::string(grade_name(report.aggregate.grade)).c_str(),
                  std::string(grade_description(report.aggregate.grade)).c_str(),
                  static_cast<long long>(report.total_transmissions));
    os << line;
    if (!report.aggregate.canonical_scheme)
        os << "note: non-canonical weight scheme; grade bands assume the default weights\n";
    return os.str();
}

} // namespace cogmetric
