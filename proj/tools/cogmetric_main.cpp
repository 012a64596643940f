// cogmetric: score exported engagement data, watch content over time, and
// report trends and rankings from a snapshot store.

#include <charconv>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "cogmetric/cogmetric.hpp"

namespace {

namespace fs = std::filesystem;
using namespace cogmetric;

std::string format2(double value) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.2f", value);
    return buf;
}

std::string format_full(double value) {
    char buf[64];
    const auto result = std::to_chars(buf, buf + sizeof(buf), value);
    return std::string(buf, result.ptr);
}

std::string join(const std::vector<std::string>& items, const std::string& sep) {
    std::string out;
    for (std::size_t i = 0; i < items.size(); ++i) {
        if (i > 0) out += sep;
        out += items[i];
    }
    return out;
}

struct CliConfig {
    std::vector<std::string> files;
    std::string weights_path;
    std::string adapters_path;
    std::string store_root;
    std::string format = "table";
    std::string flag_grade = "A";
};

WeightScheme resolve_scheme(const CliConfig& config) {
    if (config.weights_path.empty()) return WeightScheme::paper_default();
    return load_weight_scheme(config.weights_path);
}

AdapterRegistry resolve_adapters(const CliConfig& config) {
    if (config.adapters_path.empty()) return AdapterRegistry::defaults();
    return load_adapter_registry(config.adapters_path);
}

void print_row_issues(const Diagnostics& diagnostics) {
    for (const auto& issue : diagnostics.errors)
        std::cerr << issue.source << " " << issue.location << ": " << issue.message << "\n";
    for (const auto& warning : diagnostics.warnings) std::cerr << "warning: " << warning << "\n";
}

void print_paper_defaults() {
    const WeightScheme scheme = WeightScheme::paper_default();
    std::cout << "weights:\n";
    for (const auto& [type, weight] : scheme.entries())
        std::cout << "  " << type.name() << " = " << format_full(weight) << "\n";
    std::cout << "grading scale (first matching band, descending):\n";
    std::cout << "  A+  E >= 10000         Viral\n";
    std::cout << "  A   1000 <= E < 10000  Excellent\n";
    std::cout << "  B   100 <= E < 1000    Above Average\n";
    std::cout << "  C   10 <= E < 100      Average\n";
    std::cout << "  D   4 <= E < 10        Below Average\n";
    std::cout << "  E   3 <= E < 4         Poor\n";
    std::cout << "  F   0 <= E < 3         Failure\n";
    std::cout << "flag rule: grades A and A+ are flagged for review\n";
    std::cout << "viral rule: viral multiplier = floor(E / 10000)\n";
}

int cmd_score(const CliConfig& config) {
    const WeightScheme scheme = resolve_scheme(config);
    const AdapterRegistry adapters = resolve_adapters(config);
    const Grade threshold = *parse_grade(config.flag_grade);

    std::vector<fs::path> paths(config.files.begin(), config.files.end());
    const Dataset dataset = load_dataset(paths, adapters);
    print_row_issues(dataset.diagnostics);

    const std::vector<ScoredRecord> scored = score_records(dataset.records, scheme);
    std::vector<std::string> flagged;
    for (const auto& s : scored)
        if (grade_rank(s.assessment.grade) >= grade_rank(threshold))
            flagged.push_back(s.record.content_id);

    if (config.format == "json") {
        nlohmann::json out{{"canonical_scheme", scheme.is_paper_default()},
                           {"records", scored},
                           {"flagged", flagged}};
        std::cout << out.dump(2) << "\n";
    } else if (config.format == "csv") {
        write_csv_row(std::cout, {"content_id", "platform", "captured_at", "transmissions",
                                  "weighted_score", "effectiveness", "grade", "viral_multiplier",
                                  "flagged"});
        for (const auto& s : scored)
            write_csv_row(std::cout,
                          {s.record.content_id, s.record.platform,
                           s.record.captured_at.to_string(),
                           std::to_string(s.record.transmissions),
                           format_full(s.assessment.weighted_score),
                           format_full(s.assessment.effectiveness),
                           std::string(grade_name(s.assessment.grade)),
                           std::to_string(s.assessment.viral_multiplier),
                           s.assessment.flagged ? "true" : "false"});
    } else {
        if (!scheme.is_paper_default())
            std::cout << "note: non-canonical weight scheme; grade bands assume the default "
                         "weights\n";
        const std::string marker = scheme.is_paper_default() ? "" : "*";
        for (const auto& s : scored) {
            std::cout << s.record.content_id << " - E of " << format2(s.assessment.effectiveness)
                      << " graded " << grade_name(s.assessment.grade) << marker << "\n";
            if (grade_rank(s.assessment.grade) >= grade_rank(threshold))
                std::cout << "Flagging post " << s.record.content_id << " for review.\n";
        }
        if (flagged.empty())
            std::cout << "No posts are flagged for review.\n";
        else
            std::cout << "These posts are flagged for review: [" << join(flagged, ", ") << "]\n";
    }
    return dataset.diagnostics.errors.empty() ? 0 : 2;
}

int cmd_watch(const CliConfig& config) {
    const WeightScheme scheme = resolve_scheme(config);
    const AdapterRegistry adapters = resolve_adapters(config);

    std::vector<fs::path> paths(config.files.begin(), config.files.end());
    const Dataset dataset = load_dataset(paths, adapters);
    print_row_issues(dataset.diagnostics);

    SnapshotStore store(config.store_root,
                        config.weights_path.empty() ? std::nullopt
                                                    : std::optional<WeightScheme>(scheme));
    std::vector<std::string> out_of_order;
    for (const auto& record : dataset.records) {
        try {
            const AppendResult result = store.append_snapshot(record);
            if (result.event) {
                const FlagEvent& e = *result.event;
                std::cout << "FLAG " << e.content_id << ": " << grade_name(e.from_grade) << " -> "
                          << grade_name(e.to_grade) << " (E " << format2(e.effectiveness_before)
                          << " -> " << format2(e.effectiveness_after) << ") at "
                          << e.at.to_string() << "\n";
            }
        } catch (const OutOfOrderSnapshotError& e) {
            out_of_order.push_back(record.content_id);
            std::cerr << e.what() << "\n";
        }
    }
    if (!out_of_order.empty()) {
        std::cerr << "out-of-order snapshots rejected for: " << join(out_of_order, ", ") << "\n";
        return 1;
    }
    return 0;
}

int cmd_report(const CliConfig& config) {
    const fs::path root = config.store_root;
    if (!fs::exists(root)) {
        if (config.format == "json") {
            std::cout << nlohmann::json{{"series", nlohmann::json::array()},
                                        {"ranking", nlohmann::json::array()}}
                             .dump(2)
                      << "\n";
        } else if (config.format == "csv") {
            write_csv_row(std::cout, {"content_id", "effectiveness", "grade", "viral_multiplier",
                                      "flagged"});
        } else {
            std::cout << "No series in store.\n";
        }
        return 0;
    }

    SnapshotStore store(root);
    std::vector<std::string> ids = store.series_ids();

    struct RankRow {
        std::string content_id;
        Assessment latest;
    };
    std::vector<RankRow> ranking;
    for (const auto& id : ids) {
        const auto snapshots = store.series(id);
        if (!snapshots.empty()) ranking.push_back({id, snapshots.back().assessment});
    }
    std::stable_sort(ranking.begin(), ranking.end(), [](const RankRow& a, const RankRow& b) {
        if (a.latest.effectiveness != b.latest.effectiveness)
            return a.latest.effectiveness > b.latest.effectiveness;
        return a.content_id < b.content_id;
    });

    if (config.format == "json") {
        nlohmann::json series = nlohmann::json::array();
        for (const auto& id : ids) {
            nlohmann::json trend = nlohmann::json::array();
            for (const auto& point : store.series_trend(id)) {
                trend.push_back({{"captured_at", point.captured_at},
                                 {"effectiveness", point.effectiveness},
                                 {"grade", point.grade},
                                 {"delta_e", point.delta_e}});
            }
            series.push_back({{"content_id", id}, {"trend", trend}});
        }
        nlohmann::json rank = nlohmann::json::array();
        for (const auto& row : ranking) {
            rank.push_back({{"content_id", row.content_id},
                            {"effectiveness", row.latest.effectiveness},
                            {"grade", row.latest.grade},
                            {"viral_multiplier", row.latest.viral_multiplier},
                            {"flagged", row.latest.flagged},
                            {"description",
                             std::string(grade_description(row.latest.grade))}});
        }
        nlohmann::json out{{"scheme", store.scheme()},
                           {"canonical_scheme", store.scheme().is_paper_default()},
                           {"series", series},
                           {"ranking", rank}};
        std::cout << out.dump(2) << "\n";
    } else if (config.format == "csv") {
        write_csv_row(std::cout, {"content_id", "effectiveness", "grade", "viral_multiplier",
                                  "flagged"});
        for (const auto& row : ranking)
            write_csv_row(std::cout, {row.content_id, format_full(row.latest.effectiveness),
                                      std::string(grade_name(row.latest.grade)),
                                      std::to_string(row.latest.viral_multiplier),
                                      row.latest.flagged ? "true" : "false"});
    } else {
        if (ids.empty()) {
            std::cout << "No series in store.\n";
            return 0;
        }
        if (!store.scheme().is_paper_default())
            std::cout << "note: non-canonical weight scheme; grade bands assume the default "
                         "weights\n";
        for (const auto& id : ids) {
            const auto trend = store.series_trend(id);
            std::cout << "Series " << id << " (" << trend.size() << " snapshots)\n";
            for (const auto& point : trend) {
                std::cout << "  " << point.captured_at.to_string() << "  E "
                          << format2(point.effectiveness) << "  grade " << grade_name(point.grade)
                          << "  dE " << (point.delta_e >= 0 ? "+" : "") << format2(point.delta_e)
                          << "\n";
            }
        }
        std::cout << "Ranking:\n";
        for (std::size_t i = 0; i < ranking.size(); ++i) {
            const auto& row = ranking[i];
            std::cout << "  " << (i + 1) << ". " << row.content_id << "  E "
                      << format2(row.latest.effectiveness) << "  grade "
                      << grade_name(row.latest.grade) << "  "
                      << grade_description(row.latest.grade);
            if (row.latest.viral_multiplier > 0)
                std::cout << " x" << row.latest.viral_multiplier;
            std::cout << "\n";
        }
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Engagement effectiveness scoring for influence-operation monitoring"};
    app.require_subcommand(0, 1);

    bool paper_defaults = false;
    app.add_flag("--paper-defaults", paper_defaults,
                 "Print the canonical weight scheme and grading bands, then exit");

    CliConfig config;
    const auto add_format = [&](CLI::App* cmd) {
        cmd->add_option("--format", config.format, "Output format")
            ->check(CLI::IsMember({"table", "json", "csv"}));
    };
    const auto add_ingest_config = [&](CLI::App* cmd) {
        cmd->add_option("--weights", config.weights_path,
                        "JSON weight scheme file (default: canonical weights)");
        cmd->add_option("--adapters", config.adapters_path,
                        "JSON adapter registry file (extends the built-in defaults)");
    };
    const auto add_store = [&](CLI::App* cmd) {
        cmd->add_option("--store", config.store_root, "Snapshot store directory")
            ->envname("COGMETRIC_STORE")
            ->required();
    };

    CLI::App* score = app.add_subcommand("score", "Score exported engagement data files");
    score->add_option("files", config.files, "Input files (csv or json)")->required();
    score->add_option("--flag-grade", config.flag_grade, "Lowest grade that flags for review")
        ->check(CLI::IsMember({"A", "A+"}));
    add_format(score);
    add_ingest_config(score);

    CLI::App* watch =
        app.add_subcommand("watch", "Append snapshots to a store and print flag events");
    watch->add_option("files", config.files, "Input files (csv or json)")->required();
    add_ingest_config(watch);
    add_store(watch);

    CLI::App* report = app.add_subcommand("report", "Render trends and rankings from a store");
    add_format(report);
    add_store(report);

    CLI11_PARSE(app, argc, argv);

    try {
        if (paper_defaults) {
            print_paper_defaults();
            return 0;
        }
        if (score->parsed()) return cmd_score(config);
        if (watch->parsed()) return cmd_watch(config);
        if (report->parsed()) return cmd_report(config);
        std::cout << app.help();
        return 0;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
