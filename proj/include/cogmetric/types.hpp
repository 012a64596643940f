#pragma once

#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>

#include "cogmetric/errors.hpp"

namespace cogmetric {

// One interaction type. The four canonical types (view, like, comment, share)
// are always available; custom types may be configured for anything else, with
// names disjoint from the canonical set. Ordering puts the canonical types
// first in their fixed rank, then custom types by name, so that every map
// keyed by InteractionType iterates deterministically.
class InteractionType {
public:
    static const InteractionType& view() {
        static const InteractionType t("view", 0);
        return t;
    }
    static const InteractionType& like() {
        static const InteractionType t("like", 1);
        return t;
    }
    static const InteractionType& comment() {
        static const InteractionType t("comment", 2);
        return t;
    }
    static const InteractionType& share() {
        static const InteractionType t("share", 3);
        return t;
    }

    // Throws ConfigError when the name is empty or collides with a canonical type.
    static InteractionType custom(std::string name) {
        if (name.empty()) throw ConfigError("custom interaction type name must be non-empty");
        if (canonical_rank(name) >= 0)
            throw ConfigError("custom interaction type '" + name +
                              "' collides with a canonical type name");
        return InteractionType(std::move(name), kCustomRank);
    }

    // Canonical instance when the name matches, custom type otherwise.
    static InteractionType from_name(std::string_view name) {
        switch (canonical_rank(name)) {
            case 0: return view();
            case 1: return like();
            case 2: return comment();
            case 3: return share();
            default: return custom(std::string(name));
        }
    }

    const std::string& name() const { return name_; }
    bool is_canonical() const { return rank_ != kCustomRank; }

    bool operator==(const InteractionType& other) const { return name_ == other.name_; }
    bool operator!=(const InteractionType& other) const { return !(*this == other); }
    bool operator<(const InteractionType& other) const {
        if (rank_ != other.rank_) return rank_ < other.rank_;
        return name_ < other.name_;
    }

private:
    static constexpr int kCustomRank = 4;

    static int canonical_rank(std::string_view name) {
        if (name == "view") return 0;
        if (name == "like") return 1;
        if (name == "comment") return 2;
        if (name == "share") return 3;
        return -1;
    }

    InteractionType(std::string name, int rank) : name_(std::move(name)), rank_(rank) {}

    std::string name_;
    int rank_;
};

// Ordinal grade bands, lowest first so that the enumerator order is the rank order.
enum class Grade { F = 0, E = 1, D = 2, C = 3, B = 4, A = 5, APlus = 6 };

inline std::string_view grade_name(Grade g) {
    switch (g) {
        case Grade::F: return "F";
        case Grade::E: return "E";
        case Grade::D: return "D";
        case Grade::C: return "C";
        case Grade::B: return "B";
        case Grade::A: return "A";
        case Grade::APlus: return "A+";
    }
    return "?";
}

inline std::string_view grade_description(Grade g) {
    switch (g) {
        case Grade::F: return "Failure";
        case Grade::E: return "Poor";
        case Grade::D: return "Below Average";
        case Grade::C: return "Average";
        case Grade::B: return "Above Average";
        case Grade::A: return "Excellent";
        case Grade::APlus: return "Viral";
    }
    return "?";
}

inline int grade_rank(Grade g) { return static_cast<int>(g); }

inline std::optional<Grade> parse_grade(std::string_view name) {
    for (Grade g : {Grade::F, Grade::E, Grade::D, Grade::C, Grade::B, Grade::A, Grade::APlus}) {
        if (grade_name(g) == name) return g;
    }
    return std::nullopt;
}

// Grades A and A+ flag content for review.
inline bool grade_flags(Grade g) { return grade_rank(g) >= grade_rank(Grade::A); }

// Non-negative counts per interaction type for one content unit at one capture
// time. An absent type reads as zero.
class InteractionCounts {
public:
    using Map = std::map<InteractionType, std::int64_t>;

    InteractionCounts() = default;

    std::int64_t get(const InteractionType& type) const {
        const auto it = counts_.find(type);
        return it == counts_.end() ? 0 : it->second;
    }

    void set(const InteractionType& type, std::int64_t count) {
        if (count < 0)
            throw InvalidCountError("count for '" + type.name() + "' must be non-negative");
        counts_[type] = count;
    }

    void add(const InteractionType& type, std::int64_t delta) {
        if (delta < 0)
            throw InvalidCountError("count for '" + type.name() + "' must be non-negative");
        std::int64_t& slot = counts_[type];
        if (__builtin_add_overflow(slot, delta, &slot))
            throw InvalidCountError("count for '" + type.name() + "' overflows");
    }

    const Map& entries() const { return counts_; }
    bool empty() const { return counts_.empty(); }

    // Pointwise addition.
    InteractionCounts plus(const InteractionCounts& other) const {
        InteractionCounts out = *this;
        for (const auto& [type, count] : other.counts_) out.add(type, count);
        return out;
    }

    // Total-function equality: {view: 0} equals {}.
    bool operator==(const InteractionCounts& other) const {
        for (const auto& [type, count] : counts_)
            if (count != other.get(type)) return false;
        for (const auto& [type, count] : other.counts_)
            if (count != get(type)) return false;
        return true;
    }

private:
    Map counts_;
};

// Test and fixture convenience: make_counts({{"like", 137}, {"comment", 7}}).
inline InteractionCounts make_counts(
    std::initializer_list<std::pair<const char*, std::int64_t>> items) {
    InteractionCounts counts;
    for (const auto& [name, count] : items) counts.set(InteractionType::from_name(name), count);
    return counts;
}

// Mapping from interaction type to its non-negative weight. A type missing
// from the scheme has no weight at all; scoring such a type is an error, not
// an implicit zero.
class WeightScheme {
public:
    WeightScheme() = default;

    static WeightScheme paper_default() {
        WeightScheme s;
        s.set(InteractionType::view(), 0.1);
        s.set(InteractionType::like(), 0.3);
        s.set(InteractionType::comment(), 0.7);
        s.set(InteractionType::share(), 1.0);
        return s;
    }

    void set(const InteractionType& type, double weight) {
        if (!(weight >= 0.0) || !std::isfinite(weight))
            throw ConfigError("weight for '" + type.name() + "' must be finite and non-negative");
        weights_[type] = weight;
    }

    std::optional<double> get(const InteractionType& type) const {
        const auto it = weights_.find(type);
        if (it == weights_.end()) return std::nullopt;
        return it->second;
    }

    const std::map<InteractionType, double>& entries() const { return weights_; }

    bool is_paper_default() const { return *this == paper_default(); }

    bool operator==(const WeightScheme& other) const { return weights_ == other.weights_; }

private:
    std::map<InteractionType, double> weights_;
};

// The computed result for one record: weighted score I, effectiveness E,
// ordinal grade, viral multiplier, and the flag decision. canonical_scheme is
// false when a non-default weight scheme produced the numbers, marking every
// derived grade as computed outside the calibrated bands.
struct Assessment {
    double weighted_score = 0.0;
    double effectiveness = 0.0;
    Grade grade = Grade::F;
    std::uint64_t viral_multiplier = 0;
    bool flagged = false;
    bool canonical_scheme = true;

    bool operator==(const Assessment&) const = default;
};

} // namespace cogmetric
