#pragma once

#include <cmath>
#include <cstdint>
#include <limits>

#include "cogmetric/errors.hpp"
#include "cogmetric/types.hpp"

namespace cogmetric {

// Weighted interaction score: sum over all counted types of weight * count.
// Throws UnknownInteractionTypeError when a counted type has no weight in the
// scheme. Summation runs in canonical type order (view, like, comment, share,
// then custom types by name).
inline double compute_weighted_score(const InteractionCounts& counts, const WeightScheme& scheme) {
    double total = 0.0;
    for (const auto& [type, count] : counts.entries()) {
        const auto weight = scheme.get(type);
        if (!weight) throw UnknownInteractionTypeError(type.name());
        total += *weight * static_cast<double>(count);
    }
    return total;
}

// Engagement effectiveness: weighted score divided by the transmission count.
inline double compute_effectiveness(double weighted_score, std::int64_t transmissions) {
    if (transmissions < 1) throw ZeroTransmissionsError();
    return weighted_score / static_cast<double>(transmissions);
}

namespace detail {

inline void require_valid_effectiveness(double effectiveness) {
    if (!(effectiveness >= 0.0) || !std::isfinite(effectiveness))
        throw InvalidEffectivenessError();
}

} // namespace detail

// First matching descending threshold wins. The half-open bands are
// A+ [10000, inf), A [1000, 10000), B [100, 1000), C [10, 100), D [4, 10),
// E [3, 4), F [0, 3).
inline Grade assign_grade(double effectiveness) {
    detail::require_valid_effectiveness(effectiveness);
    if (effectiveness >= 10000.0) return Grade::APlus;
    if (effectiveness >= 1000.0) return Grade::A;
    if (effectiveness >= 100.0) return Grade::B;
    if (effectiveness >= 10.0) return Grade::C;
    if (effectiveness >= 4.0) return Grade::D;
    if (effectiveness >= 3.0) return Grade::E;
    return Grade::F;
}

// Completed multiples of 10,000: floor(E / 10000). Zero means not viral;
// the multiplier is >= 1 exactly when the grade is A+.
inline std::uint64_t viral_multiplier(double effectiveness) {
    detail::require_valid_effectiveness(effectiveness);
    const double multiples = std::floor(effectiveness / 10000.0);
    if (multiples >= static_cast<double>(std::numeric_limits<std::uint64_t>::max()))
        return std::numeric_limits<std::uint64_t>::max();
    return static_cast<std::uint64_t>(multiples);
}

// Full per-record computation. flagged is true exactly for grades A and A+.
inline Assessment assess(const InteractionCounts& counts, std::int64_t transmissions,
                         const WeightScheme& scheme) {
    Assessment a;
    a.weighted_score = compute_weighted_score(counts, scheme);
    a.effectiveness = compute_effectiveness(a.weighted_score, transmissions);
    a.grade = assign_grade(a.effectiveness);
    a.viral_multiplier = viral_multiplier(a.effectiveness);
    a.flagged = grade_flags(a.grade);
    a.canonical_scheme = scheme.is_paper_default();
    return a;
}

} // namespace cogmetric
