#include <catch2/catch_amalgamated.hpp>

#include <atomic>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <thread>
#include <vector>

#include "cogmetric/metric.hpp"
#include "cogmetric/types.hpp"

#include "reference_oracle.hpp"

using namespace cogmetric;

namespace {

const WeightScheme kDefault = WeightScheme::paper_default();

InteractionCounts random_counts(std::mt19937_64& rng, std::int64_t max_count = 1'000'000) {
    std::uniform_int_distribution<std::int64_t> dist(0, max_count);
    return make_counts({{"view", dist(rng)},
                        {"like", dist(rng)},
                        {"comment", dist(rng)},
                        {"share", dist(rng)}});
}

oracle::Post to_oracle_post(const InteractionCounts& counts) {
    return {{"views", counts.get(InteractionType::view())},
            {"likes", counts.get(InteractionType::like())},
            {"comments", counts.get(InteractionType::comment())},
            {"shares", counts.get(InteractionType::share())}};
}

// Log-uniform effectiveness samples spanning every grade band.
double random_effectiveness(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> exponent(-2.0, 6.0);
    return std::pow(10.0, exponent(rng));
}

} // namespace

TEST_CASE("interaction types") {
    CHECK(InteractionType::view().name() == "view");
    CHECK(InteractionType::from_name("share") == InteractionType::share());
    CHECK(InteractionType::from_name("view").is_canonical());
    CHECK_FALSE(InteractionType::from_name("plays").is_canonical());

    CHECK_THROWS_AS(InteractionType::custom("view"), ConfigError);
    CHECK_THROWS_AS(InteractionType::custom(""), ConfigError);

    // Canonical rank order first, custom names after.
    CHECK(InteractionType::view() < InteractionType::like());
    CHECK(InteractionType::like() < InteractionType::comment());
    CHECK(InteractionType::comment() < InteractionType::share());
    CHECK(InteractionType::share() < InteractionType::custom("aaa"));
}

TEST_CASE("interaction counts behave as a total function") {
    InteractionCounts counts;
    CHECK(counts.get(InteractionType::view()) == 0);
    counts.set(InteractionType::like(), 5);
    CHECK(counts.get(InteractionType::like()) == 5);
    CHECK_THROWS_AS(counts.set(InteractionType::like(), -1), InvalidCountError);
    CHECK_THROWS_AS(counts.add(InteractionType::like(), -2), InvalidCountError);

    InteractionCounts zero_entry;
    zero_entry.set(InteractionType::view(), 0);
    CHECK(zero_entry == InteractionCounts{});

    InteractionCounts big;
    big.set(InteractionType::share(), std::numeric_limits<std::int64_t>::max());
    CHECK_THROWS_AS(big.add(InteractionType::share(), 1), InvalidCountError);

    const auto a = make_counts({{"like", 2}, {"view", 7}});
    const auto b = make_counts({{"like", 3}, {"comment", 1}});
    CHECK(a.plus(b) == make_counts({{"like", 5}, {"view", 7}, {"comment", 1}}));
}

TEST_CASE("weight scheme validation and defaults") {
    CHECK(kDefault.is_paper_default());
    CHECK(kDefault.get(InteractionType::view()) == 0.1);
    CHECK(kDefault.get(InteractionType::like()) == 0.3);
    CHECK(kDefault.get(InteractionType::comment()) == 0.7);
    CHECK(kDefault.get(InteractionType::share()) == 1.0);

    WeightScheme scheme = WeightScheme::paper_default();
    scheme.set(InteractionType::share(), 2.0);
    CHECK_FALSE(scheme.is_paper_default());

    WeightScheme extended = WeightScheme::paper_default();
    extended.set(InteractionType::custom("plays"), 0.05);
    CHECK_FALSE(extended.is_paper_default());

    CHECK_THROWS_AS(scheme.set(InteractionType::view(), -0.1), ConfigError);
    CHECK_THROWS_AS(scheme.set(InteractionType::view(), std::nan("")), ConfigError);
    CHECK_THROWS_AS(scheme.set(InteractionType::view(),
                               std::numeric_limits<double>::infinity()),
                    ConfigError);
}

TEST_CASE("weighted interaction score") {
    CHECK(compute_weighted_score(make_counts({{"view", 0}, {"like", 0}, {"comment", 0},
                                              {"share", 0}}),
                                 kDefault) == 0.0);
    CHECK(compute_weighted_score(make_counts({{"like", 37908}, {"comment", 650}}), kDefault) ==
          11827.4);
    CHECK(compute_weighted_score(make_counts({{"like", 137}, {"comment", 7}, {"share", 6}}),
                                 kDefault) == 52.0);

    // Cross-checked against the reference implementation.
    const auto posts = oracle::posts_data();
    CHECK(oracle::calculate_engagement_effectiveness(posts[0].post) == 605.0);
    CHECK(compute_weighted_score(make_counts({{"view", 5000},
                                              {"like", 200},
                                              {"comment", 50},
                                              {"share", 10}}),
                                 kDefault) == 605.0);

    SECTION("a counted type without a weight is an error, even at count zero") {
        InteractionCounts counts;
        counts.set(InteractionType::custom("plays"), 10);
        CHECK_THROWS_AS(compute_weighted_score(counts, kDefault), UnknownInteractionTypeError);
        InteractionCounts zero;
        zero.set(InteractionType::custom("plays"), 0);
        CHECK_THROWS_AS(compute_weighted_score(zero, kDefault), UnknownInteractionTypeError);
        try {
            compute_weighted_score(counts, kDefault);
            FAIL("expected UnknownInteractionTypeError");
        } catch (const UnknownInteractionTypeError& e) {
            CHECK(e.type_name() == "plays");
        }
    }

    SECTION("custom types score once a weight exists") {
        WeightScheme scheme = WeightScheme::paper_default();
        scheme.set(InteractionType::custom("plays"), 0.05);
        InteractionCounts counts = make_counts({{"like", 10}});
        counts.set(InteractionType::custom("plays"), 100);
        CHECK(compute_weighted_score(counts, scheme) == 8.0);
    }
}

TEST_CASE("effectiveness ratio") {
    CHECK(compute_effectiveness(11827.4, 1) == 11827.4);
    CHECK(compute_effectiveness(0.0, 5) == 0.0);
    CHECK_THROWS_AS(compute_effectiveness(1.0, 0), ZeroTransmissionsError);
    CHECK_THROWS_AS(compute_effectiveness(1.0, -3), ZeroTransmissionsError);

    // 8,660,409.7 / 106 by exact long division is 81701.978301886792...
    const double e = compute_effectiveness(8660409.7, 106);
    CHECK_THAT(e, Catch::Matchers::WithinRel(81701.97830188679245283, 1e-6));
}

TEST_CASE("grade assignment") {
    CHECK(assign_grade(52.0) == Grade::C);
    CHECK(assign_grade(11827.4) == Grade::APlus);
    CHECK(assign_grade(0.0) == Grade::F);
    CHECK(assign_grade(4.0) == Grade::D);
    CHECK(assign_grade(3.9999) == Grade::E);

    SECTION("half-open band boundaries") {
        CHECK(assign_grade(std::nextafter(3.0, 0.0)) == Grade::F);
        CHECK(assign_grade(3.0) == Grade::E);
        CHECK(assign_grade(std::nextafter(4.0, 0.0)) == Grade::E);
        CHECK(assign_grade(10.0) == Grade::C);
        CHECK(assign_grade(100.0) == Grade::B);
        CHECK(assign_grade(1000.0) == Grade::A);
        CHECK(assign_grade(std::nextafter(10000.0, 0.0)) == Grade::A);
        CHECK(assign_grade(10000.0) == Grade::APlus);
    }

    SECTION("invalid inputs") {
        CHECK_THROWS_AS(assign_grade(-0.001), InvalidEffectivenessError);
        CHECK_THROWS_AS(assign_grade(std::nan("")), InvalidEffectivenessError);
        CHECK_THROWS_AS(assign_grade(std::numeric_limits<double>::infinity()),
                        InvalidEffectivenessError);
    }

    SECTION("names and descriptions") {
        CHECK(grade_name(Grade::APlus) == "A+");
        CHECK(grade_description(Grade::APlus) == "Viral");
        CHECK(grade_description(Grade::F) == "Failure");
        CHECK(parse_grade("A+") == Grade::APlus);
        CHECK_FALSE(parse_grade("Z").has_value());
    }
}

TEST_CASE("viral multiplier") {
    CHECK(viral_multiplier(11827.4) == 1);
    CHECK(viral_multiplier(81701.98) == 8);
    CHECK(viral_multiplier(9999.99) == 0);
    CHECK(viral_multiplier(0.0) == 0);
    CHECK(viral_multiplier(20000.0) == 2);
    CHECK_THROWS_AS(viral_multiplier(-1.0), InvalidEffectivenessError);
    CHECK_THROWS_AS(viral_multiplier(std::numeric_limits<double>::quiet_NaN()),
                    InvalidEffectivenessError);
}

TEST_CASE("assess composes the metric") {
    const Assessment a = assess(make_counts({{"view", 100000},
                                             {"like", 3000},
                                             {"comment", 400},
                                             {"share", 200}}),
                                1, kDefault);
    CHECK(a.weighted_score == 11380.0);
    CHECK(a.effectiveness == 11380.0);
    CHECK(a.grade == Grade::APlus);
    CHECK(a.viral_multiplier == 1);
    CHECK(a.flagged);
    CHECK(a.canonical_scheme);

    const Assessment b =
        assess(make_counts({{"view", 100}, {"like", 10}, {"comment", 2}, {"share", 1}}), 1,
               kDefault);
    CHECK(b.weighted_score == 15.4);
    CHECK(b.grade == Grade::C);
    CHECK_FALSE(b.flagged);

    const Assessment zero = assess(InteractionCounts{}, 1, kDefault);
    CHECK(zero.effectiveness == 0.0);
    CHECK(zero.grade == Grade::F);
    CHECK(zero.viral_multiplier == 0);
    CHECK_FALSE(zero.flagged);

    WeightScheme tweaked = WeightScheme::paper_default();
    tweaked.set(InteractionType::share(), 2.0);
    CHECK_FALSE(assess(make_counts({{"share", 1}}), 1, tweaked).canonical_scheme);
}

TEST_CASE("property: linearity of the weighted score") {
    std::mt19937_64 rng(0x11bd01);
    for (int i = 0; i < 500; ++i) {
        const auto a = random_counts(rng);
        const auto b = random_counts(rng);
        const double sum = compute_weighted_score(a.plus(b), kDefault);
        const double parts = compute_weighted_score(a, kDefault) +
                             compute_weighted_score(b, kDefault);
        CHECK_THAT(sum, Catch::Matchers::WithinRel(parts, 1e-12));
    }
}

TEST_CASE("property: monotonicity in every count") {
    std::mt19937_64 rng(0x11bd02);
    const std::vector<InteractionType> types = {InteractionType::view(), InteractionType::like(),
                                                InteractionType::comment(),
                                                InteractionType::share()};
    std::uniform_int_distribution<std::size_t> pick(0, types.size() - 1);
    std::uniform_int_distribution<std::int64_t> bump(1, 10'000);
    std::uniform_int_distribution<std::int64_t> trans(1, 50);
    for (int i = 0; i < 500; ++i) {
        const auto base = random_counts(rng);
        const std::int64_t t = trans(rng);
        auto grown = base;
        grown.add(types[pick(rng)], bump(rng));

        const Assessment before = assess(base, t, kDefault);
        const Assessment after = assess(grown, t, kDefault);
        CHECK(after.weighted_score >= before.weighted_score);
        CHECK(after.effectiveness >= before.effectiveness);
        CHECK(grade_rank(after.grade) >= grade_rank(before.grade));
        CHECK(after.viral_multiplier >= before.viral_multiplier);
    }
}

TEST_CASE("property: effectiveness scale law") {
    std::mt19937_64 rng(0x11bd03);
    std::uniform_real_distribution<double> score(0.0, 1e9);
    std::uniform_int_distribution<std::int64_t> trans(1, 1000);
    std::uniform_int_distribution<std::int64_t> factor(1, 64);
    for (int i = 0; i < 1000; ++i) {
        const double weighted = score(rng);
        const std::int64_t t = trans(rng);
        const std::int64_t k = factor(rng);
        const double scaled = compute_effectiveness(weighted, k * t);
        const double reference = compute_effectiveness(weighted, t) / static_cast<double>(k);
        CHECK_THAT(scaled, Catch::Matchers::WithinRel(reference, 1e-12));
    }
}

TEST_CASE("property: the seven grade bands partition [0, inf)") {
    const auto band_matches = [](double e) {
        int matches = 0;
        if (e >= 10000.0) ++matches;
        if (e >= 1000.0 && e < 10000.0) ++matches;
        if (e >= 100.0 && e < 1000.0) ++matches;
        if (e >= 10.0 && e < 100.0) ++matches;
        if (e >= 4.0 && e < 10.0) ++matches;
        if (e >= 3.0 && e < 4.0) ++matches;
        if (e >= 0.0 && e < 3.0) ++matches;
        return matches;
    };

    std::mt19937_64 rng(0x11bd04);
    for (int i = 0; i < 10'000; ++i) {
        const double e = random_effectiveness(rng);
        CHECK(band_matches(e) == 1);
        CHECK_NOTHROW(assign_grade(e));
    }
    for (const double boundary : {0.0, 3.0, 4.0, 10.0, 100.0, 1000.0, 10000.0}) {
        CHECK(band_matches(boundary) == 1);
        CHECK(band_matches(std::nextafter(boundary, 1e300)) == 1);
        if (boundary > 0.0) CHECK(band_matches(std::nextafter(boundary, 0.0)) == 1);
    }
}

TEST_CASE("property: flag, grade, and threshold are equivalent") {
    std::mt19937_64 rng(0x11bd05);
    for (int i = 0; i < 2000; ++i) {
        const auto counts = random_counts(rng);
        const Assessment a = assess(counts, 1, kDefault);
        const bool in_flag_grades = a.grade == Grade::A || a.grade == Grade::APlus;
        CHECK(a.flagged == in_flag_grades);
        CHECK(a.flagged == (a.effectiveness >= 1000.0));
    }
}

TEST_CASE("property: viral floor semantics") {
    std::mt19937_64 rng(0x11bd06);
    for (int i = 0; i < 2000; ++i) {
        const double e = random_effectiveness(rng);
        CHECK((viral_multiplier(e) >= 1) == (assign_grade(e) == Grade::APlus));
    }
    CHECK((viral_multiplier(10000.0) >= 1) == (assign_grade(10000.0) == Grade::APlus));
    const double below = std::nextafter(10000.0, 0.0);
    CHECK((viral_multiplier(below) >= 1) == (assign_grade(below) == Grade::APlus));
}

TEST_CASE("assess is safe to call from many threads") {
    const auto counts = make_counts({{"view", 5000}, {"like", 200}, {"comment", 50}, {"share", 10}});
    std::vector<std::thread> workers;
    std::atomic<int> mismatches{0};
    for (int w = 0; w < 8; ++w) {
        workers.emplace_back([&] {
            for (int i = 0; i < 5000; ++i) {
                const Assessment a = assess(counts, 1, kDefault);
                if (a.weighted_score != 605.0 || a.grade != Grade::B) mismatches.fetch_add(1);
            }
        });
    }
    for (auto& worker : workers) worker.join();
    CHECK(mismatches.load() == 0);
}

TEST_CASE("property: assess matches the reference implementation bit-for-bit") {
    std::mt19937_64 rng(0x11bd07);
    for (int i = 0; i < 1000; ++i) {
        const auto counts = random_counts(rng, 1'000'000);
        const Assessment ours = assess(counts, 1, kDefault);

        const double oracle_e = oracle::calculate_engagement_effectiveness(to_oracle_post(counts));
        const auto [oracle_grade, oracle_flag] = oracle::assign_grade(oracle_e);

        REQUIRE(ours.effectiveness == oracle_e);
        REQUIRE(std::string(grade_name(ours.grade)) == oracle_grade);
        REQUIRE(ours.flagged == oracle_flag);
    }
}
