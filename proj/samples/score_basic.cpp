// Minimal library walkthrough: score one capture and print the result.

#include <iostream>

#include "cogmetric/cogmetric.hpp"

int main() {
    using namespace cogmetric;

    const InteractionCounts counts =
        make_counts({{"like", 137}, {"comment", 7}, {"share", 6}});
    const Assessment a = assess(counts, /*transmissions=*/1, WeightScheme::paper_default());

    std::cout << "I = " << a.weighted_score << ", E = " << a.effectiveness << ", grade "
              << grade_name(a.grade) << " (" << grade_description(a.grade) << ")"
              << (a.flagged ? ", flagged for review" : "") << "\n";
    return 0;
}
