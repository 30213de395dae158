#include "libdex/weighting.hpp"

namespace libdex {

namespace {

template <typename T>
std::map<AttributeId, T> by_attribute(std::initializer_list<T> values) {
    std::map<AttributeId, T> out;
    int id = 1;
    for (const auto& v : values) {
        out.emplace(AttributeId{id++}, v);
    }
    return out;
}

RankVector ranks_from_halves(std::initializer_list<int> doubled) {
    RankVector out;
    int id = 1;
    for (int v : doubled) {
        out.ranks.emplace(AttributeId{id++}, Rational(v, 2));
    }
    return out;
}

}  // namespace

// Attribute order: Ease of Use, Scalability, Testability, Extendability, Functional Completeness,
// Data Types, Code Quality, Cost, Requirements, Complexity, Maintained, Spread,
// Performance Impact, Security, Documentation.

std::vector<EvidenceSource> builtin_reference_evidence() {
    EvidenceSource literature{
        "literature",
        by_attribute<long long>({33, 2, 9, 3, 4, 4, 4, 0, 0, 8, 0, 0, 2, 1, 4}),
        ranks_from_halves({30, 13, 28, 16, 21, 21, 21, 5, 5, 26, 5, 5, 13, 10, 21}),
    };
    // Performance Impact is published as "2,5 (6)"; 0 mentions is the count consistent with rank 2.5.
    EvidenceSource interviews{
        "interviews",
        by_attribute<long long>({10, 4, 1, 0, 0, 0, 5, 11, 4, 3, 8, 26, 0, 4, 19}),
        ranks_from_halves({24, 16, 10, 5, 5, 5, 20, 26, 16, 12, 22, 30, 5, 16, 28}),
    };
    // Data Types is published as 7, but the published average (7.67) and total rank (4) both require 10.
    RankVector questionnaire;
    int id = 1;
    for (int r : {15, 9, 11, 10, 12, 10, 10, 10, 8, 9, 13, 6, 11, 15, 14}) {
        questionnaire.ranks.emplace(AttributeId{id++}, Rational(r));
    }
    return {std::move(literature), std::move(interviews), EvidenceSource{"questionnaire", questionnaire, {}}};
}

WeightVector expected_reference_weights() {
    WeightVector out;
    int id = 1;
    for (int quarters : {6, 3, 5, 2, 4, 3, 6, 4, 2, 5, 4, 3, 2, 5, 6}) {
        out.weights.emplace(AttributeId{id++}, Rational(quarters, 4));
    }
    return out;
}

const Derivation& reference_derivation() {
    static const Derivation derivation = [] {
        auto d = derive_reference_weights(builtin_reference_evidence());
        if (d.weights != expected_reference_weights()) {
            throw Error(ErrorCode::Internal, "derived reference weights differ from the published vector");
        }
        return d;
    }();
    return derivation;
}

}  // namespace libdex
