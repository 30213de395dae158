#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "libdex/catalog.hpp"
#include "libdex/weighting.hpp"

namespace libdex {

struct Assessment {
    std::string criterion_id;
    Rating rating{0};
    std::string note;
    std::string assessor;
    std::string assessed_at;

    bool operator==(const Assessment&) const = default;
};

struct LibraryInfo {
    std::string name;
    std::string version;
    std::string language;
    std::string source_url;

    bool operator==(const LibraryInfo&) const = default;
};

struct LibraryProfile {
    LibraryInfo library;
    std::string catalog_version;
    std::vector<Assessment> assessments;

    /// Store key derived from the library name: lower-case, non-alphanumerics collapsed to '-'.
    std::string id() const;
    const Assessment* find(std::string_view criterion_id) const;

    bool operator==(const LibraryProfile&) const = default;
};

std::string slugify(std::string_view name);

/// Checks catalog version, criterion ids, duplicates, rating rubrics and evidence notes.
/// Throws on the first violation; non-fatal findings go to `warnings` when provided.
void validate_profile(const Catalog& catalog, const LibraryProfile& profile,
                      std::vector<std::string>* warnings = nullptr);

/// Mean over the attribute's rated criteria; nullopt when none are rated.
std::optional<Rational> attribute_score(const Catalog& catalog, const LibraryProfile& profile, AttributeId id);

struct CriterionRating {
    std::string criterion_id;
    Rational rating;
};

struct AttributeRow {
    AttributeId attribute_id;
    std::string name;
    std::vector<CriterionRating> ratings;
    std::size_t assessed_count = 0;  // m_i
    std::optional<Rational> mean;
    Rational weight;
    Rational contribution;

    bool assessed() const noexcept { return mean.has_value(); }
};

struct IndexReport {
    LibraryInfo library;
    std::string library_id;
    std::string catalog_version;
    std::vector<AttributeRow> rows;
    Rational total;
    Rational achievable_min;
    Rational achievable_max;
    WeightVector weights_used;

    const AttributeRow& row(AttributeId id) const;
};

struct ScoringOptions {
    /// Off only for what-if analysis and scaling experiments; the weight/catalog key match is always enforced.
    bool enforce_weight_sum = true;
};

IndexReport compute_index(const Catalog& catalog, const LibraryProfile& profile, const WeightVector& weights,
                          ScoringOptions options = {});

/// (-max, max) with max = sum over assessed attributes of 2 * g_i.
std::pair<Rational, Rational> achievable_bounds(const Catalog& catalog, const LibraryProfile& profile,
                                                const WeightVector& weights);

/// Descending by total; exact ties broken by library name ascending.
std::vector<IndexReport> rank_libraries(const Catalog& catalog, const std::vector<LibraryProfile>& profiles,
                                        const WeightVector& weights);

struct CrossoverPoint {
    Rational g_value;
    std::string leader_before;
    std::string leader_after;
};

struct SensitivityResult {
    std::string library_a;
    std::string library_b;
    AttributeId attribute_id;
    Rational lo;
    Rational hi;
    /// total_a - total_b with the varied weight set to 0.
    Rational delta_at_zero;
    /// d(total_a - total_b)/dg = mean_a - mean_b (unassessed counts as 0).
    Rational slope;
    std::vector<CrossoverPoint> crossovers;
    /// The sweep varies one weight with the others fixed, so the sum is not held at n.
    bool sum_constraint_relaxed = true;
};

SensitivityResult weight_sensitivity(const Catalog& catalog, const LibraryProfile& a, const LibraryProfile& b,
                                     const WeightVector& weights, AttributeId attribute, const Rational& lo,
                                     const Rational& hi);

}  // namespace libdex
