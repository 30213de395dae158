#pragma once

#include <compare>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "libdex/error.hpp"
#include "libdex/rational.hpp"

namespace libdex {

struct AttributeId {
    int value = 0;
    auto operator<=>(const AttributeId&) const = default;
};

std::string to_string(AttributeId id);

/// A rating b_ij on the normalized scale [-2, +2].
class Rating {
public:
    /// Throws Error(Range) outside [-2, +2].
    explicit Rating(Rational value);
    Rating(int value) : Rating(Rational(value)) {}

    const Rational& value() const noexcept { return value_; }
    bool operator==(const Rating&) const = default;

private:
    Rational value_;
};

enum class RubricKind { DefaultPercentage, EnumeratedAnchors, GradeScale };

std::string_view rubric_kind_name(RubricKind kind);
RubricKind rubric_kind_from_name(std::string_view name);

struct Anchor {
    std::string label;
    Rational value;
    bool operator==(const Anchor&) const = default;
};

struct RubricSpec {
    RubricKind kind = RubricKind::DefaultPercentage;
    std::vector<Anchor> anchors;
    bool interpolation_allowed = true;

    static RubricSpec default_percentage();
    static RubricSpec grade_scale();
    static RubricSpec enumerated(std::vector<Anchor> anchors, bool interpolation_allowed = true);

    bool operator==(const RubricSpec&) const = default;
};

struct CriterionDef {
    std::string id;
    std::string name;
    AttributeId attribute_id;
    RubricSpec rubric;
    std::string guidance;
    /// Criterion-specific reference data (e.g. a popularity baseline); null when absent.
    nlohmann::json reference;

    bool operator==(const CriterionDef&) const = default;
};

struct AttributeDef {
    AttributeId id;
    std::string name;
    std::string description;
    std::vector<CriterionDef> criteria;

    bool operator==(const AttributeDef&) const = default;
};

/// Immutable attribute/criterion rubric. Construction validates id uniqueness
/// and criterion ownership; safe to share across threads afterwards.
class Catalog {
public:
    Catalog(std::string version, std::vector<AttributeDef> attributes);

    const std::string& version() const noexcept { return version_; }
    std::span<const AttributeDef> attributes() const noexcept { return attributes_; }
    std::size_t size() const noexcept { return attributes_.size(); }

    const AttributeDef* find_attribute(AttributeId id) const;
    const AttributeDef& attribute(AttributeId id) const;
    const CriterionDef* find_criterion(std::string_view id) const;
    const CriterionDef& criterion(std::string_view id) const;

    /// Resolves "13", "Performance Impact" or "performance impact".
    AttributeId resolve_attribute(std::string_view text) const;

    std::vector<AttributeId> attribute_ids() const;

private:
    std::string version_;
    std::vector<AttributeDef> attributes_;
};

/// The 15-attribute rubric for cryptography libraries, with every evaluation criterion attached.
const Catalog& builtin_catalog();

/// >= 90% -> +2, >= 75% -> +1, >= 50% -> 0, >= 25% -> -1, else -2.
Rating rate_default_percentage(const Rational& fraction_met);

/// A..E (case-insensitive) -> +2..-2.
Rating rate_grade(std::string_view grade);

struct RatingVerdict {
    std::optional<ErrorCode> violation;
    std::string message;
    /// Nearest anchors below/above an off-anchor value.
    std::vector<Rational> nearest_anchors;
    std::vector<std::string> warnings;

    bool ok() const noexcept { return !violation.has_value(); }
};

RatingVerdict validate_rating(const CriterionDef& criterion, const Rational& rating);

nlohmann::json catalog_to_json(const Catalog& catalog);
Catalog catalog_from_json(const nlohmann::json& document);

/// Canonical catalog.json text: sorted keys, two-space indent, trailing LF.
std::string export_catalog(const Catalog& catalog);

}  // namespace libdex
