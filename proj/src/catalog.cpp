#include "libdex/catalog.hpp"

#include <algorithm>
#include <cctype>
#include <set>

#include "libdex/canonical.hpp"

namespace libdex {

namespace {

std::string lower(std::string_view text) {
    std::string out(text);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

const nlohmann::json& require(const nlohmann::json& object, const char* key) {
    if (!object.is_object() || !object.contains(key)) {
        throw Error(ErrorCode::MissingKey, std::string("missing key '") + key + "'", {{"key", key}});
    }
    return object.at(key);
}

}  // namespace

std::string to_string(AttributeId id) {
    return std::to_string(id.value);
}

Rating::Rating(Rational value) : value_(std::move(value)) {
    if (value_ < -2 || value_ > 2) {
        throw Error(ErrorCode::Range, "rating " + to_exact_string(value_) + " outside [-2, +2]",
                    {{"rating", to_exact_string(value_)}});
    }
}

std::string_view rubric_kind_name(RubricKind kind) {
    switch (kind) {
        case RubricKind::DefaultPercentage: return "default_percentage";
        case RubricKind::EnumeratedAnchors: return "enumerated_anchors";
        case RubricKind::GradeScale: return "grade_scale";
    }
    return "default_percentage";
}

RubricKind rubric_kind_from_name(std::string_view name) {
    if (name == "default_percentage") return RubricKind::DefaultPercentage;
    if (name == "enumerated_anchors") return RubricKind::EnumeratedAnchors;
    if (name == "grade_scale") return RubricKind::GradeScale;
    throw Error(ErrorCode::Parse, "unknown rubric kind '" + std::string(name) + "'");
}

RubricSpec RubricSpec::default_percentage() {
    return RubricSpec{RubricKind::DefaultPercentage, {}, true};
}

RubricSpec RubricSpec::grade_scale() {
    return RubricSpec{RubricKind::GradeScale,
                      {{"A", 2}, {"B", 1}, {"C", 0}, {"D", -1}, {"E", -2}},
                      true};
}

RubricSpec RubricSpec::enumerated(std::vector<Anchor> anchors, bool interpolation_allowed) {
    return RubricSpec{RubricKind::EnumeratedAnchors, std::move(anchors), interpolation_allowed};
}

Catalog::Catalog(std::string version, std::vector<AttributeDef> attributes)
    : version_(std::move(version)), attributes_(std::move(attributes)) {
    std::set<AttributeId> attribute_ids;
    std::set<std::string> criterion_ids;
    for (const auto& attribute : attributes_) {
        if (!attribute_ids.insert(attribute.id).second) {
            throw Error(ErrorCode::DuplicateId, "duplicate attribute id " + to_string(attribute.id));
        }
        for (const auto& criterion : attribute.criteria) {
            if (!criterion_ids.insert(criterion.id).second) {
                throw Error(ErrorCode::DuplicateId, "duplicate criterion id '" + criterion.id + "'");
            }
            if (criterion.attribute_id != attribute.id) {
                throw Error(ErrorCode::UnknownAttribute,
                            "criterion '" + criterion.id + "' names attribute " +
                                to_string(criterion.attribute_id) + " but is listed under " +
                                to_string(attribute.id));
            }
            const auto& rubric = criterion.rubric;
            for (const auto& anchor : rubric.anchors) {
                if (anchor.value < -2 || anchor.value > 2) {
                    throw Error(ErrorCode::Range, "anchor '" + anchor.label + "' of criterion '" +
                                                      criterion.id + "' outside [-2, +2]");
                }
            }
            if (rubric.kind == RubricKind::DefaultPercentage && !rubric.anchors.empty()) {
                throw Error(ErrorCode::Parse,
                            "criterion '" + criterion.id + "': default_percentage rubric takes no anchors");
            }
            if (rubric.kind == RubricKind::GradeScale && rubric != RubricSpec::grade_scale()) {
                throw Error(ErrorCode::Parse,
                            "criterion '" + criterion.id + "': grade_scale must map A..E to +2..-2");
            }
            if (rubric.kind == RubricKind::EnumeratedAnchors && rubric.anchors.empty()) {
                throw Error(ErrorCode::Parse,
                            "criterion '" + criterion.id + "': enumerated_anchors rubric needs anchors");
            }
        }
    }
}

const AttributeDef* Catalog::find_attribute(AttributeId id) const {
    auto it = std::find_if(attributes_.begin(), attributes_.end(),
                           [&](const AttributeDef& a) { return a.id == id; });
    return it == attributes_.end() ? nullptr : &*it;
}

const AttributeDef& Catalog::attribute(AttributeId id) const {
    if (const auto* found = find_attribute(id)) {
        return *found;
    }
    throw Error(ErrorCode::UnknownAttribute, "unknown attribute " + to_string(id),
                {{"attribute", id.value}});
}

const CriterionDef* Catalog::find_criterion(std::string_view id) const {
    for (const auto& attribute : attributes_) {
        for (const auto& criterion : attribute.criteria) {
            if (criterion.id == id) {
                return &criterion;
            }
        }
    }
    return nullptr;
}

const CriterionDef& Catalog::criterion(std::string_view id) const {
    if (const auto* found = find_criterion(id)) {
        return *found;
    }
    throw Error(ErrorCode::UnknownCriterion, "unknown criterion '" + std::string(id) + "'",
                {{"criterion", std::string(id)}});
}

AttributeId Catalog::resolve_attribute(std::string_view text) const {
    const bool numeric = !text.empty() && std::all_of(text.begin(), text.end(), [](unsigned char c) {
        return std::isdigit(c);
    });
    if (numeric && text.size() < 6) {
        return attribute(AttributeId{std::stoi(std::string(text))}).id;
    }
    const std::string wanted = lower(text);
    for (const auto& a : attributes_) {
        if (lower(a.name) == wanted) {
            return a.id;
        }
    }
    throw Error(ErrorCode::UnknownAttribute, "unknown attribute '" + std::string(text) + "'",
                {{"attribute", std::string(text)}});
}

std::vector<AttributeId> Catalog::attribute_ids() const {
    std::vector<AttributeId> ids;
    ids.reserve(attributes_.size());
    for (const auto& a : attributes_) {
        ids.push_back(a.id);
    }
    return ids;
}

Rating rate_default_percentage(const Rational& fraction_met) {
    if (fraction_met < 0 || fraction_met > 1) {
        throw Error(ErrorCode::Range,
                    "fraction " + to_exact_string(fraction_met) + " outside [0, 1]",
                    {{"fraction", to_exact_string(fraction_met)}});
    }
    if (fraction_met >= Rational(9, 10)) return Rating(2);
    if (fraction_met >= Rational(3, 4)) return Rating(1);
    if (fraction_met >= Rational(1, 2)) return Rating(0);
    if (fraction_met >= Rational(1, 4)) return Rating(-1);
    return Rating(-2);
}

Rating rate_grade(std::string_view grade) {
    if (grade.size() == 1) {
        const char letter = static_cast<char>(std::toupper(static_cast<unsigned char>(grade[0])));
        if (letter >= 'A' && letter <= 'E') {
            return Rating(2 - (letter - 'A'));
        }
    }
    throw Error(ErrorCode::UnknownGrade, "unknown grade '" + std::string(grade) + "'",
                {{"grade", std::string(grade)}});
}

RatingVerdict validate_rating(const CriterionDef& criterion, const Rational& rating) {
    RatingVerdict verdict;
    if (rating < -2 || rating > 2) {
        verdict.violation = ErrorCode::Range;
        verdict.message = "criterion '" + criterion.id + "': rating " + to_exact_string(rating) +
                          " outside [-2, +2]";
        return verdict;
    }
    const auto& rubric = criterion.rubric;
    switch (rubric.kind) {
        case RubricKind::DefaultPercentage:
            return verdict;
        case RubricKind::GradeScale:
            if (boost::multiprecision::denominator(rating) != 1) {
                verdict.warnings.push_back("criterion '" + criterion.id + "': rating " +
                                           to_exact_string(rating) + " is not a whole grade");
            }
            return verdict;
        case RubricKind::EnumeratedAnchors:
            break;
    }

    std::vector<Rational> values;
    for (const auto& anchor : rubric.anchors) {
        values.push_back(anchor.value);
    }
    std::sort(values.begin(), values.end());
    if (std::find(values.begin(), values.end(), rating) != values.end()) {
        return verdict;
    }
    if (rubric.interpolation_allowed && rating >= values.front() && rating <= values.back()) {
        return verdict;
    }

    auto above = std::upper_bound(values.begin(), values.end(), rating);
    if (above != values.begin()) {
        verdict.nearest_anchors.push_back(*std::prev(above));
    }
    if (above != values.end()) {
        verdict.nearest_anchors.push_back(*above);
    }
    std::string nearest;
    for (const auto& v : verdict.nearest_anchors) {
        nearest += (nearest.empty() ? "" : ", ") + to_exact_string(v);
    }
    if (rubric.interpolation_allowed) {
        verdict.violation = ErrorCode::Range;
        verdict.message = "criterion '" + criterion.id + "': rating " + to_exact_string(rating) +
                          " outside anchor range [" + to_exact_string(values.front()) + ", " +
                          to_exact_string(values.back()) + "]";
    } else {
        verdict.violation = ErrorCode::OffAnchor;
        verdict.message = "criterion '" + criterion.id + "': rating " + to_exact_string(rating) +
                          " is not an anchor (nearest: " + nearest + ")";
    }
    return verdict;
}

nlohmann::json catalog_to_json(const Catalog& catalog) {
    nlohmann::json attributes = nlohmann::json::array();
    for (const auto& a : catalog.attributes()) {
        nlohmann::json criteria = nlohmann::json::array();
        for (const auto& c : a.criteria) {
            nlohmann::json anchors = nlohmann::json::array();
            for (const auto& anchor : c.rubric.anchors) {
                anchors.push_back({{"label", anchor.label}, {"value", rational_to_json(anchor.value)}});
            }
            nlohmann::json criterion = {
                {"id", c.id},
                {"name", c.name},
                {"rubric",
                 {{"kind", rubric_kind_name(c.rubric.kind)},
                  {"anchors", anchors},
                  {"interpolation_allowed", c.rubric.interpolation_allowed}}},
                {"guidance", c.guidance},
            };
            if (!c.reference.is_null()) {
                criterion["reference"] = c.reference;
            }
            criteria.push_back(std::move(criterion));
        }
        attributes.push_back({{"id", a.id.value},
                              {"name", a.name},
                              {"description", a.description},
                              {"criteria", criteria}});
    }
    return {{"version", catalog.version()}, {"attributes", attributes}};
}

Catalog catalog_from_json(const nlohmann::json& document) {
    std::vector<AttributeDef> attributes;
    for (const auto& a : require(document, "attributes")) {
        AttributeDef attribute;
        attribute.id = AttributeId{require(a, "id").get<int>()};
        attribute.name = require(a, "name").get<std::string>();
        attribute.description = a.value("description", "");
        for (const auto& c : a.value("criteria", nlohmann::json::array())) {
            CriterionDef criterion;
            criterion.id = require(c, "id").get<std::string>();
            criterion.name = require(c, "name").get<std::string>();
            criterion.attribute_id = attribute.id;
            criterion.guidance = c.value("guidance", "");
            criterion.reference = c.value("reference", nlohmann::json());
            const auto& rubric = require(c, "rubric");
            criterion.rubric.kind = rubric_kind_from_name(require(rubric, "kind").get<std::string>());
            criterion.rubric.interpolation_allowed = rubric.value("interpolation_allowed", true);
            for (const auto& anchor : rubric.value("anchors", nlohmann::json::array())) {
                criterion.rubric.anchors.push_back(
                    {require(anchor, "label").get<std::string>(), rational_from_json(require(anchor, "value"))});
            }
            attribute.criteria.push_back(std::move(criterion));
        }
        attributes.push_back(std::move(attribute));
    }
    return Catalog(require(document, "version").get<std::string>(), std::move(attributes));
}

std::string export_catalog(const Catalog& catalog) {
    return canonical_dump(catalog_to_json(catalog));
}

}  // namespace libdex
