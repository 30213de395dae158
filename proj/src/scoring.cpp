#include "libdex/scoring.hpp"

#include <algorithm>
#include <cctype>
#include <set>

namespace libdex {

std::string slugify(std::string_view name) {
    std::string out;
    bool dash = false;
    for (unsigned char c : name) {
        if (std::isalnum(c)) {
            if (dash && !out.empty()) {
                out += '-';
            }
            dash = false;
            out += static_cast<char>(std::tolower(c));
        } else {
            dash = true;
        }
    }
    return out;
}

std::string LibraryProfile::id() const {
    return slugify(library.name);
}

const Assessment* LibraryProfile::find(std::string_view criterion_id) const {
    for (const auto& a : assessments) {
        if (a.criterion_id == criterion_id) {
            return &a;
        }
    }
    return nullptr;
}

void validate_profile(const Catalog& catalog, const LibraryProfile& profile, std::vector<std::string>* warnings) {
    if (profile.catalog_version != catalog.version()) {
        throw Error(ErrorCode::CatalogVersion,
                    "profile '" + profile.library.name + "' targets catalog version '" + profile.catalog_version +
                        "', loaded catalog is '" + catalog.version() + "'",
                    {{"expected", catalog.version()}, {"found", profile.catalog_version}});
    }
    if (slugify(profile.library.name).empty()) {
        throw Error(ErrorCode::MissingKey, "profile has no usable library name", {{"key", "library.name"}});
    }
    std::set<std::string> seen;
    for (const auto& a : profile.assessments) {
        const auto& criterion = catalog.criterion(a.criterion_id);
        if (!seen.insert(a.criterion_id).second) {
            throw Error(ErrorCode::DuplicateCriterion, "criterion '" + a.criterion_id + "' assessed more than once",
                        {{"criterion", a.criterion_id}});
        }
        const auto verdict = validate_rating(criterion, a.rating.value());
        if (!verdict.ok()) {
            nlohmann::json nearest = nlohmann::json::array();
            for (const auto& v : verdict.nearest_anchors) {
                nearest.push_back(rational_to_json(v));
            }
            throw Error(*verdict.violation, verdict.message,
                        {{"criterion", a.criterion_id},
                         {"rating", to_exact_string(a.rating.value())},
                         {"nearest_anchors", nearest}});
        }
        if (a.note.empty()) {
            if (abs(a.rating.value()) == 2) {
                throw Error(ErrorCode::MissingNote,
                            "criterion '" + a.criterion_id + "': a rating of " + to_exact_string(a.rating.value()) +
                                " needs an evidence note",
                            {{"criterion", a.criterion_id}});
            }
            if (warnings) {
                warnings->push_back("criterion '" + a.criterion_id + "' has no evidence note");
            }
        }
        if (warnings) {
            warnings->insert(warnings->end(), verdict.warnings.begin(), verdict.warnings.end());
        }
    }
}

std::optional<Rational> attribute_score(const Catalog& catalog, const LibraryProfile& profile, AttributeId id) {
    const auto& attribute = catalog.attribute(id);
    Rational sum = 0;
    long long count = 0;
    for (const auto& criterion : attribute.criteria) {
        if (const auto* a = profile.find(criterion.id)) {
            sum += a->rating.value();
            ++count;
        }
    }
    if (count == 0) {
        return std::nullopt;
    }
    return Rational(sum / count);
}

const AttributeRow& IndexReport::row(AttributeId id) const {
    for (const auto& r : rows) {
        if (r.attribute_id == id) {
            return r;
        }
    }
    throw Error(ErrorCode::UnknownAttribute, "report has no row for attribute " + to_string(id));
}

IndexReport compute_index(const Catalog& catalog, const LibraryProfile& profile, const WeightVector& weights,
                          ScoringOptions options) {
    validate_profile(catalog, profile);
    if (options.enforce_weight_sum) {
        require_valid_weights(weights, catalog);
    } else {
        require_valid_weights(weights, catalog, Rational(static_cast<long long>(1) << 62));
    }

    IndexReport report;
    report.library = profile.library;
    report.library_id = profile.id();
    report.catalog_version = catalog.version();
    report.weights_used = weights;
    report.total = 0;
    Rational max = 0;
    for (const auto& attribute : catalog.attributes()) {
        AttributeRow row;
        row.attribute_id = attribute.id;
        row.name = attribute.name;
        row.weight = weights.at(attribute.id);
        Rational sum = 0;
        for (const auto& criterion : attribute.criteria) {
            if (const auto* a = profile.find(criterion.id)) {
                row.ratings.push_back({criterion.id, a->rating.value()});
                sum += a->rating.value();
            }
        }
        row.assessed_count = row.ratings.size();
        row.contribution = 0;
        if (row.assessed_count > 0) {
            row.mean = sum / static_cast<long long>(row.assessed_count);
            row.contribution = *row.mean * row.weight;
            report.total += row.contribution;
            max += 2 * row.weight;
        }
        report.rows.push_back(std::move(row));
    }
    report.achievable_max = max;
    report.achievable_min = -max;
    return report;
}

std::pair<Rational, Rational> achievable_bounds(const Catalog& catalog, const LibraryProfile& profile,
                                                const WeightVector& weights) {
    const auto report = compute_index(catalog, profile, weights);
    return {report.achievable_min, report.achievable_max};
}

std::vector<IndexReport> rank_libraries(const Catalog& catalog, const std::vector<LibraryProfile>& profiles,
                                        const WeightVector& weights) {
    if (profiles.empty()) {
        throw Error(ErrorCode::EmptyInput, "no profiles to rank");
    }
    for (const auto& p : profiles) {
        if (p.catalog_version != profiles.front().catalog_version) {
            throw Error(ErrorCode::MixedCatalog, "profiles reference different catalog versions",
                        {{"first", profiles.front().catalog_version}, {"other", p.catalog_version}});
        }
    }
    std::vector<IndexReport> reports;
    reports.reserve(profiles.size());
    for (const auto& p : profiles) {
        reports.push_back(compute_index(catalog, p, weights));
    }
    std::sort(reports.begin(), reports.end(), [](const IndexReport& a, const IndexReport& b) {
        if (a.total != b.total) {
            return a.total > b.total;
        }
        if (a.library.name != b.library.name) {
            return a.library.name < b.library.name;
        }
        return a.library.version < b.library.version;
    });
    return reports;
}

SensitivityResult weight_sensitivity(const Catalog& catalog, const LibraryProfile& a, const LibraryProfile& b,
                                     const WeightVector& weights, AttributeId attribute, const Rational& lo,
                                     const Rational& hi) {
    if (lo > hi) {
        throw Error(ErrorCode::BadRange, "degenerate range: lo " + to_exact_string(lo) + " > hi " + to_exact_string(hi),
                    {{"lo", to_exact_string(lo)}, {"hi", to_exact_string(hi)}});
    }
    if (lo < 0) {
        throw Error(ErrorCode::BadRange, "weight range must start at or above 0", {{"lo", to_exact_string(lo)}});
    }
    catalog.attribute(attribute);

    WeightVector zeroed = weights;
    zeroed.weights[attribute] = 0;
    const ScoringOptions relaxed{false};
    const auto report_a = compute_index(catalog, a, zeroed, relaxed);
    const auto report_b = compute_index(catalog, b, zeroed, relaxed);

    SensitivityResult result;
    result.library_a = a.library.name;
    result.library_b = b.library.name;
    result.attribute_id = attribute;
    result.lo = lo;
    result.hi = hi;
    result.delta_at_zero = report_a.total - report_b.total;
    const Rational mean_a = report_a.row(attribute).mean.value_or(Rational(0));
    const Rational mean_b = report_b.row(attribute).mean.value_or(Rational(0));
    result.slope = mean_a - mean_b;
    if (result.slope != 0) {
        const Rational crossing = -result.delta_at_zero / result.slope;
        if (crossing >= lo && crossing <= hi) {
            const bool a_leads_after = result.slope > 0;
            result.crossovers.push_back({crossing, a_leads_after ? b.library.name : a.library.name,
                                         a_leads_after ? a.library.name : b.library.name});
        }
    }
    return result;
}

}  // namespace libdex
