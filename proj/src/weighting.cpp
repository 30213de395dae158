#include "libdex/weighting.hpp"

#include <algorithm>
#include <numeric>

namespace libdex {

namespace {

std::set<AttributeId> key_set(const std::map<AttributeId, Rational>& m) {
    std::set<AttributeId> keys;
    for (const auto& [id, _] : m) {
        keys.insert(id);
    }
    return keys;
}

nlohmann::json id_list(const std::vector<AttributeId>& ids) {
    nlohmann::json out = nlohmann::json::array();
    for (auto id : ids) {
        out.push_back(id.value);
    }
    return out;
}

}  // namespace

Rational RankVector::sum() const {
    Rational total = 0;
    for (const auto& [_, r] : ranks) {
        total += r;
    }
    return total;
}

Rational triangular(std::size_t n) {
    return Rational(static_cast<long long>(n) * static_cast<long long>(n + 1), 2);
}

Rational WeightVector::sum() const {
    Rational total = 0;
    for (const auto& [_, g] : weights) {
        total += g;
    }
    return total;
}

const Rational& WeightVector::at(AttributeId id) const {
    auto it = weights.find(id);
    if (it == weights.end()) {
        throw Error(ErrorCode::WeightMismatch, "weight vector has no entry for attribute " + to_string(id),
                    {{"attribute", id.value}});
    }
    return it->second;
}

Rational default_weight_tolerance() {
    return Rational(1, 1000000000);
}

RankVector mean_ranks(const std::map<AttributeId, Rational>& values) {
    if (values.empty()) {
        throw Error(ErrorCode::EmptyInput, "cannot rank an empty set of attributes");
    }
    std::vector<std::pair<AttributeId, Rational>> order(values.begin(), values.end());
    std::stable_sort(order.begin(), order.end(),
                     [](const auto& a, const auto& b) { return a.second < b.second; });

    RankVector result;
    std::size_t first = 0;
    while (first < order.size()) {
        std::size_t last = first;
        while (last + 1 < order.size() && order[last + 1].second == order[first].second) {
            ++last;
        }
        // positions first+1 .. last+1 share their mean
        const Rational shared(static_cast<long long>(first + 1 + last + 1), 2);
        for (std::size_t i = first; i <= last; ++i) {
            result.ranks[order[i].first] = shared;
        }
        first = last + 1;
    }
    return result;
}

RankVector mean_ranks(const MentionCounts& counts) {
    std::map<AttributeId, Rational> values;
    for (const auto& [id, count] : counts) {
        if (count < 0) {
            throw Error(ErrorCode::Range, "negative mention count for attribute " + to_string(id),
                        {{"attribute", id.value}});
        }
        values.emplace(id, Rational(count));
    }
    return mean_ranks(values);
}

RankVector aggregate_ballots(const Ballots& ballots) {
    if (ballots.empty()) {
        throw Error(ErrorCode::EmptyInput, "no ballots to aggregate");
    }
    const std::set<AttributeId> expected(ballots.front().begin(), ballots.front().end());
    std::map<AttributeId, Rational> totals;
    for (std::size_t b = 0; b < ballots.size(); ++b) {
        const auto& ballot = ballots[b];
        const std::set<AttributeId> seen(ballot.begin(), ballot.end());
        if (seen.size() != ballot.size() || seen != expected || ballot.empty()) {
            throw Error(ErrorCode::MalformedBallot,
                        "ballot " + std::to_string(b) + " is not a permutation of the attribute set",
                        {{"ballot", b}});
        }
        for (std::size_t pos = 0; pos < ballot.size(); ++pos) {
            totals[ballot[pos]] += static_cast<long long>(pos + 1);
        }
    }
    RankVector result;
    for (const auto& [id, total] : totals) {
        result.ranks[id] = total / static_cast<long long>(ballots.size());
    }
    if (result.sum() != triangular(result.n())) {
        throw Error(ErrorCode::Internal, "aggregated ballot ranks do not sum to n(n+1)/2");
    }
    return result;
}

SourceRanks to_rank_vector(const EvidenceSource& source) {
    SourceRanks out{source.label, {}, {}};
    if (const auto* counts = std::get_if<MentionCounts>(&source.payload)) {
        out.ranks = mean_ranks(*counts);
    } else if (const auto* ballots = std::get_if<Ballots>(&source.payload)) {
        out.ranks = aggregate_ballots(*ballots);
    } else {
        out.ranks = std::get<RankVector>(source.payload);
        if (out.ranks.ranks.empty()) {
            throw Error(ErrorCode::EmptyInput, "evidence '" + source.label + "' has no ranks");
        }
        const Rational n(static_cast<long long>(out.ranks.n()));
        for (const auto& [id, r] : out.ranks.ranks) {
            if (r < 1 || r > n) {
                throw Error(ErrorCode::Range,
                            "evidence '" + source.label + "': rank " + to_exact_string(r) + " of attribute " +
                                to_string(id) + " outside [1, " + to_exact_string(n) + "]",
                            {{"attribute", id.value}});
            }
        }
        if (out.ranks.sum() != triangular(out.ranks.n())) {
            out.warnings.push_back("evidence '" + source.label + "': ranks sum to " +
                                   to_exact_string(out.ranks.sum()) + ", not n(n+1)/2 = " +
                                   to_exact_string(triangular(out.ranks.n())) + "; used verbatim");
        }
    }
    if (source.reported_ranks && !std::holds_alternative<RankVector>(source.payload)) {
        for (const auto& [id, reported] : source.reported_ranks->ranks) {
            auto it = out.ranks.ranks.find(id);
            if (it == out.ranks.ranks.end()) {
                out.warnings.push_back("evidence '" + source.label + "': reported rank for unknown attribute " +
                                       to_string(id));
            } else if (it->second != reported) {
                out.warnings.push_back("evidence '" + source.label + "': attribute " + to_string(id) +
                                       " has reported rank " + to_exact_string(reported) +
                                       " but its data gives rank " + to_exact_string(it->second));
            }
        }
    }
    return out;
}

Derivation derive_reference_weights(const std::vector<RankVector>& sources, std::vector<std::string> labels) {
    if (sources.empty()) {
        throw Error(ErrorCode::EmptyInput, "at least one evidence source is required");
    }
    const auto attributes = key_set(sources.front().ranks);
    for (std::size_t s = 0; s < sources.size(); ++s) {
        if (key_set(sources[s].ranks) != attributes) {
            throw Error(ErrorCode::EvidenceMismatch,
                        "evidence source " + std::to_string(s) + " covers a different attribute set",
                        {{"source", s}});
        }
    }
    labels.resize(sources.size());
    for (std::size_t s = 0; s < labels.size(); ++s) {
        if (labels[s].empty()) {
            labels[s] = "source " + std::to_string(s + 1);
        }
    }

    Derivation out;
    out.trace.labels = std::move(labels);
    out.trace.per_source_ranks = sources;
    for (auto id : attributes) {
        Rational total = 0;
        for (const auto& source : sources) {
            total += source.ranks.at(id);
        }
        out.trace.averages[id] = total / static_cast<long long>(sources.size());
    }
    out.trace.total_ranks = mean_ranks(out.trace.averages);
    const int n = static_cast<int>(attributes.size());
    for (const auto& [id, rank] : out.trace.total_ranks.ranks) {
        const Rational g = bucket_weight(rank, n);
        out.trace.buckets[id] = g;
        out.weights.weights[id] = g;
    }
    out.trace.balanced = abs(out.weights.sum() - n) <= default_weight_tolerance();
    if (!out.trace.balanced) {
        out.trace.warnings.push_back("tied total ranks straddle a band boundary; weights sum to " +
                                     to_exact_string(out.weights.sum()) + " instead of " + std::to_string(n));
    }
    return out;
}

Derivation derive_reference_weights(const std::vector<EvidenceSource>& sources) {
    std::vector<RankVector> ranks;
    std::vector<std::string> labels;
    std::vector<std::string> warnings;
    for (const auto& source : sources) {
        auto converted = to_rank_vector(source);
        ranks.push_back(std::move(converted.ranks));
        labels.push_back(converted.label);
        warnings.insert(warnings.end(), converted.warnings.begin(), converted.warnings.end());
    }
    auto derivation = derive_reference_weights(ranks, std::move(labels));
    derivation.trace.warnings.insert(derivation.trace.warnings.begin(), warnings.begin(), warnings.end());
    return derivation;
}

Rational bucket_weight(const Rational& total_rank, int n) {
    if (n < 5) {
        throw Error(ErrorCode::Range, "weight bands need at least 5 attributes, got " + std::to_string(n));
    }
    if (total_rank < 1 || total_rank > n) {
        throw Error(ErrorCode::Range,
                    "total rank " + to_exact_string(total_rank) + " outside [1, " + std::to_string(n) + "]");
    }
    const Rational band(n, 5);
    if (total_rank > 4 * band) return Rational(3, 2);
    if (total_rank > 3 * band) return Rational(5, 4);
    if (total_rank > 2 * band) return Rational(1);
    if (total_rank > band) return Rational(3, 4);
    return Rational(1, 2);
}

std::optional<WeightViolation> validate_weights(const WeightVector& weights, const Rational& tolerance) {
    WeightViolation violation;
    violation.sum = weights.sum();
    violation.expected = Rational(static_cast<long long>(weights.n()));
    for (const auto& [id, g] : weights.weights) {
        if (g < 0) {
            violation.negatives.push_back(id);
        }
    }
    const Rational drift = violation.sum - violation.expected;
    const bool sum_ok = abs(drift) <= tolerance;
    if (sum_ok && violation.negatives.empty()) {
        return std::nullopt;
    }
    if (!violation.negatives.empty()) {
        violation.code = ErrorCode::NegativeWeight;
        violation.message = std::to_string(violation.negatives.size()) + " negative weight(s)";
        if (!sum_ok) {
            violation.message += "; ";
        }
    }
    if (!sum_ok) {
        violation.message += "weights sum to " + to_fixed(violation.sum, 6) + " but must equal " +
                             to_exact_string(violation.expected) + " (" + (drift < 0 ? "deficit " : "excess ") +
                             to_fixed(abs(drift), 6) + ")";
    }
    return violation;
}

void require_valid_weights(const WeightVector& weights, const Catalog& catalog, const Rational& tolerance) {
    std::vector<AttributeId> missing;
    std::vector<AttributeId> extra;
    for (auto id : catalog.attribute_ids()) {
        if (!weights.weights.contains(id)) {
            missing.push_back(id);
        }
    }
    for (const auto& [id, _] : weights.weights) {
        if (!catalog.find_attribute(id)) {
            extra.push_back(id);
        }
    }
    if (!missing.empty() || !extra.empty()) {
        throw Error(ErrorCode::WeightMismatch, "weight vector does not match the catalog's attributes",
                    {{"missing", id_list(missing)}, {"unknown", id_list(extra)}});
    }
    if (auto violation = validate_weights(weights, tolerance)) {
        throw Error(violation->code, violation->message,
                    {{"sum", to_exact_string(violation->sum)},
                     {"expected", to_exact_string(violation->expected)},
                     {"negatives", id_list(violation->negatives)}});
    }
}

WeightVector rebalance_weights(const WeightVector& weights, const std::set<AttributeId>& pinned) {
    for (auto id : pinned) {
        if (!weights.weights.contains(id)) {
            throw Error(ErrorCode::UnknownAttribute, "pinned attribute " + to_string(id) + " not in weight vector",
                        {{"attribute", id.value}});
        }
    }
    for (const auto& [id, g] : weights.weights) {
        if (g < 0) {
            throw Error(ErrorCode::NegativeWeight, "attribute " + to_string(id) + " has a negative weight",
                        {{"attribute", id.value}});
        }
    }
    const Rational n(static_cast<long long>(weights.n()));
    Rational pinned_sum = 0;
    Rational free_sum = 0;
    std::size_t free_count = 0;
    for (const auto& [id, g] : weights.weights) {
        if (pinned.contains(id)) {
            pinned_sum += g;
        } else {
            free_sum += g;
            ++free_count;
        }
    }
    if (free_count == 0) {
        if (abs(pinned_sum - n) > default_weight_tolerance()) {
            throw Error(ErrorCode::InfeasiblePin,
                        "all attributes pinned but weights sum to " + to_fixed(pinned_sum, 6) + ", not " +
                            to_exact_string(n),
                        {{"pinned_sum", to_exact_string(pinned_sum)}});
        }
        return weights;
    }
    if (pinned_sum >= n) {
        throw Error(ErrorCode::InfeasiblePin,
                    "pinned weights sum to " + to_fixed(pinned_sum, 6) + ", leaving nothing for unpinned attributes",
                    {{"pinned_sum", to_exact_string(pinned_sum)}});
    }
    WeightVector out = weights;
    const Rational remaining = n - pinned_sum;
    for (auto& [id, g] : out.weights) {
        if (pinned.contains(id)) {
            continue;
        }
        g = free_sum > 0 ? Rational(g * remaining / free_sum)
                         : Rational(remaining / static_cast<long long>(free_count));
    }
    return out;
}

WeightVector uniform_weights(const Catalog& catalog) {
    WeightVector out;
    for (auto id : catalog.attribute_ids()) {
        out.weights[id] = 1;
    }
    return out;
}

}  // namespace libdex
