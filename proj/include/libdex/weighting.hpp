#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "libdex/catalog.hpp"
#include "libdex/rational.hpp"

namespace libdex {

/// Per-attribute ranks; rank n is the most relevant. Ties carry half-integer mean ranks.
struct RankVector {
    std::map<AttributeId, Rational> ranks;

    std::size_t n() const noexcept { return ranks.size(); }
    Rational sum() const;
    bool operator==(const RankVector&) const = default;
};

/// n(n+1)/2
Rational triangular(std::size_t n);

using MentionCounts = std::map<AttributeId, long long>;
/// Each ordering lists attribute ids from least relevant (rank 1) to most relevant (rank n).
using Ballots = std::vector<std::vector<AttributeId>>;

struct EvidenceSource {
    std::string label;
    std::variant<MentionCounts, Ballots, RankVector> payload;
    /// Ranks published alongside raw counts; compared against the recomputed ranks.
    std::optional<RankVector> reported_ranks;
};

struct WeightVector {
    std::map<AttributeId, Rational> weights;

    std::size_t n() const noexcept { return weights.size(); }
    Rational sum() const;
    const Rational& at(AttributeId id) const;
    bool operator==(const WeightVector&) const = default;
};

/// 10^-9
Rational default_weight_tolerance();

/// Tied-rank normalization: larger values get larger ranks, equal values share the
/// mean of the positions they occupy. Shared by counts and by re-ranking of averages.
RankVector mean_ranks(const std::map<AttributeId, Rational>& values);
RankVector mean_ranks(const MentionCounts& counts);

/// Mean positional rank over ballots. Throws MalformedBallot naming the ballot index.
RankVector aggregate_ballots(const Ballots& ballots);

struct SourceRanks {
    std::string label;
    RankVector ranks;
    std::vector<std::string> warnings;
};

/// Converts any evidence payload to ranks, flagging disagreement with reported ranks
/// and verbatim rank vectors whose sum is not n(n+1)/2.
SourceRanks to_rank_vector(const EvidenceSource& source);

struct DerivationTrace {
    std::vector<std::string> labels;
    std::vector<RankVector> per_source_ranks;
    std::map<AttributeId, Rational> averages;
    RankVector total_ranks;
    std::map<AttributeId, Rational> buckets;
    /// False when tied total ranks straddled a band boundary and the weights no longer sum to n.
    bool balanced = true;
    std::vector<std::string> warnings;
};

struct Derivation {
    WeightVector weights;
    DerivationTrace trace;
};

/// Average the source ranks, re-rank the averages, map total ranks to weight bands.
Derivation derive_reference_weights(const std::vector<RankVector>& sources,
                                    std::vector<std::string> labels = {});
Derivation derive_reference_weights(const std::vector<EvidenceSource>& sources);

/// Five equal-width bands from the top, closed at their upper end:
/// (4n/5, n] -> 1.5, (3n/5, 4n/5] -> 1.25, (2n/5, 3n/5] -> 1.0, (n/5, 2n/5] -> 0.75, [1, n/5] -> 0.5.
Rational bucket_weight(const Rational& total_rank, int n);

struct WeightViolation {
    ErrorCode code = ErrorCode::WeightSum;
    Rational sum;
    Rational expected;
    std::vector<AttributeId> negatives;
    std::string message;
};

std::optional<WeightViolation> validate_weights(const WeightVector& weights,
                                                const Rational& tolerance = default_weight_tolerance());

/// Throws the violation as an Error; also rejects vectors that do not cover exactly the catalog's attributes.
void require_valid_weights(const WeightVector& weights, const Catalog& catalog,
                           const Rational& tolerance = default_weight_tolerance());

/// Scales unpinned weights by a common factor so the total is n; pinned weights are kept.
WeightVector rebalance_weights(const WeightVector& weights, const std::set<AttributeId>& pinned);

WeightVector uniform_weights(const Catalog& catalog);

/// Table 3 evidence shipped with the tool: literature and interview mention counts and questionnaire ranks.
std::vector<EvidenceSource> builtin_reference_evidence();

/// The published reference weighting, used to verify the derivation at startup.
WeightVector expected_reference_weights();

/// Derives the reference weights from the built-in evidence and checks them against the expected vector.
const Derivation& reference_derivation();

}  // namespace libdex
