#pragma once

// Shared generators and independent oracles for the test suites.

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <random>
#include <string>
#include <unistd.h>

#include "libdex/catalog.hpp"
#include "libdex/interchange.hpp"
#include "libdex/scoring.hpp"
#include "libdex/weighting.hpp"

namespace libdex::testing {

inline std::string fixture(const std::string& name) {
    return std::string(LIBDEX_FIXTURES) + "/" + name;
}

inline LibraryProfile fixture_profile(const std::string& name) {
    return load_profile(read_file(fixture(name)), builtin_catalog()).profile;
}

inline const WeightVector& reference_weights() {
    return reference_derivation().weights;
}

/// Tied rank by counting: (#strictly smaller) + (#equal including itself + 1) / 2.
inline RankVector counting_rank_oracle(const std::map<AttributeId, Rational>& values) {
    RankVector out;
    for (const auto& [id, v] : values) {
        long long less = 0;
        long long equal = 0;
        for (const auto& [other, w] : values) {
            if (w < v) ++less;
            if (w == v) ++equal;
        }
        out.ranks[id] = Rational(less) + Rational(equal + 1, 2);
    }
    return out;
}

/// Allowed closed rating interval for a criterion.
inline std::pair<Rational, Rational> rating_interval(const CriterionDef& criterion) {
    if (criterion.rubric.kind != RubricKind::EnumeratedAnchors) {
        return {Rational(-2), Rational(2)};
    }
    Rational lo = 2;
    Rational hi = -2;
    for (const auto& a : criterion.rubric.anchors) {
        lo = std::min(lo, a.value);
        hi = std::max(hi, a.value);
    }
    return {lo, hi};
}

/// Rates each criterion with probability `coverage`, on a 1/12 grid inside its allowed interval.
template <typename Rng>
LibraryProfile random_profile(const Catalog& catalog, Rng& rng, const std::string& name, double coverage = 0.8) {
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    std::uniform_int_distribution<int> step(0, 12);
    LibraryProfile profile;
    profile.library = {name, "1.0", "Java", "https://example.invalid/" + name};
    profile.catalog_version = catalog.version();
    for (const auto& attribute : catalog.attributes()) {
        for (const auto& criterion : attribute.criteria) {
            if (coin(rng) > coverage) {
                continue;
            }
            const auto [lo, hi] = rating_interval(criterion);
            const Rational value = lo + (hi - lo) * Rational(step(rng), 12);
            profile.assessments.push_back({criterion.id, Rating(value), "generated", "test", "2024-01-01"});
        }
    }
    std::shuffle(profile.assessments.begin(), profile.assessments.end(), rng);
    return profile;
}

/// Nonnegative weights summing exactly to n, built from random integer shares.
template <typename Rng>
WeightVector random_weights(const Catalog& catalog, Rng& rng) {
    std::uniform_int_distribution<int> share(0, 8);
    std::vector<int> shares;
    int total = 0;
    for (std::size_t i = 0; i < catalog.size(); ++i) {
        shares.push_back(share(rng));
        total += shares.back();
    }
    if (total == 0) {
        shares[0] = 1;
        total = 1;
    }
    WeightVector out;
    const auto ids = catalog.attribute_ids();
    for (std::size_t i = 0; i < ids.size(); ++i) {
        out.weights[ids[i]] = Rational(shares[i] * static_cast<long long>(catalog.size()), total);
    }
    return out;
}

/// Direct recomputation of the index: sum over attributes of (mean of rated criteria) * weight.
inline Rational index_oracle(const Catalog& catalog, const LibraryProfile& profile, const WeightVector& weights) {
    Rational total = 0;
    for (const auto& attribute : catalog.attributes()) {
        Rational sum = 0;
        int count = 0;
        for (const auto& a : profile.assessments) {
            if (catalog.criterion(a.criterion_id).attribute_id == attribute.id) {
                sum += a.rating.value();
                ++count;
            }
        }
        if (count > 0) {
            total += sum / count * weights.weights.at(attribute.id);
        }
    }
    return total;
}

class TempDir {
public:
    TempDir() {
        auto base = std::filesystem::temp_directory_path() / "libdex-test-XXXXXX";
        std::string pattern = base.string();
        if (!::mkdtemp(pattern.data())) {
            throw std::runtime_error("mkdtemp failed");
        }
        path_ = pattern;
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    const std::filesystem::path& path() const { return path_; }

private:
    std::filesystem::path path_;
};

}  // namespace libdex::testing
