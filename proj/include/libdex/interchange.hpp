#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "libdex/canonical.hpp"
#include "libdex/scoring.hpp"
#include "libdex/weighting.hpp"

namespace libdex {

inline constexpr int kProfileFormatVersion = 1;

/// Parses text as JSON; syntax errors become Error(Parse) carrying the byte offset.
nlohmann::json parse_json(std::string_view text, std::string_view what = "document");
std::string read_file(const std::string& path);
/// Write-temp-then-rename.
void write_file_atomic(const std::string& path, const std::string& contents);

// Profiles ---------------------------------------------------------------

nlohmann::json profile_to_json(const LibraryProfile& profile);
/// Structural decoding only; see load_profile for validation.
LibraryProfile profile_from_json(const nlohmann::json& document);

struct LoadedProfile {
    LibraryProfile profile;
    std::vector<std::string> warnings;
};

/// Parses and validates a *.profile.json document against the catalog.
LoadedProfile load_profile(std::string_view document, const Catalog& catalog);
LoadedProfile load_profile_json(const nlohmann::json& document, const Catalog& catalog);

/// SHA-256 of the canonical profile serialization.
std::string content_hash(const LibraryProfile& profile);

/// Last write wins per criterion.
LibraryProfile merge_assessments(LibraryProfile profile, const std::vector<Assessment>& assessments);

/// {bugs, vulnerability, code_smell} grades A..E -> assessments for criteria 7a/7b/7c.
std::vector<Assessment> import_grade_report_json(const nlohmann::json& document);
std::vector<Assessment> import_grade_report(std::string_view document);

// Evidence and weights ----------------------------------------------------

/// {label, kind: counts|ballots|ranks, data, reported_ranks?}. Ballot entries map attribute id -> rank (1 = least relevant).
EvidenceSource evidence_from_json(const nlohmann::json& document, const Catalog* catalog = nullptr);
nlohmann::json evidence_to_json(const EvidenceSource& source);

/// Accepts {weights: {...}} documents or a bare {attr_id: value} map.
WeightVector weights_from_json(const nlohmann::json& document);

/// {catalog_version, weights, trace: {per_source_ranks, averages, total_ranks, buckets, balanced, warnings}}
nlohmann::json derivation_to_json(const Derivation& derivation, const std::string& catalog_version);
nlohmann::json weights_document(const WeightVector& weights, const std::string& catalog_version);

}  // namespace libdex
