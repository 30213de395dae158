#include "libdex/interchange.hpp"

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>

#include <openssl/evp.h>

#include "libdex/report.hpp"

namespace libdex {

namespace {

const nlohmann::json& require(const nlohmann::json& object, const char* key, std::string_view context) {
    if (!object.is_object() || !object.contains(key)) {
        throw Error(ErrorCode::MissingKey, std::string(context) + ": missing key '" + key + "'", {{"key", key}});
    }
    return object.at(key);
}

std::string string_or_empty(const nlohmann::json& object, const char* key) {
    if (!object.contains(key) || object.at(key).is_null()) {
        return {};
    }
    return object.at(key).get<std::string>();
}

AttributeId attribute_key(const std::string& key) {
    try {
        std::size_t used = 0;
        const int value = std::stoi(key, &used);
        if (used == key.size()) {
            return AttributeId{value};
        }
    } catch (const std::exception&) {
    }
    throw Error(ErrorCode::Parse, "attribute key '" + key + "' is not an integer id", {{"key", key}});
}

std::map<AttributeId, Rational> rational_map(const nlohmann::json& object, std::string_view context) {
    if (!object.is_object()) {
        throw Error(ErrorCode::Parse, std::string(context) + " must be an object keyed by attribute id");
    }
    std::map<AttributeId, Rational> out;
    for (const auto& [key, value] : object.items()) {
        out.emplace(attribute_key(key), rational_from_json(value));
    }
    return out;
}

nlohmann::json rank_map(const std::map<AttributeId, Rational>& values) {
    nlohmann::json out = nlohmann::json::object();
    for (const auto& [id, v] : values) {
        out[to_string(id)] = rational_to_json(v);
    }
    return out;
}

template <typename F>
auto with_json_errors(F&& body) -> decltype(body()) {
    try {
        return body();
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::Parse, e.what());
    }
}

void check_covers_catalog(const std::set<AttributeId>& ids, const Catalog& catalog, const std::string& label) {
    const auto expected = catalog.attribute_ids();
    if (ids != std::set<AttributeId>(expected.begin(), expected.end())) {
        throw Error(ErrorCode::EvidenceMismatch,
                    "evidence '" + label + "' does not cover exactly the catalog's attributes");
    }
}

}  // namespace

std::string canonical_dump(const nlohmann::json& value) {
    return value.dump(2, ' ', false, nlohmann::json::error_handler_t::strict) + "\n";
}

std::string sha256_hex(const std::string& bytes) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int length = 0;
    if (EVP_Digest(bytes.data(), bytes.size(), digest, &length, EVP_sha256(), nullptr) != 1) {
        throw Error(ErrorCode::Internal, "SHA-256 digest failed");
    }
    std::ostringstream out;
    for (unsigned int i = 0; i < length; ++i) {
        out << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(digest[i]);
    }
    return out.str();
}

nlohmann::json parse_json(std::string_view text, std::string_view what) {
    try {
        return nlohmann::json::parse(text.begin(), text.end());
    } catch (const nlohmann::json::parse_error& e) {
        throw Error(ErrorCode::Parse, std::string(what) + ": " + e.what(), {{"byte", e.byte}});
    }
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error(ErrorCode::NotFound, "cannot read '" + path + "'", {{"path", path}});
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

void write_file_atomic(const std::string& path, const std::string& contents) {
    const std::string temp = path + ".tmp";
    {
        std::ofstream out(temp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw Error(ErrorCode::Internal, "cannot write '" + temp + "'", {{"path", temp}});
        }
        out << contents;
        out.flush();
        if (!out) {
            throw Error(ErrorCode::Internal, "short write to '" + temp + "'", {{"path", temp}});
        }
    }
    std::filesystem::rename(temp, path);
}

nlohmann::json profile_to_json(const LibraryProfile& profile) {
    nlohmann::json assessments = nlohmann::json::array();
    for (const auto& a : profile.assessments) {
        assessments.push_back({{"criterion", a.criterion_id},
                               {"rating", rational_to_json(a.rating.value())},
                               {"note", a.note},
                               {"assessor", a.assessor},
                               {"assessed_at", a.assessed_at}});
    }
    return {{"format_version", kProfileFormatVersion},
            {"catalog_version", profile.catalog_version},
            {"library",
             {{"name", profile.library.name},
              {"version", profile.library.version},
              {"language", profile.library.language},
              {"source_url", profile.library.source_url}}},
            {"assessments", assessments}};
}

LibraryProfile profile_from_json(const nlohmann::json& document) {
    return with_json_errors([&] {
        LibraryProfile profile;
        const auto version = require(document, "format_version", "profile").get<int>();
        if (version != kProfileFormatVersion) {
            throw Error(ErrorCode::Parse, "unsupported profile format_version " + std::to_string(version));
        }
        profile.catalog_version = require(document, "catalog_version", "profile").get<std::string>();
        const auto& library = require(document, "library", "profile");
        profile.library.name = require(library, "name", "profile library").get<std::string>();
        profile.library.version = string_or_empty(library, "version");
        profile.library.language = string_or_empty(library, "language");
        profile.library.source_url = string_or_empty(library, "source_url");
        const auto& assessments = require(document, "assessments", "profile");
        if (!assessments.is_array()) {
            throw Error(ErrorCode::Parse, "profile: 'assessments' must be an array");
        }
        for (const auto& entry : assessments) {
            const auto criterion = require(entry, "criterion", "assessment").get<std::string>();
            const Rational value = rational_from_json(require(entry, "rating", "assessment"));
            if (value < -2 || value > 2) {
                throw Error(ErrorCode::Range,
                            "criterion '" + criterion + "': rating " + to_exact_string(value) + " outside [-2, +2]",
                            {{"criterion", criterion}, {"rating", to_exact_string(value)}});
            }
            profile.assessments.push_back(Assessment{criterion, Rating(value), string_or_empty(entry, "note"),
                                                     string_or_empty(entry, "assessor"),
                                                     string_or_empty(entry, "assessed_at")});
        }
        return profile;
    });
}

LoadedProfile load_profile_json(const nlohmann::json& document, const Catalog& catalog) {
    LoadedProfile loaded{profile_from_json(document), {}};
    validate_profile(catalog, loaded.profile, &loaded.warnings);
    return loaded;
}

LoadedProfile load_profile(std::string_view document, const Catalog& catalog) {
    return load_profile_json(parse_json(document, "profile"), catalog);
}

std::string content_hash(const LibraryProfile& profile) {
    return sha256_hex(canonical_dump(profile_to_json(profile)));
}

LibraryProfile merge_assessments(LibraryProfile profile, const std::vector<Assessment>& assessments) {
    for (const auto& incoming : assessments) {
        auto it = std::find_if(profile.assessments.begin(), profile.assessments.end(),
                               [&](const Assessment& a) { return a.criterion_id == incoming.criterion_id; });
        if (it != profile.assessments.end()) {
            *it = incoming;
        } else {
            profile.assessments.push_back(incoming);
        }
    }
    return profile;
}

std::vector<Assessment> import_grade_report_json(const nlohmann::json& document) {
    static const std::pair<const char*, const char*> fields[] = {
        {"bugs", "7a"}, {"vulnerability", "7b"}, {"code_smell", "7c"}};
    std::vector<Assessment> out;
    for (const auto& [key, criterion] : fields) {
        const auto& value = require(document, key, "grade report");
        if (!value.is_string()) {
            throw Error(ErrorCode::UnknownGrade, std::string("grade report: '") + key + "' must be a letter A..E",
                        {{"key", key}, {"grade", value.dump()}});
        }
        const auto grade = value.get<std::string>();
        out.push_back(Assessment{criterion, rate_grade(grade),
                                 std::string("static-analysis grade ") + key + ": " + grade,
                                 string_or_empty(document, "assessor"), string_or_empty(document, "assessed_at")});
    }
    return out;
}

std::vector<Assessment> import_grade_report(std::string_view document) {
    return import_grade_report_json(parse_json(document, "grade report"));
}

EvidenceSource evidence_from_json(const nlohmann::json& document, const Catalog* catalog) {
    return with_json_errors([&] {
        EvidenceSource source;
        source.label = require(document, "label", "evidence").get<std::string>();
        const auto kind = require(document, "kind", "evidence").get<std::string>();
        const auto& data = require(document, "data", "evidence");
        std::set<AttributeId> covered;
        if (kind == "counts") {
            MentionCounts counts;
            for (const auto& [key, value] : rational_map(data, "evidence data")) {
                if (boost::multiprecision::denominator(value) != 1 || value < 0) {
                    throw Error(ErrorCode::Range, "evidence '" + source.label + "': mention count for attribute " +
                                                      to_string(key) + " must be a nonnegative integer",
                                {{"attribute", key.value}});
                }
                counts.emplace(key, boost::multiprecision::numerator(value).convert_to<long long>());
                covered.insert(key);
            }
            source.payload = std::move(counts);
        } else if (kind == "ballots") {
            if (!data.is_array()) {
                throw Error(ErrorCode::Parse, "evidence '" + source.label + "': ballots must be an array");
            }
            Ballots ballots;
            for (std::size_t b = 0; b < data.size(); ++b) {
                const auto ranks = rational_map(data[b], "ballot");
                std::vector<AttributeId> ordering(ranks.size());
                std::vector<bool> used(ranks.size(), false);
                for (const auto& [id, rank] : ranks) {
                    const bool integral = boost::multiprecision::denominator(rank) == 1;
                    const long long position = integral ? boost::multiprecision::numerator(rank).convert_to<long long>() : 0;
                    if (!integral || position < 1 || position > static_cast<long long>(ranks.size()) ||
                        used[static_cast<std::size_t>(position - 1)]) {
                        throw Error(ErrorCode::MalformedBallot,
                                    "ballot " + std::to_string(b) + " is not a permutation of ranks 1..n",
                                    {{"ballot", b}});
                    }
                    used[static_cast<std::size_t>(position - 1)] = true;
                    ordering[static_cast<std::size_t>(position - 1)] = id;
                }
                if (b == 0) {
                    covered.insert(ordering.begin(), ordering.end());
                }
                ballots.push_back(std::move(ordering));
            }
            source.payload = std::move(ballots);
        } else if (kind == "ranks") {
            RankVector ranks{rational_map(data, "evidence data")};
            for (const auto& [id, _] : ranks.ranks) {
                covered.insert(id);
            }
            source.payload = std::move(ranks);
        } else {
            throw Error(ErrorCode::Parse, "evidence '" + source.label + "': unknown kind '" + kind + "'");
        }
        if (document.contains("reported_ranks") && !document.at("reported_ranks").is_null()) {
            source.reported_ranks = RankVector{rational_map(document.at("reported_ranks"), "reported_ranks")};
        }
        if (catalog) {
            check_covers_catalog(covered, *catalog, source.label);
        }
        return source;
    });
}

nlohmann::json evidence_to_json(const EvidenceSource& source) {
    nlohmann::json out = {{"label", source.label}};
    if (const auto* counts = std::get_if<MentionCounts>(&source.payload)) {
        out["kind"] = "counts";
        nlohmann::json data = nlohmann::json::object();
        for (const auto& [id, c] : *counts) {
            data[to_string(id)] = c;
        }
        out["data"] = data;
    } else if (const auto* ballots = std::get_if<Ballots>(&source.payload)) {
        out["kind"] = "ballots";
        nlohmann::json data = nlohmann::json::array();
        for (const auto& ballot : *ballots) {
            nlohmann::json entry = nlohmann::json::object();
            for (std::size_t pos = 0; pos < ballot.size(); ++pos) {
                entry[to_string(ballot[pos])] = pos + 1;
            }
            data.push_back(entry);
        }
        out["data"] = data;
    } else {
        out["kind"] = "ranks";
        out["data"] = rank_map(std::get<RankVector>(source.payload).ranks);
    }
    if (source.reported_ranks) {
        out["reported_ranks"] = rank_map(source.reported_ranks->ranks);
    }
    return out;
}

WeightVector weights_from_json(const nlohmann::json& document) {
    return with_json_errors([&] {
        const auto& map = document.is_object() && document.contains("weights") ? document.at("weights") : document;
        return WeightVector{rational_map(map, "weights")};
    });
}

nlohmann::json weights_document(const WeightVector& weights, const std::string& catalog_version) {
    return {{"catalog_version", catalog_version},
            {"weights", weights_to_json_map(weights)},
            {"sum", rational_to_json(weights.sum())}};
}

nlohmann::json derivation_to_json(const Derivation& derivation, const std::string& catalog_version) {
    const auto& trace = derivation.trace;
    nlohmann::json sources = nlohmann::json::array();
    for (std::size_t s = 0; s < trace.per_source_ranks.size(); ++s) {
        sources.push_back({{"label", trace.labels.at(s)}, {"ranks", rank_map(trace.per_source_ranks[s].ranks)}});
    }
    nlohmann::json averages_display = nlohmann::json::object();
    for (const auto& [id, avg] : trace.averages) {
        averages_display[to_string(id)] = display(avg);
    }
    auto out = weights_document(derivation.weights, catalog_version);
    out["trace"] = {
        {"per_source_ranks", sources},
        {"averages", rank_map(trace.averages)},
        {"averages_display", averages_display},
        {"total_ranks", rank_map(trace.total_ranks.ranks)},
        {"buckets", rank_map(trace.buckets)},
        {"balanced", trace.balanced},
        {"warnings", trace.warnings},
    };
    return out;
}

}  // namespace libdex
