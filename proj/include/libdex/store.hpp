#pragma once

#include <filesystem>
#include <optional>
#include <shared_mutex>
#include <string>
#include <vector>

#include "json.hpp"
#include "libdex/scoring.hpp"

namespace libdex {

struct ProfileRecord {
    std::string library_id;
    LibraryProfile profile;
    std::string content_hash;
    int revision = 0;
    std::optional<std::string> previous_hash;
};

struct ProfileSummary {
    std::string library_id;
    std::string name;
    std::string version;
    int latest_revision = 0;
    std::string content_hash;
};

struct SaveOptions {
    /// Write a new revision even when the content hash equals the latest one.
    bool force = false;
    /// When set, the save fails with WRITE_CONFLICT unless this is still the latest revision (0 = none yet).
    std::optional<int> expected_revision;
};

nlohmann::json record_to_json(const ProfileRecord& record);
nlohmann::json summary_to_json(const ProfileSummary& summary);

/// Directory of append-only, hash-chained profile revisions:
///   <root>/profiles/<library_id>/<revision>.json and <root>/index.json.
/// One writer at a time per process; readers never see partial files.
class ProfileStore {
public:
    ProfileStore(std::filesystem::path root, const Catalog& catalog);

    ProfileRecord save(const LibraryProfile& profile, SaveOptions options = {});
    ProfileRecord get(const std::string& library_id, std::optional<int> revision = std::nullopt) const;
    /// Sorted by library name, then id.
    std::vector<ProfileSummary> list() const;
    std::vector<int> revisions(const std::string& library_id) const;

    const std::filesystem::path& root() const noexcept { return root_; }

private:
    std::filesystem::path library_dir(const std::string& library_id) const;
    ProfileRecord read_record(const std::filesystem::path& file) const;
    void write_index() const;

    std::filesystem::path root_;
    const Catalog& catalog_;
    mutable std::shared_mutex mutex_;
};

}  // namespace libdex
