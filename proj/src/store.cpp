#include "libdex/store.hpp"

#include <algorithm>
#include <cerrno>
#include <cstring>
#include <mutex>

#include <unistd.h>

#include "libdex/interchange.hpp"

namespace libdex {

namespace fs = std::filesystem;

namespace {

bool valid_library_id(const std::string& id) {
    return !id.empty() && std::all_of(id.begin(), id.end(), [](unsigned char c) {
        return std::islower(c) || std::isdigit(c) || c == '-';
    });
}

}  // namespace

nlohmann::json record_to_json(const ProfileRecord& record) {
    return {{"library_id", record.library_id},
            {"revision", record.revision},
            {"content_hash", record.content_hash},
            {"previous_hash", record.previous_hash ? nlohmann::json(*record.previous_hash) : nlohmann::json()},
            {"profile", profile_to_json(record.profile)}};
}

nlohmann::json summary_to_json(const ProfileSummary& summary) {
    return {{"library_id", summary.library_id},
            {"name", summary.name},
            {"version", summary.version},
            {"latest_revision", summary.latest_revision},
            {"content_hash", summary.content_hash}};
}

ProfileStore::ProfileStore(fs::path root, const Catalog& catalog) : root_(std::move(root)), catalog_(catalog) {
    std::error_code ec;
    fs::create_directories(root_ / "profiles", ec);
    if (ec) {
        throw Error(ErrorCode::Internal, "cannot create store at '" + root_.string() + "': " + ec.message(),
                    {{"path", root_.string()}});
    }
}

fs::path ProfileStore::library_dir(const std::string& library_id) const {
    if (!valid_library_id(library_id)) {
        throw Error(ErrorCode::NotFound, "invalid library id '" + library_id + "'", {{"library_id", library_id}});
    }
    return root_ / "profiles" / library_id;
}

std::vector<int> ProfileStore::revisions(const std::string& library_id) const {
    std::vector<int> out;
    const auto dir = library_dir(library_id);
    std::error_code ec;
    for (const auto& entry : fs::directory_iterator(dir, ec)) {
        if (entry.path().extension() != ".json") {
            continue;
        }
        const auto stem = entry.path().stem().string();
        if (!stem.empty() && std::all_of(stem.begin(), stem.end(), ::isdigit)) {
            out.push_back(std::stoi(stem));
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

ProfileRecord ProfileStore::read_record(const fs::path& file) const {
    const auto document = parse_json(read_file(file.string()), file.string());
    ProfileRecord record;
    try {
        record.library_id = document.at("library_id").get<std::string>();
        record.revision = document.at("revision").get<int>();
        record.content_hash = document.at("content_hash").get<std::string>();
        if (!document.at("previous_hash").is_null()) {
            record.previous_hash = document.at("previous_hash").get<std::string>();
        }
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::Parse, file.string() + ": " + e.what());
    }
    record.profile = load_profile_json(document.at("profile"), catalog_).profile;
    if (content_hash(record.profile) != record.content_hash) {
        throw Error(ErrorCode::Internal, "content hash mismatch in '" + file.string() + "'", {{"path", file.string()}});
    }
    return record;
}

ProfileRecord ProfileStore::get(const std::string& library_id, std::optional<int> revision) const {
    std::shared_lock lock(mutex_);
    const auto revs = revisions(library_id);
    if (revs.empty()) {
        throw Error(ErrorCode::NotFound, "no library '" + library_id + "' in store", {{"library_id", library_id}});
    }
    const int wanted = revision.value_or(revs.back());
    if (!std::binary_search(revs.begin(), revs.end(), wanted)) {
        throw Error(ErrorCode::NotFound, "library '" + library_id + "' has no revision " + std::to_string(wanted),
                    {{"library_id", library_id}, {"revision", wanted}});
    }
    return read_record(library_dir(library_id) / (std::to_string(wanted) + ".json"));
}

std::vector<ProfileSummary> ProfileStore::list() const {
    std::shared_lock lock(mutex_);
    std::vector<ProfileSummary> out;
    std::error_code ec;
    for (const auto& entry : fs::directory_iterator(root_ / "profiles", ec)) {
        if (!entry.is_directory()) {
            continue;
        }
        const auto id = entry.path().filename().string();
        if (!valid_library_id(id)) {
            continue;
        }
        const auto revs = revisions(id);
        if (revs.empty()) {
            continue;
        }
        const auto record = read_record(entry.path() / (std::to_string(revs.back()) + ".json"));
        out.push_back({id, record.profile.library.name, record.profile.library.version, record.revision,
                       record.content_hash});
    }
    std::sort(out.begin(), out.end(), [](const ProfileSummary& a, const ProfileSummary& b) {
        return std::tie(a.name, a.library_id) < std::tie(b.name, b.library_id);
    });
    return out;
}

ProfileRecord ProfileStore::save(const LibraryProfile& profile, SaveOptions options) {
    validate_profile(catalog_, profile);
    std::unique_lock lock(mutex_);

    const auto library_id = profile.id();
    const auto dir = library_dir(library_id);
    fs::create_directories(dir);
    const auto revs = revisions(library_id);
    const int latest = revs.empty() ? 0 : revs.back();
    if (options.expected_revision && *options.expected_revision != latest) {
        throw Error(ErrorCode::WriteConflict,
                    "library '" + library_id + "' is at revision " + std::to_string(latest) + ", expected " +
                        std::to_string(*options.expected_revision),
                    {{"library_id", library_id}, {"latest_revision", latest}});
    }

    ProfileRecord record;
    record.library_id = library_id;
    record.profile = profile;
    record.content_hash = content_hash(profile);
    if (latest > 0) {
        auto previous = read_record(dir / (std::to_string(latest) + ".json"));
        if (previous.content_hash == record.content_hash && !options.force) {
            return previous;
        }
        record.previous_hash = previous.content_hash;
    }
    record.revision = latest + 1;

    const auto target = dir / (std::to_string(record.revision) + ".json");
    const auto temp = dir / (std::to_string(record.revision) + ".json.tmp." + std::to_string(::getpid()));
    write_file_atomic(temp.string(), canonical_dump(record_to_json(record)));
    // link() refuses to replace an existing revision written by another process
    if (::link(temp.c_str(), target.c_str()) != 0) {
        const int err = errno;
        fs::remove(temp);
        if (err == EEXIST) {
            throw Error(ErrorCode::WriteConflict,
                        "revision " + std::to_string(record.revision) + " of '" + library_id + "' was written concurrently",
                        {{"library_id", library_id}, {"revision", record.revision}});
        }
        throw Error(ErrorCode::Internal, "cannot publish revision: " + std::string(std::strerror(err)));
    }
    fs::remove(temp);
    write_index();
    return record;
}

void ProfileStore::write_index() const {
    nlohmann::json libraries = nlohmann::json::object();
    std::error_code ec;
    for (const auto& entry : fs::directory_iterator(root_ / "profiles", ec)) {
        const auto id = entry.path().filename().string();
        if (!entry.is_directory() || !valid_library_id(id)) {
            continue;
        }
        const auto revs = revisions(id);
        if (!revs.empty()) {
            libraries[id] = {{"latest_revision", revs.back()}, {"revisions", revs}};
        }
    }
    write_file_atomic((root_ / "index.json").string(), canonical_dump({{"libraries", libraries}}));
}

}  // namespace libdex
