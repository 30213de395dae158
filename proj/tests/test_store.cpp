#include <fstream>
#include <random>
#include <thread>

#include "doctest.h"
#include "libdex/interchange.hpp"
#include "libdex/store.hpp"
#include "test_support.hpp"

using namespace libdex;
using libdex::testing::TempDir;

namespace {

ErrorCode code_of(const std::function<void()>& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("expected an error");
    return ErrorCode::Internal;
}

}  // namespace

TEST_CASE("save and get round-trip with hash chaining") {
    TempDir dir;
    ProfileStore store(dir.path(), builtin_catalog());
    const auto tink = testing::fixture_profile("tink.profile.json");

    const auto r1 = store.save(tink);
    CHECK(r1.library_id == "tink");
    CHECK(r1.revision == 1);
    CHECK_FALSE(r1.previous_hash.has_value());
    CHECK(r1.content_hash == content_hash(tink));
    CHECK(r1.content_hash.size() == 64);

    const auto got = store.get("tink");
    CHECK(got.profile == tink);
    CHECK(got.content_hash == r1.content_hash);

    // unchanged content does not create a revision
    CHECK(store.save(tink).revision == 1);
    CHECK(store.save(tink, {.force = true}).revision == 2);

    auto changed = tink;
    changed.assessments.front().rating = Rating(0);
    const auto r3 = store.save(changed);
    CHECK(r3.revision == 3);
    CHECK(r3.previous_hash == store.get("tink", 2).content_hash);
    CHECK(store.revisions("tink") == std::vector<int>{1, 2, 3});
    CHECK(store.get("tink", 1).profile == tink);
    CHECK(std::filesystem::exists(dir.path() / "profiles" / "tink" / "3.json"));
    CHECK(std::filesystem::exists(dir.path() / "index.json"));
}

TEST_CASE("missing ids and revisions are NOT_FOUND") {
    TempDir dir;
    ProfileStore store(dir.path(), builtin_catalog());
    CHECK(code_of([&] { store.get("nope"); }) == ErrorCode::NotFound);
    store.save(testing::fixture_profile("tink.profile.json"));
    CHECK(code_of([&] { store.get("tink", 7); }) == ErrorCode::NotFound);
    CHECK(code_of([&] { store.get("../etc"); }) == ErrorCode::NotFound);
}

TEST_CASE("invalid profiles are never stored") {
    TempDir dir;
    ProfileStore store(dir.path(), builtin_catalog());
    auto p = testing::fixture_profile("tink.profile.json");
    p.assessments.push_back(p.assessments.front());
    CHECK(code_of([&] { store.save(p); }) == ErrorCode::DuplicateCriterion);
    CHECK(store.list().empty());
}

TEST_CASE("expected revision guards against lost updates") {
    TempDir dir;
    ProfileStore store(dir.path(), builtin_catalog());
    auto p = testing::fixture_profile("bouncy-castle.profile.json");
    CHECK(store.save(p, {.expected_revision = 0}).revision == 1);
    p.assessments.front().note = "second pass";
    try {
        store.save(p, {.expected_revision = 0});
        FAIL("expected WRITE_CONFLICT");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::WriteConflict);
        CHECK(e.retryable());
    }
    CHECK(store.save(p, {.expected_revision = 1}).revision == 2);
}

TEST_CASE("a competing writer that published the same revision produces WRITE_CONFLICT") {
    TempDir dir;
    ProfileStore store(dir.path(), builtin_catalog());
    auto p = testing::fixture_profile("tink.profile.json");
    store.save(p);
    // another process raced us to revision 2 behind our back
    ProfileStore other(dir.path(), builtin_catalog());
    auto q = p;
    q.assessments.front().note = "other";
    CHECK(other.save(q).revision == 2);
    p.assessments.front().note = "mine";
    CHECK(store.save(p).revision == 3);
}

TEST_CASE("tampered revisions are detected") {
    TempDir dir;
    ProfileStore store(dir.path(), builtin_catalog());
    store.save(testing::fixture_profile("tink.profile.json"));
    const auto file = dir.path() / "profiles" / "tink" / "1.json";
    auto doc = parse_json(read_file(file.string()));
    doc["profile"]["library"]["version"] = "9.9";
    std::filesystem::permissions(file, std::filesystem::perms::owner_write, std::filesystem::perm_options::add);
    std::ofstream(file) << doc.dump();
    CHECK(code_of([&] { store.get("tink"); }) == ErrorCode::Internal);
}

TEST_CASE("list is sorted by name and survives reopening") {
    TempDir dir;
    {
        ProfileStore store(dir.path(), builtin_catalog());
        store.save(testing::fixture_profile("tink.profile.json"));
        store.save(testing::fixture_profile("bouncy-castle.profile.json"));
    }
    ProfileStore reopened(dir.path(), builtin_catalog());
    const auto list = reopened.list();
    REQUIRE(list.size() == 2);
    CHECK(list[0].name == "Bouncy Castle");
    CHECK(list[1].library_id == "tink");
    CHECK(list[1].latest_revision == 1);
}

TEST_CASE("concurrent saves produce a gap-free revision sequence") {
    TempDir dir;
    ProfileStore store(dir.path(), builtin_catalog());
    const auto base = testing::fixture_profile("tink.profile.json");
    std::vector<std::thread> threads;
    for (int t = 0; t < 8; ++t) {
        threads.emplace_back([&, t] {
            for (int i = 0; i < 5; ++i) {
                auto p = base;
                p.assessments.front().note = "writer " + std::to_string(t) + " pass " + std::to_string(i);
                store.save(p);
            }
        });
    }
    for (auto& th : threads) th.join();
    const auto revs = store.revisions("tink");
    REQUIRE(revs.size() == 40);
    for (int i = 0; i < 40; ++i) CHECK(revs[i] == i + 1);
    for (int r = 2; r <= 40; ++r) {
        CHECK(store.get("tink", r).previous_hash == store.get("tink", r - 1).content_hash);
    }
}

TEST_CASE("random profiles round-trip through the store") {
    TempDir dir;
    ProfileStore store(dir.path(), builtin_catalog());
    std::mt19937_64 rng(5);
    for (int i = 0; i < 60; ++i) {
        const auto p = testing::random_profile(builtin_catalog(), rng, "Lib " + std::to_string(i));
        const auto saved = store.save(p);
        CHECK(store.get(saved.library_id).profile == p);
    }
}
