// One PASS/FAIL line per acceptance criterion. Exit status is the number of failures.

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <thread>

#include "httplib.h"
#include "libdex/interchange.hpp"
#include "libdex/report.hpp"
#include "libdex/service.hpp"
#include "libdex/store.hpp"
#include "test_support.hpp"

using namespace libdex;
using nlohmann::json;

namespace {

struct Check {
    bool ok = true;
    std::ostringstream why;

    template <typename... Args>
    void require(bool condition, Args&&... detail) {
        if (!condition && ok) {
            ok = false;
            (why << ... << detail);
        }
    }
};

int failures = 0;

void criterion(const std::string& name, const std::function<std::string(Check&)>& body) {
    Check check;
    std::string summary;
    try {
        summary = body(check);
    } catch (const std::exception& e) {
        check.require(false, "exception: ", e.what());
    }
    if (check.ok) {
        std::cout << "PASS " << name << (summary.empty() ? "" : " (" + summary + ")") << "\n";
    } else {
        ++failures;
        std::cout << "FAIL " << name << ": " << check.why.str() << "\n";
    }
    std::cout.flush();
}

AttributeId A(int v) { return AttributeId{v}; }

std::string run_command(const std::string& command, int* status) {
    std::string output;
    FILE* pipe = ::popen(command.c_str(), "r");
    if (!pipe) throw std::runtime_error("popen failed");
    char buffer[4096];
    while (std::size_t n = std::fread(buffer, 1, sizeof buffer, pipe)) output.append(buffer, n);
    *status = ::pclose(pipe);
    return output;
}

std::string quoted(const std::string& s) { return "'" + s + "'"; }

// Sort, then give each run of equal values the mean of the 1-based positions it spans.
std::map<AttributeId, Rational> position_average_oracle(const std::map<AttributeId, Rational>& values) {
    std::vector<std::pair<Rational, AttributeId>> sorted;
    for (const auto& [id, v] : values) sorted.emplace_back(v, id);
    std::sort(sorted.begin(), sorted.end());
    std::map<AttributeId, Rational> out;
    for (std::size_t i = 0; i < sorted.size();) {
        std::size_t j = i;
        while (j < sorted.size() && sorted[j].first == sorted[i].first) ++j;
        Rational position_sum = 0;
        for (std::size_t k = i; k < j; ++k) position_sum += static_cast<long long>(k + 1);
        for (std::size_t k = i; k < j; ++k) out[sorted[k].second] = position_sum / static_cast<long long>(j - i);
        i = j;
    }
    return out;
}

// Floating-point total computed straight from the assessments, with one weight overridden.
double float_total(const Catalog& catalog, const LibraryProfile& p, const WeightVector& w, AttributeId varied,
                   double g) {
    std::map<AttributeId, std::pair<double, int>> acc;
    for (const auto& a : p.assessments) {
        auto& slot = acc[catalog.criterion(a.criterion_id).attribute_id];
        slot.first += to_double(a.rating.value());
        slot.second += 1;
    }
    double total = 0;
    for (const auto& [id, s] : acc) {
        total += s.first / s.second * (id == varied ? g : to_double(w.at(id)));
    }
    return total;
}

const std::vector<std::string> kColumnVI{"14.00", "7.83",  "10.00", "6.83", "8.33", "7.67", "10.17", "8.50",
                                         "6.17",  "9.33",  "8.83",  "7.83", "6.67", "9.33", "12.83"};
const std::vector<std::string> kColumnVII{"15", "5.5", "12", "3", "7", "4", "13", "8",
                                          "1",  "10.5", "9", "5.5", "2", "10.5", "14"};
const std::vector<std::string> kColumnVIII{"1.5", "0.75", "1.25", "0.5", "1.0", "0.75", "1.5", "1.0",
                                           "0.5", "1.25", "1.0",  "0.75", "0.5", "1.25", "1.5"};
const std::vector<std::string> kColumnIII{"15", "6.5", "14", "8", "10.5", "10.5", "10.5", "2.5",
                                          "2.5", "13", "2.5", "2.5", "6.5", "5", "10.5"};
const std::vector<long long> kLiteratureCounts{33, 2, 9, 3, 4, 4, 4, 0, 0, 8, 0, 0, 2, 1, 4};

const std::vector<std::string> kBouncyMeans{"0.33", "0.00", "1.00", "2.00", "1.00", "2.00", "-0.67", "2.00",
                                            "1.00", "0.50", "0.33", "1.00", "-",    "-0.50", "-0.50"};
const std::vector<std::string> kTinkMeans{"1.00", "0.00", "0.50", "2.00", "2.00", "2.00", "1.67", "2.00",
                                          "2.00", "1.00", "0.00", "0.50", "-",    "0.00", "2.00"};

constexpr int kPropertyCases = 500;

}  // namespace

int main() {
    const auto& catalog = builtin_catalog();
    const std::string cli = LIBDEX_CLI_PATH;

    criterion("reference weights derived from the shipped evidence", [&](Check& c) {
        const auto start = std::chrono::steady_clock::now();
        int status = 0;
        const auto out = run_command(quoted(cli) + " weights derive --evidence " +
                                         quoted(testing::fixture("evidence/literature.json")) + " " +
                                         quoted(testing::fixture("evidence/interviews.json")) + " " +
                                         quoted(testing::fixture("evidence/questionnaire.json")) + " 2>/dev/null",
                                     &status);
        const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        c.require(status == 0, "CLI exit status ", status);
        const auto doc = json::parse(out);
        const auto weights = weights_from_json(doc);
        Rational sum = 0;
        for (int i = 1; i <= 15; ++i) {
            const auto key = std::to_string(i);
            c.require(weights.at(A(i)) == parse_rational(kColumnVIII[i - 1]), "weight ", i, " = ",
                      to_exact_string(weights.at(A(i))));
            c.require(to_fixed(rational_from_json(doc.at("trace").at("averages").at(key)), 2) == kColumnVI[i - 1],
                      "average ", i);
            c.require(rational_from_json(doc.at("trace").at("total_ranks").at(key)) ==
                          parse_rational(kColumnVII[i - 1]),
                      "total rank ", i);
            sum += weights.at(A(i));
        }
        c.require(sum == 15, "sum ", to_exact_string(sum));
        c.require(seconds < 1.0, "took ", seconds, " s");
        std::ostringstream s;
        s << "sum " << to_exact_string(sum) << ", " << static_cast<int>(seconds * 1000) << " ms";
        return s.str();
    });

    criterion("index values for the reference libraries", [&](Check& c) {
        const auto bc = compute_index(catalog, testing::fixture_profile("bouncy-castle.profile.json"),
                                      testing::reference_weights());
        const auto tink =
            compute_index(catalog, testing::fixture_profile("tink.profile.json"), testing::reference_weights());
        c.require(std::abs(to_double(bc.total) - 7.0833) < 0.005, "bouncy castle ", to_exact_string(bc.total));
        c.require(std::abs(to_double(tink.total) - 16.75) < 0.005, "tink ", to_exact_string(tink.total));
        c.require(display(bc.total) == "7.08" && display(tink.total) == "16.75", "display");
        for (int i = 1; i <= 15; ++i) {
            const auto& b = bc.row(A(i));
            const auto& t = tink.row(A(i));
            c.require((b.mean ? to_fixed(*b.mean, 2) : "-") == kBouncyMeans[i - 1], "bouncy castle mean ", i);
            c.require((t.mean ? to_fixed(*t.mean, 2) : "-") == kTinkMeans[i - 1], "tink mean ", i);
        }
        return to_exact_string(bc.total) + " -> " + display(bc.total) + ", " + to_exact_string(tink.total) + " -> " +
               display(tink.total);
    });

    criterion("achievable bounds under the reference weights", [&](Check& c) {
        for (const char* name : {"bouncy-castle.profile.json", "tink.profile.json"}) {
            const auto [lo, hi] =
                achievable_bounds(catalog, testing::fixture_profile(name), testing::reference_weights());
            c.require(lo == -29 && hi == 29, name, " bounds ", to_exact_string(lo), "..", to_exact_string(hi));
        }
        return "(-29, 29)";
    });

    criterion("mean-rank method against a position-averaging oracle", [&](Check& c) {
        MentionCounts literature;
        for (int i = 1; i <= 15; ++i) literature[A(i)] = kLiteratureCounts[i - 1];
        const auto ranks = mean_ranks(literature);
        for (int i = 1; i <= 15; ++i) {
            c.require(ranks.ranks.at(A(i)) == parse_rational(kColumnIII[i - 1]), "literature rank ", i);
        }
        std::mt19937_64 rng(20211028);
        for (int trial = 0; trial < 1000; ++trial) {
            const int n = std::uniform_int_distribution<int>(3, 20)(rng);
            const long long spread = std::uniform_int_distribution<long long>(1, 40)(rng);
            MentionCounts counts;
            std::map<AttributeId, Rational> as_rational;
            for (int i = 1; i <= n; ++i) {
                counts[A(i)] = std::uniform_int_distribution<long long>(0, spread)(rng);
                as_rational[A(i)] = counts[A(i)];
            }
            const auto got = mean_ranks(counts);
            c.require(got.ranks == position_average_oracle(as_rational), "trial ", trial);
            c.require(got.sum() == Rational(n * (n + 1), 2), "rank sum in trial ", trial);
        }
        return "1000 random vectors";
    });

    criterion("property suite", [&](Check& c) {
        std::mt19937_64 rng(42);
        std::uniform_int_distribution<int> nprof(2, 5);

        // ranking order is unchanged when every weight is multiplied by the same positive factor
        for (int t = 0; t < kPropertyCases; ++t) {
            std::vector<LibraryProfile> profiles;
            for (int k = nprof(rng); k > 0; --k) {
                profiles.push_back(testing::random_profile(catalog, rng, "L" + std::to_string(k)));
            }
            const auto w = testing::random_weights(catalog, rng);
            const Rational factor(std::uniform_int_distribution<int>(1, 50)(rng),
                                  std::uniform_int_distribution<int>(1, 50)(rng));
            WeightVector scaled = w;
            for (auto& [id, v] : scaled.weights) v *= factor;
            for (std::size_t i = 0; i < profiles.size(); ++i) {
                for (std::size_t j = 0; j < profiles.size(); ++j) {
                    const auto a = compute_index(catalog, profiles[i], w).total;
                    const auto b = compute_index(catalog, profiles[j], w).total;
                    const auto sa = compute_index(catalog, profiles[i], scaled, {false}).total;
                    const auto sb = compute_index(catalog, profiles[j], scaled, {false}).total;
                    c.require((a < b) == (sa < sb) && (a == b) == (sa == sb), "scaling case ", t);
                }
            }
        }

        for (int t = 0; t < kPropertyCases; ++t) {
            auto p = testing::random_profile(catalog, rng, "P");
            const auto w = testing::random_weights(catalog, rng);
            const auto base = compute_index(catalog, p, w);

            // assessment order does not matter
            auto shuffled = p;
            std::shuffle(shuffled.assessments.begin(), shuffled.assessments.end(), rng);
            const auto again = compute_index(catalog, shuffled, w);
            c.require(again.total == base.total, "permutation case ", t);
            for (std::size_t r = 0; r < base.rows.size(); ++r) {
                c.require(again.rows[r].mean == base.rows[r].mean, "permutation row ", r, " case ", t);
            }

            // totals stay inside the achievable range
            c.require(abs(base.total) <= base.achievable_max, "bound case ", t);

            // raising a single rating never lowers the total
            if (!p.assessments.empty()) {
                auto& target =
                    p.assessments[std::uniform_int_distribution<std::size_t>(0, p.assessments.size() - 1)(rng)];
                const auto [lo, hi] = testing::rating_interval(catalog.criterion(target.criterion_id));
                const Rational old = target.rating.value();
                const Rational raised = old + (hi - old) * Rational(std::uniform_int_distribution<int>(0, 4)(rng), 4);
                target.rating = Rating(raised);
                target.note = "raised";
                const auto after = compute_index(catalog, p, w).total;
                c.require(after >= base.total, "monotonicity case ", t);
                const auto weight = w.at(catalog.criterion(target.criterion_id).attribute_id);
                c.require(raised == old || weight == 0 || after > base.total, "strict monotonicity case ", t);
            }
        }

        // rebalance is idempotent and keeps ratios among free weights
        for (int t = 0; t < kPropertyCases; ++t) {
            auto w = testing::random_weights(catalog, rng);
            std::set<AttributeId> pinned;
            Rational pinned_sum = 0;
            for (auto id : catalog.attribute_ids()) {
                if (std::uniform_int_distribution<int>(0, 3)(rng) == 0) {
                    const Rational v(std::uniform_int_distribution<int>(0, 12)(rng), 4);
                    if (pinned_sum + v < 15) {
                        w.weights[id] = v;
                        pinned.insert(id);
                        pinned_sum += v;
                    }
                }
            }
            const auto r = rebalance_weights(w, pinned);
            c.require(r.sum() == 15, "rebalance sum case ", t);
            c.require(rebalance_weights(r, pinned) == r, "idempotence case ", t);
            for (auto id : pinned) c.require(r.at(id) == w.at(id), "pinned value case ", t);
            for (auto i : catalog.attribute_ids()) {
                for (auto j : catalog.attribute_ids()) {
                    if (pinned.count(i) || pinned.count(j)) continue;
                    Rational free_sum = 0;
                    for (auto k : catalog.attribute_ids()) {
                        if (!pinned.count(k)) free_sum += w.at(k);
                    }
                    if (free_sum == 0) continue;
                    c.require(w.at(i) * r.at(j) == w.at(j) * r.at(i), "ratio case ", t);
                }
            }
        }

        // store round-trip
        testing::TempDir dir;
        ProfileStore store(dir.path(), catalog);
        for (int t = 0; t < kPropertyCases; ++t) {
            const auto p = testing::random_profile(catalog, rng, "Store Lib " + std::to_string(t % 50));
            const auto saved = store.save(p);
            const auto loaded = store.get(saved.library_id);
            c.require(loaded.profile == p, "store case ", t);
            c.require(loaded.content_hash == content_hash(p), "store hash case ", t);
        }
        return std::to_string(kPropertyCases) + " cases per property";
    });

    criterion("weight sensitivity against a brute-force sweep", [&](Check& c) {
        std::mt19937_64 rng(7);
        int with_crossing = 0;
        for (int t = 0; t < 200; ++t) {
            const auto a = testing::random_profile(catalog, rng, "A", 0.6);
            const auto b = testing::random_profile(catalog, rng, "B", 0.6);
            const auto w = testing::random_weights(catalog, rng);
            const auto ids = catalog.attribute_ids();
            const auto attr = ids[std::uniform_int_distribution<std::size_t>(0, ids.size() - 1)(rng)];
            const int lo_milli = std::uniform_int_distribution<int>(0, 1000)(rng);
            const int hi_milli = lo_milli + std::uniform_int_distribution<int>(500, 3000)(rng);
            const auto result =
                weight_sensitivity(catalog, a, b, w, attr, Rational(lo_milli, 1000), Rational(hi_milli, 1000));

            std::vector<double> found;
            double prev_delta = 0;
            for (int k = lo_milli; k <= hi_milli; ++k) {
                const double g = k / 1000.0;
                double delta = float_total(catalog, a, w, attr, g) - float_total(catalog, b, w, attr, g);
                if (std::abs(delta) < 1e-9) delta = 0;
                if (k > lo_milli && ((prev_delta < 0 && delta > 0) || (prev_delta > 0 && delta < 0))) {
                    found.push_back(g - 0.0005);
                } else if (delta == 0 && (k == lo_milli || prev_delta != 0)) {
                    // an exact touch counts once, unless the two libraries tie over the whole sweep
                    const double next = float_total(catalog, a, w, attr, g + 0.001) -
                                        float_total(catalog, b, w, attr, g + 0.001);
                    if (std::abs(next) >= 1e-9 || prev_delta != 0) found.push_back(g);
                }
                prev_delta = delta;
            }
            c.require(found.size() == result.crossovers.size(), "pair ", t, ": sweep found ", found.size(),
                      ", analytic ", result.crossovers.size());
            if (found.size() == result.crossovers.size()) {
                for (std::size_t i = 0; i < found.size(); ++i) {
                    c.require(std::abs(found[i] - to_double(result.crossovers[i].g_value)) <= 2e-3, "pair ", t,
                              ": ", found[i], " vs ", to_double(result.crossovers[i].g_value));
                }
            }
            with_crossing += result.crossovers.empty() ? 0 : 1;
        }
        return "200 pairs, " + std::to_string(with_crossing) + " with a crossover";
    });

    criterion("CLI and HTTP API return identical totals", [&](Check& c) {
        testing::TempDir dir;
        ServiceConfig config;
        config.port = 0;
        config.store_path = (dir.path() / "store").string();
        Service service(config, catalog);
        const int port = service.bind();
        std::thread server([&] { service.run(); });
        service.wait_until_ready();
        httplib::Client client("127.0.0.1", port);

        std::mt19937_64 rng(50);
        for (int t = 0; t < 50; ++t) {
            const auto p = testing::random_profile(catalog, rng, "Parity " + std::to_string(t));
            const auto w = testing::random_weights(catalog, rng);
            const auto profile_path = (dir.path() / ("p" + std::to_string(t) + ".json")).string();
            const auto weights_path = (dir.path() / ("w" + std::to_string(t) + ".json")).string();
            write_file_atomic(profile_path, canonical_dump(profile_to_json(p)));
            write_file_atomic(weights_path, canonical_dump(weights_document(w, catalog.version())));

            int status = 0;
            const auto out = run_command(quoted(cli) + " score " + quoted(profile_path) + " --weights " +
                                             quoted(weights_path) + " --format json 2>/dev/null",
                                         &status);
            c.require(status == 0, "CLI exit status ", status, " for input ", t);
            const auto cli_total = json::parse(out).at("total_exact").get<std::string>();

            const json request{{"profile", profile_to_json(p)}, {"weights", weights_document(w, catalog.version())}};
            auto res = client.Post("/api/score", request.dump(), "application/json");
            c.require(res && res->status == 200, "HTTP request failed for input ", t);
            if (!res || res->status != 200) continue;
            const auto api_total = json::parse(res->body).at("report").at("total_exact").get<std::string>();
            c.require(cli_total == api_total, "input ", t, ": CLI ", cli_total, " API ", api_total);
            c.require(parse_rational(cli_total) == testing::index_oracle(catalog, p, w), "oracle mismatch ", t);
        }
        service.stop();
        server.join();
        return "50 inputs";
    });

    std::cout << (failures == 0 ? "ALL PASS" : std::to_string(failures) + " FAILED") << "\n";
    return failures == 0 ? 0 : 1;
}
