#pragma once

#include <memory>
#include <optional>
#include <string>

#include "json.hpp"
#include "libdex/catalog.hpp"
#include "libdex/store.hpp"
#include "libdex/weighting.hpp"

namespace httplib {
class Server;
}

namespace libdex {

inline constexpr const char* kEngineVersion = "1.0.0";

struct ServiceConfig {
    std::string host = "127.0.0.1";
    int port = 8080;
    /// LIBDEX_STORE; empty means "./libdex-store".
    std::string store_path;
    /// LIBDEX_EVIDENCE: directory with literature/interviews/questionnaire.json; empty uses the built-in evidence.
    std::string evidence_dir;
    /// LIBDEX_REFERENCE: expected weights file checked against the derivation; empty uses the built-in vector.
    std::string expected_weights_path;
    /// LIBDEX_STATIC: directory served under "/" (web client build output).
    std::string static_dir;

    /// Reads LIBDEX_ADDR (host:port), LIBDEX_STORE, LIBDEX_EVIDENCE, LIBDEX_REFERENCE, LIBDEX_STATIC.
    static ServiceConfig from_env();
    void set_address(const std::string& address);
    std::string resolved_store_path() const;
};

/// Derives the reference weights from the configured evidence and verifies them against the expected vector.
Derivation load_reference(const ServiceConfig& config, const Catalog& catalog);

/// Request handlers shared by the HTTP server and the CLI. Stateless apart from the store.
class Api {
public:
    Api(const Catalog& catalog, Derivation reference, std::shared_ptr<ProfileStore> store);

    nlohmann::json catalog() const;
    nlohmann::json libraries() const;
    nlohmann::json library(const std::string& library_id, std::optional<int> revision) const;
    nlohmann::json reference_weights() const;
    nlohmann::json score(const nlohmann::json& request) const;
    nlohmann::json rank(const nlohmann::json& request) const;
    nlohmann::json whatif(const nlohmann::json& request) const;
    nlohmann::json rebalance(const nlohmann::json& request) const;

    /// Adds engine_version and catalog_version to a response object.
    nlohmann::json envelope(nlohmann::json body) const;

    const Catalog& catalog_ref() const noexcept { return catalog_; }
    const Derivation& reference() const noexcept { return reference_; }

private:
    LibraryProfile resolve_profile(const nlohmann::json& ref) const;
    WeightVector request_weights(const nlohmann::json& request) const;

    const Catalog& catalog_;
    Derivation reference_;
    std::shared_ptr<ProfileStore> store_;
};

/// HTTP front end over Api. Requests are served concurrently from httplib's thread pool.
class Service {
public:
    explicit Service(ServiceConfig config, const Catalog& catalog = builtin_catalog());
    ~Service();

    Service(const Service&) = delete;
    Service& operator=(const Service&) = delete;

    /// Binds the configured address (port 0 picks a free port) and returns the bound port.
    int bind();
    /// Blocks serving requests until stop() is called.
    void run();
    void stop();
    void wait_until_ready() const;

    Api& api() noexcept { return *api_; }

private:
    void install_routes();

    ServiceConfig config_;
    std::unique_ptr<Api> api_;
    std::unique_ptr<httplib::Server> server_;
};

}  // namespace libdex
