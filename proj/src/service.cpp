#include "libdex/service.hpp"

#include <cstdlib>

#include "httplib.h"
#include "libdex/interchange.hpp"
#include "libdex/report.hpp"

namespace libdex {

namespace {

std::string env_or(const char* name, std::string fallback) {
    const char* value = std::getenv(name);
    return value && *value ? std::string(value) : std::move(fallback);
}

Rational range_bound(const nlohmann::json& value) {
    return rational_from_json(value);
}

AttributeId request_attribute(const Catalog& catalog, const nlohmann::json& value) {
    if (value.is_number_integer()) {
        return catalog.attribute(AttributeId{value.get<int>()}).id;
    }
    if (value.is_string()) {
        return catalog.resolve_attribute(value.get<std::string>());
    }
    throw Error(ErrorCode::Parse, "attribute must be an id or a name");
}

const nlohmann::json& field(const nlohmann::json& request, const char* key) {
    if (!request.is_object() || !request.contains(key)) {
        throw Error(ErrorCode::MissingKey, std::string("request is missing '") + key + "'", {{"key", key}});
    }
    return request.at(key);
}

}  // namespace

ServiceConfig ServiceConfig::from_env() {
    ServiceConfig config;
    config.set_address(env_or("LIBDEX_ADDR", "127.0.0.1:8080"));
    config.store_path = env_or("LIBDEX_STORE", "");
    config.evidence_dir = env_or("LIBDEX_EVIDENCE", "");
    config.expected_weights_path = env_or("LIBDEX_REFERENCE", "");
    config.static_dir = env_or("LIBDEX_STATIC", "");
    return config;
}

void ServiceConfig::set_address(const std::string& address) {
    const auto colon = address.rfind(':');
    if (colon == std::string::npos) {
        throw Error(ErrorCode::Usage, "address must look like host:port, got '" + address + "'");
    }
    try {
        port = std::stoi(address.substr(colon + 1));
    } catch (const std::exception&) {
        throw Error(ErrorCode::Usage, "bad port in address '" + address + "'");
    }
    host = address.substr(0, colon);
}

std::string ServiceConfig::resolved_store_path() const {
    return store_path.empty() ? std::string("libdex-store") : store_path;
}

Derivation load_reference(const ServiceConfig& config, const Catalog& catalog) {
    Derivation derivation;
    if (config.evidence_dir.empty()) {
        derivation = derive_reference_weights(builtin_reference_evidence());
    } else {
        std::vector<EvidenceSource> sources;
        for (const char* name : {"literature.json", "interviews.json", "questionnaire.json"}) {
            const auto path = config.evidence_dir + "/" + name;
            sources.push_back(evidence_from_json(parse_json(read_file(path), path), &catalog));
        }
        derivation = derive_reference_weights(sources);
    }
    const WeightVector expected = config.expected_weights_path.empty()
                                      ? expected_reference_weights()
                                      : weights_from_json(parse_json(read_file(config.expected_weights_path),
                                                                     config.expected_weights_path));
    if (derivation.weights != expected) {
        throw Error(ErrorCode::Internal, "reference weights derived from the evidence differ from the expected vector",
                    {{"derived", weights_to_json_map(derivation.weights)}, {"expected", weights_to_json_map(expected)}});
    }
    return derivation;
}

Api::Api(const Catalog& catalog, Derivation reference, std::shared_ptr<ProfileStore> store)
    : catalog_(catalog), reference_(std::move(reference)), store_(std::move(store)) {}

nlohmann::json Api::envelope(nlohmann::json body) const {
    body["engine_version"] = kEngineVersion;
    body["catalog_version"] = catalog_.version();
    return body;
}

nlohmann::json Api::catalog() const {
    return envelope({{"catalog", catalog_to_json(catalog_)}});
}

nlohmann::json Api::libraries() const {
    nlohmann::json list = nlohmann::json::array();
    if (store_) {
        for (const auto& summary : store_->list()) {
            list.push_back(summary_to_json(summary));
        }
    }
    return envelope({{"libraries", list}});
}

nlohmann::json Api::library(const std::string& library_id, std::optional<int> revision) const {
    if (!store_) {
        throw Error(ErrorCode::NotFound, "no profile store configured");
    }
    return envelope({{"record", record_to_json(store_->get(library_id, revision))}});
}

nlohmann::json Api::reference_weights() const {
    return envelope(derivation_to_json(reference_, catalog_.version()));
}

LibraryProfile Api::resolve_profile(const nlohmann::json& ref) const {
    if (ref.is_string() || (ref.is_object() && ref.contains("library_id"))) {
        if (!store_) {
            throw Error(ErrorCode::NotFound, "no profile store configured");
        }
        if (ref.is_string()) {
            return store_->get(ref.get<std::string>()).profile;
        }
        std::optional<int> revision;
        if (ref.contains("revision") && !ref.at("revision").is_null()) {
            revision = ref.at("revision").get<int>();
        }
        return store_->get(ref.at("library_id").get<std::string>(), revision).profile;
    }
    if (ref.is_object()) {
        return load_profile_json(ref, catalog_).profile;
    }
    throw Error(ErrorCode::Parse, "expected a library id or an inline profile");
}

WeightVector Api::request_weights(const nlohmann::json& request) const {
    if (request.is_object() && request.contains("weights") && !request.at("weights").is_null()) {
        return weights_from_json(request.at("weights"));
    }
    return reference_.weights;
}

nlohmann::json Api::score(const nlohmann::json& request) const {
    LibraryProfile profile;
    if (request.is_object() && request.contains("profile")) {
        profile = resolve_profile(request.at("profile"));
    } else if (request.is_object() && request.contains("library_id")) {
        profile = resolve_profile(request);
    } else {
        throw Error(ErrorCode::MissingKey, "score request needs 'library_id' or 'profile'", {{"key", "library_id"}});
    }
    const auto report = compute_index(catalog_, profile, request_weights(request));
    return envelope({{"report", report_to_json(report)}});
}

nlohmann::json Api::rank(const nlohmann::json& request) const {
    std::vector<LibraryProfile> profiles;
    if (request.is_object() && request.contains("library_ids")) {
        for (const auto& id : request.at("library_ids")) {
            profiles.push_back(resolve_profile(id));
        }
    }
    if (request.is_object() && request.contains("profiles")) {
        for (const auto& p : request.at("profiles")) {
            profiles.push_back(resolve_profile(p));
        }
    }
    const auto reports = rank_libraries(catalog_, profiles, request_weights(request));
    nlohmann::json ranking = nlohmann::json::array();
    nlohmann::json full = nlohmann::json::array();
    for (std::size_t i = 0; i < reports.size(); ++i) {
        const auto& r = reports[i];
        ranking.push_back({{"position", i + 1},
                           {"library_id", r.library_id},
                           {"name", r.library.name},
                           {"version", r.library.version},
                           {"total", to_double(r.total)},
                           {"total_exact", to_exact_string(r.total)},
                           {"total_display", display(r.total)},
                           {"achievable_min", to_double(r.achievable_min)},
                           {"achievable_max", to_double(r.achievable_max)}});
        full.push_back(report_to_json(r));
    }
    return envelope({{"ranking", ranking}, {"reports", full}});
}

nlohmann::json Api::whatif(const nlohmann::json& request) const {
    const auto a = resolve_profile(field(request, "a"));
    const auto b = resolve_profile(field(request, "b"));
    const auto attribute = request_attribute(catalog_, field(request, "attribute"));
    Rational lo = 0;
    Rational hi = 3;
    if (request.contains("range")) {
        const auto& range = request.at("range");
        if (!range.is_array() || range.size() != 2) {
            throw Error(ErrorCode::BadRange, "range must be [lo, hi]");
        }
        lo = range_bound(range[0]);
        hi = range_bound(range[1]);
    }
    const auto result = weight_sensitivity(catalog_, a, b, request_weights(request), attribute, lo, hi);
    return envelope({{"whatif", sensitivity_to_json(result)}});
}

nlohmann::json Api::rebalance(const nlohmann::json& request) const {
    WeightVector weights = request_weights(request);
    std::set<AttributeId> pinned;
    if (request.contains("pinned")) {
        for (const auto& id : request.at("pinned")) {
            pinned.insert(request_attribute(catalog_, id));
        }
    }
    if (request.contains("pin")) {
        for (const auto& [key, value] : request.at("pin").items()) {
            const auto id = catalog_.resolve_attribute(key);
            weights.weights[id] = rational_from_json(value);
            pinned.insert(id);
        }
    }
    require_valid_weights(weights, catalog_, Rational(static_cast<long long>(1) << 62));
    const auto balanced = rebalance_weights(weights, pinned);
    nlohmann::json pinned_ids = nlohmann::json::array();
    for (auto id : pinned) {
        pinned_ids.push_back(id.value);
    }
    auto body = weights_document(balanced, catalog_.version());
    body["pinned"] = pinned_ids;
    body["sum_display"] = display(balanced.sum());
    return envelope(std::move(body));
}

Service::Service(ServiceConfig config, const Catalog& catalog)
    : config_(std::move(config)), server_(std::make_unique<httplib::Server>()) {
    auto store = std::make_shared<ProfileStore>(config_.resolved_store_path(), catalog);
    store->list();  // fail fast on an unreadable store
    api_ = std::make_unique<Api>(catalog, load_reference(config_, catalog), std::move(store));
    install_routes();
}

Service::~Service() {
    stop();
}

void Service::install_routes() {
    auto& server = *server_;
    const Api& api = *api_;

    auto respond = [this](httplib::Response& res, auto&& body) {
        try {
            res.set_content(canonical_dump(body()), "application/json");
        } catch (const Error& e) {
            res.status = http_status(e.code());
            res.set_content(canonical_dump(api_->envelope({{"error", e.to_json()}})), "application/json");
        } catch (const nlohmann::json::exception& e) {
            res.status = 400;
            res.set_content(canonical_dump(api_->envelope({{"error", Error(ErrorCode::Parse, e.what()).to_json()}})),
                            "application/json");
        } catch (const std::exception& e) {
            res.status = 500;
            res.set_content(
                canonical_dump(api_->envelope({{"error", Error(ErrorCode::Internal, e.what()).to_json()}})),
                "application/json");
        }
    };
    auto body_of = [](const httplib::Request& req) { return parse_json(req.body, "request body"); };

    server.Get("/api/catalog", [=, &api](const httplib::Request&, httplib::Response& res) {
        respond(res, [&] { return api.catalog(); });
    });
    server.Get("/api/libraries", [=, &api](const httplib::Request&, httplib::Response& res) {
        respond(res, [&] { return api.libraries(); });
    });
    server.Get(R"(/api/libraries/([A-Za-z0-9\-]+))", [=, &api](const httplib::Request& req, httplib::Response& res) {
        respond(res, [&] {
            std::optional<int> revision;
            if (req.has_param("revision")) {
                try {
                    revision = std::stoi(req.get_param_value("revision"));
                } catch (const std::exception&) {
                    throw Error(ErrorCode::Parse, "revision must be an integer");
                }
            }
            return api.library(req.matches[1], revision);
        });
    });
    server.Get("/api/weights/reference", [=, &api](const httplib::Request&, httplib::Response& res) {
        respond(res, [&] { return api.reference_weights(); });
    });
    server.Post("/api/score", [=, &api](const httplib::Request& req, httplib::Response& res) {
        respond(res, [&] { return api.score(body_of(req)); });
    });
    server.Post("/api/rank", [=, &api](const httplib::Request& req, httplib::Response& res) {
        respond(res, [&] { return api.rank(body_of(req)); });
    });
    server.Post("/api/whatif", [=, &api](const httplib::Request& req, httplib::Response& res) {
        respond(res, [&] { return api.whatif(body_of(req)); });
    });
    server.Post("/api/weights/rebalance", [=, &api](const httplib::Request& req, httplib::Response& res) {
        respond(res, [&] { return api.rebalance(body_of(req)); });
    });
    if (!config_.static_dir.empty()) {
        server.set_mount_point("/", config_.static_dir);
    }
}

int Service::bind() {
    int port = config_.port;
    if (port == 0) {
        port = server_->bind_to_any_port(config_.host);
    } else if (!server_->bind_to_port(config_.host, port)) {
        port = -1;
    }
    if (port < 0) {
        throw Error(ErrorCode::Internal, "cannot bind " + config_.host + ":" + std::to_string(config_.port));
    }
    config_.port = port;
    return port;
}

void Service::run() {
    server_->listen_after_bind();
}

void Service::stop() {
    if (server_) {
        server_->stop();
    }
}

void Service::wait_until_ready() const {
    server_->wait_until_ready();
}

}  // namespace libdex
