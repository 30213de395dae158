#include "libdex/cli.hpp"

#include <algorithm>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "libdex/interchange.hpp"
#include "libdex/report.hpp"
#include "libdex/service.hpp"
#include "libdex/store.hpp"

namespace libdex {

namespace {

struct Options {
    // score / rank / whatif
    std::vector<std::string> profiles;
    std::string weights_file;
    std::string format = "text";
    std::string profile_a;
    std::string profile_b;
    std::string attribute;
    std::string range = "0:3";
    // weights
    std::vector<std::string> evidence_files;
    std::string out_file;
    std::string validate_file;
    std::vector<std::string> pins;
    // store
    std::string store_dir;
    std::string library_id;
    std::optional<int> revision;
    bool force = false;
    std::string grades_file;
    std::string into;
    // serve
    std::string address;
    std::string evidence_dir;
    std::string static_dir;
};

const Catalog& catalog() {
    return builtin_catalog();
}

nlohmann::json load_json_file(const std::string& path) {
    return parse_json(read_file(path), path);
}

LibraryProfile load_profile_file(const std::string& path, std::ostream& err) {
    auto loaded = load_profile(read_file(path), catalog());
    for (const auto& w : loaded.warnings) {
        err << "warning: " << path << ": " << w << '\n';
    }
    return std::move(loaded.profile);
}

WeightVector weights_option(const Options& opt) {
    if (opt.weights_file.empty()) {
        return reference_derivation().weights;
    }
    return weights_from_json(load_json_file(opt.weights_file));
}

void emit(const Options& opt, const std::string& text, std::ostream& out) {
    if (opt.out_file.empty()) {
        out << text;
    } else {
        write_file_atomic(opt.out_file, text);
    }
}

std::string store_path(const Options& opt) {
    if (!opt.store_dir.empty()) {
        return opt.store_dir;
    }
    return ServiceConfig::from_env().resolved_store_path();
}

std::pair<Rational, Rational> parse_range(const std::string& text) {
    const auto colon = text.find(':');
    if (colon == std::string::npos) {
        throw Error(ErrorCode::Usage, "range must look like lo:hi, got '" + text + "'");
    }
    return {parse_rational(text.substr(0, colon)), parse_rational(text.substr(colon + 1))};
}

std::string text_report(const IndexReport& report) {
    std::ostringstream out;
    out << report.library.name;
    if (!report.library.version.empty()) {
        out << ' ' << report.library.version;
    }
    out << '\n';
    for (const auto& row : report.rows) {
        out << "  " << row.attribute_id.value << ' ' << row.name << ": "
            << (row.mean ? display_signed(*row.mean) : std::string("-")) << " x " << display(row.weight) << " = "
            << display(row.contribution) << " (m=" << row.assessed_count << ")\n";
    }
    out << "total " << display(report.total) << " (exact " << to_exact_string(report.total) << ")\n";
    out << "achievable " << display(report.achievable_min) << " .. " << display(report.achievable_max) << '\n';
    return out.str();
}

int cmd_catalog_show(std::ostream& out) {
    const auto& c = catalog();
    out << "catalog " << c.version() << " (" << c.size() << " attributes)\n";
    for (const auto& a : c.attributes()) {
        out << a.id.value << ". " << a.name << " - " << a.description << '\n';
        if (a.criteria.empty()) {
            out << "     (no evaluation criteria)\n";
        }
        for (const auto& cr : a.criteria) {
            out << "   " << cr.id << ' ' << cr.name << " [" << rubric_kind_name(cr.rubric.kind) << "]";
            if (cr.rubric.kind == RubricKind::EnumeratedAnchors) {
                out << ' ';
                for (std::size_t i = 0; i < cr.rubric.anchors.size(); ++i) {
                    out << (i ? ", " : "") << display_signed(cr.rubric.anchors[i].value) << ' '
                        << cr.rubric.anchors[i].label;
                }
            }
            out << '\n';
        }
    }
    return 0;
}

int cmd_score(const Options& opt, std::ostream& out, std::ostream& err) {
    const auto profile = load_profile_file(opt.profiles.front(), err);
    const auto report = compute_index(catalog(), profile, weights_option(opt));
    if (opt.format == "json") {
        out << canonical_dump(report_to_json(report));
    } else if (opt.format == "csv") {
        out << report_to_csv(report);
    } else if (opt.format == "md") {
        out << comparison_markdown(catalog(), {report});
    } else {
        out << text_report(report);
    }
    return 0;
}

int cmd_rank(const Options& opt, std::ostream& out, std::ostream& err) {
    std::vector<LibraryProfile> profiles;
    for (const auto& path : opt.profiles) {
        profiles.push_back(load_profile_file(path, err));
    }
    const auto reports = rank_libraries(catalog(), profiles, weights_option(opt));
    if (opt.format == "json") {
        nlohmann::json list = nlohmann::json::array();
        for (const auto& r : reports) {
            list.push_back(report_to_json(r));
        }
        out << canonical_dump({{"ranking", list}});
    } else if (opt.format == "md") {
        out << comparison_markdown(catalog(), reports);
    } else {
        for (std::size_t i = 0; i < reports.size(); ++i) {
            const auto& r = reports[i];
            out << i + 1 << ". " << r.library.name << ' ' << display(r.total) << " [" << display(r.achievable_min)
                << ", " << display(r.achievable_max) << "]\n";
        }
    }
    return 0;
}

int cmd_weights_derive(const Options& opt, std::ostream& out, std::ostream& err) {
    std::vector<EvidenceSource> sources;
    for (const auto& path : opt.evidence_files) {
        sources.push_back(evidence_from_json(load_json_file(path), &catalog()));
    }
    const auto derivation = derive_reference_weights(sources);
    for (const auto& w : derivation.trace.warnings) {
        err << "warning: " << w << '\n';
    }
    emit(opt, canonical_dump(derivation_to_json(derivation, catalog().version())), out);
    return 0;
}

int cmd_weights_validate(const Options& opt, std::ostream& out) {
    const auto weights = weights_from_json(load_json_file(opt.validate_file));
    require_valid_weights(weights, catalog());
    out << "ok: " << weights.n() << " weights, sum " << display(weights.sum()) << '\n';
    return 0;
}

int cmd_weights_rebalance(const Options& opt, std::ostream& out) {
    auto weights = weights_option(opt);
    std::set<AttributeId> pinned;
    for (const auto& pin : opt.pins) {
        const auto eq = pin.find('=');
        const auto id = catalog().resolve_attribute(pin.substr(0, eq));
        if (eq != std::string::npos) {
            weights.weights[id] = parse_rational(pin.substr(eq + 1));
        }
        pinned.insert(id);
    }
    require_valid_weights(weights, catalog(), Rational(static_cast<long long>(1) << 62));
    const auto balanced = rebalance_weights(weights, pinned);
    emit(opt, canonical_dump(weights_document(balanced, catalog().version())), out);
    return 0;
}

int cmd_whatif(const Options& opt, std::ostream& out, std::ostream& err) {
    const auto a = load_profile_file(opt.profile_a, err);
    const auto b = load_profile_file(opt.profile_b, err);
    const auto [lo, hi] = parse_range(opt.range);
    const auto attribute = catalog().resolve_attribute(opt.attribute);
    const auto result = weight_sensitivity(catalog(), a, b, weights_option(opt), attribute, lo, hi);
    if (opt.format == "json") {
        out << canonical_dump(sensitivity_to_json(result));
        return 0;
    }
    out << "varying weight of attribute " << attribute.value << " (" << catalog().attribute(attribute).name
        << ") over [" << display(lo) << ", " << display(hi) << "], other weights fixed (sum constraint relaxed)\n";
    out << "difference " << result.library_a << " - " << result.library_b << " = " << display(result.delta_at_zero)
        << " + " << display(result.slope) << " * g\n";
    if (result.crossovers.empty()) {
        out << "no crossover in range\n";
    }
    for (const auto& c : result.crossovers) {
        out << "crossover at g = " << display(c.g_value) << " (exact " << to_exact_string(c.g_value) << "): "
            << c.leader_before << " leads below, " << c.leader_after << " leads above\n";
    }
    return 0;
}

int cmd_store_list(const Options& opt, std::ostream& out) {
    ProfileStore store(store_path(opt), catalog());
    nlohmann::json list = nlohmann::json::array();
    for (const auto& s : store.list()) {
        list.push_back(summary_to_json(s));
    }
    out << canonical_dump({{"libraries", list}});
    return 0;
}

int cmd_store_get(const Options& opt, std::ostream& out) {
    ProfileStore store(store_path(opt), catalog());
    out << canonical_dump(record_to_json(store.get(opt.library_id, opt.revision)));
    return 0;
}

int cmd_store_put(const Options& opt, std::ostream& out, std::ostream& err) {
    ProfileStore store(store_path(opt), catalog());
    for (const auto& path : opt.profiles) {
        const auto record = store.save(load_profile_file(path, err), SaveOptions{opt.force, std::nullopt});
        out << record.library_id << " revision " << record.revision << ' ' << record.content_hash << '\n';
    }
    return 0;
}

int cmd_store_import_grades(const Options& opt, std::ostream& out) {
    const auto assessments = import_grade_report(read_file(opt.grades_file));
    if (opt.into.empty()) {
        nlohmann::json list = nlohmann::json::array();
        for (const auto& a : assessments) {
            list.push_back(nlohmann::json{{"criterion", a.criterion_id},
                                          {"rating", rational_to_json(a.rating.value())},
                                          {"note", a.note},
                                          {"assessor", a.assessor},
                                          {"assessed_at", a.assessed_at}});
        }
        out << canonical_dump({{"assessments", list}});
        return 0;
    }
    ProfileStore store(store_path(opt), catalog());
    const auto current = store.get(opt.into);
    const auto merged = merge_assessments(current.profile, assessments);
    const auto record = store.save(merged, SaveOptions{false, current.revision});
    out << record.library_id << " revision " << record.revision << ' ' << record.content_hash << '\n';
    return 0;
}

int cmd_serve(const Options& opt, std::ostream& out) {
    auto config = ServiceConfig::from_env();
    if (!opt.address.empty()) config.set_address(opt.address);
    if (!opt.store_dir.empty()) config.store_path = opt.store_dir;
    if (!opt.evidence_dir.empty()) config.evidence_dir = opt.evidence_dir;
    if (!opt.static_dir.empty()) config.static_dir = opt.static_dir;
    Service service(config);
    const int port = service.bind();
    out << "listening on " << config.host << ':' << port << std::endl;
    service.run();
    return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Weighted comparison index for software libraries", "libdex"};
    app.require_subcommand(1);
    Options opt;

    auto* cat = app.add_subcommand("catalog", "Show or export the attribute/criterion rubric");
    cat->require_subcommand(1);
    auto* cat_show = cat->add_subcommand("show", "Print the rubric");
    auto* cat_export = cat->add_subcommand("export", "Write canonical catalog.json");
    cat_export->add_option("--out", opt.out_file, "Output file (default: stdout)");

    auto* score = app.add_subcommand("score", "Compute the index for one profile");
    score->add_option("profile", opt.profiles, "Profile document")->required()->expected(1);
    score->add_option("--weights", opt.weights_file, "Weights file (default: reference weighting)");
    score->add_option("--format", opt.format, "Output format")->check(CLI::IsMember({"text", "json", "csv", "md"}));

    auto* rank = app.add_subcommand("rank", "Rank profiles by index");
    rank->add_option("profiles", opt.profiles, "Profile documents")->required();
    rank->add_option("--weights", opt.weights_file, "Weights file (default: reference weighting)");
    rank->add_option("--format", opt.format, "Output format")->check(CLI::IsMember({"text", "json", "md"}));

    auto* weights = app.add_subcommand("weights", "Derive, validate or rebalance weight vectors");
    weights->require_subcommand(1);
    auto* derive = weights->add_subcommand("derive", "Derive weights from ranked evidence sources");
    derive->add_option("--evidence", opt.evidence_files, "Evidence files")->required();
    derive->add_option("--out", opt.out_file, "Output file (default: stdout)");
    auto* validate = weights->add_subcommand("validate", "Check a weights file");
    validate->add_option("file", opt.validate_file, "Weights file")->required();
    auto* rebalance = weights->add_subcommand("rebalance", "Rescale unpinned weights so they sum to n");
    rebalance->add_option("--weights", opt.weights_file, "Weights file (default: reference weighting)");
    rebalance->add_option("--pin", opt.pins, "attr=value or attr");
    rebalance->add_option("--out", opt.out_file, "Output file (default: stdout)");

    auto* whatif = app.add_subcommand("whatif", "Find where varying one weight flips the order of two libraries");
    whatif->add_option("--a", opt.profile_a, "First profile")->required();
    whatif->add_option("--b", opt.profile_b, "Second profile")->required();
    whatif->add_option("--attr", opt.attribute, "Attribute id or name")->required();
    whatif->add_option("--range", opt.range, "lo:hi (default 0:3)");
    whatif->add_option("--weights", opt.weights_file, "Weights file (default: reference weighting)");
    whatif->add_option("--format", opt.format, "Output format")->check(CLI::IsMember({"text", "json"}));

    auto* store = app.add_subcommand("store", "Profile store");
    store->require_subcommand(1);
    store->add_option("--store", opt.store_dir, "Store directory (default: $LIBDEX_STORE or ./libdex-store)");
    auto* list = store->add_subcommand("list", "List stored libraries");
    auto* get = store->add_subcommand("get", "Print a stored profile record");
    get->add_option("library_id", opt.library_id)->required();
    get->add_option("--revision", opt.revision);
    auto* put = store->add_subcommand("put", "Store profiles as new revisions");
    put->add_option("profiles", opt.profiles)->required();
    put->add_flag("--force", opt.force, "Write a revision even if unchanged");
    auto* grades = store->add_subcommand("import-grades", "Convert a static-analysis grade report");
    grades->add_option("grades", opt.grades_file)->required();
    grades->add_option("--into", opt.into, "Merge into this stored library as a new revision");

    auto* serve = app.add_subcommand("serve", "Run the HTTP API");
    serve->add_option("--addr", opt.address, "host:port (default: $LIBDEX_ADDR or 127.0.0.1:8080)");
    serve->add_option("--store", opt.store_dir, "Store directory");
    serve->add_option("--evidence-dir", opt.evidence_dir, "Evidence directory for the reference weighting");
    serve->add_option("--static", opt.static_dir, "Static files served under /");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n\n";
        const CLI::App* failing = &app;
        for (auto* sub = app.get_subcommands().empty() ? nullptr : app.get_subcommands().front(); sub;
             sub = sub->get_subcommands().empty() ? nullptr : sub->get_subcommands().front()) {
            failing = sub;
        }
        err << failing->help();
        return 2;
    }

    try {
        if (*cat_show) return cmd_catalog_show(out);
        if (*cat_export) {
            emit(opt, export_catalog(catalog()), out);
            return 0;
        }
        if (*score) return cmd_score(opt, out, err);
        if (*rank) return cmd_rank(opt, out, err);
        if (*derive) return cmd_weights_derive(opt, out, err);
        if (*validate) return cmd_weights_validate(opt, out);
        if (*rebalance) return cmd_weights_rebalance(opt, out);
        if (*whatif) return cmd_whatif(opt, out, err);
        if (*list) return cmd_store_list(opt, out);
        if (*get) return cmd_store_get(opt, out);
        if (*put) return cmd_store_put(opt, out, err);
        if (*grades) return cmd_store_import_grades(opt, out);
        if (*serve) return cmd_serve(opt, out);
    } catch (const Error& e) {
        err << "error [" << code_name(e.code()) << "]: " << e.what() << '\n';
        return e.code() == ErrorCode::Usage ? 2 : 1;
    } catch (const std::exception& e) {
        err << "error [INTERNAL]: " << e.what() << '\n';
        return 1;
    }
    err << app.help();
    return 2;
}

}  // namespace libdex
