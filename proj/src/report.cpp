#include "libdex/report.hpp"

#include <set>
#include <sstream>

namespace libdex {

namespace {

void put_rational(nlohmann::json& object, const std::string& key, const Rational& value) {
    object[key] = to_double(value);
    object[key + "_exact"] = to_exact_string(value);
    object[key + "_display"] = display(value);
}

std::string csv_field(const std::string& text) {
    if (text.find_first_of(",\"\n") == std::string::npos) {
        return text;
    }
    std::string out = "\"";
    for (char c : text) {
        if (c == '"') {
            out += '"';
        }
        out += c;
    }
    return out + "\"";
}

std::string trim_zeros(std::string text) {
    if (text.find('.') == std::string::npos) {
        return text;
    }
    while (text.back() == '0') {
        text.pop_back();
    }
    if (text.back() == '.') {
        text.pop_back();
    }
    return text;
}

}  // namespace

std::string display(const Rational& value) {
    return to_fixed(value, 2);
}

std::string display_signed(const Rational& value) {
    std::string text = trim_zeros(display(value));
    if (text == "-0") {
        text = "0";
    }
    if (text != "0" && text.front() != '-') {
        text.insert(0, "+");
    }
    return text;
}

nlohmann::json weights_to_json_map(const WeightVector& weights) {
    nlohmann::json out = nlohmann::json::object();
    for (const auto& [id, g] : weights.weights) {
        out[to_string(id)] = rational_to_json(g);
    }
    return out;
}

nlohmann::json report_to_json(const IndexReport& report) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& row : report.rows) {
        nlohmann::json ratings = nlohmann::json::array();
        for (const auto& r : row.ratings) {
            ratings.push_back({{"criterion", r.criterion_id}, {"rating", rational_to_json(r.rating)}});
        }
        nlohmann::json entry = {
            {"attribute_id", row.attribute_id.value},
            {"name", row.name},
            {"ratings", ratings},
            {"m", row.assessed_count},
            {"assessed", row.assessed()},
        };
        if (row.mean) {
            put_rational(entry, "mean", *row.mean);
        } else {
            entry["mean"] = nullptr;
            entry["mean_exact"] = nullptr;
            entry["mean_display"] = "-";
        }
        put_rational(entry, "weight", row.weight);
        put_rational(entry, "contribution", row.contribution);
        rows.push_back(std::move(entry));
    }
    nlohmann::json out = {
        {"library",
         {{"name", report.library.name},
          {"version", report.library.version},
          {"language", report.library.language},
          {"source_url", report.library.source_url}}},
        {"library_id", report.library_id},
        {"catalog_version", report.catalog_version},
        {"attributes", rows},
        {"weights_used", weights_to_json_map(report.weights_used)},
    };
    put_rational(out, "total", report.total);
    put_rational(out, "achievable_min", report.achievable_min);
    put_rational(out, "achievable_max", report.achievable_max);
    return out;
}

std::string report_to_csv(const IndexReport& report) {
    std::ostringstream out;
    out << "attribute_id,attribute,m,mean,weight,contribution,achievable_min,achievable_max\n";
    for (const auto& row : report.rows) {
        out << row.attribute_id.value << ',' << csv_field(row.name) << ',' << row.assessed_count << ','
            << (row.mean ? display(*row.mean) : std::string()) << ',' << display(row.weight) << ','
            << display(row.contribution) << ",,\n";
    }
    out << "total,,,,," << display(report.total) << ',' << display(report.achievable_min) << ','
        << display(report.achievable_max) << '\n';
    return out.str();
}

std::string comparison_markdown(const Catalog& catalog, const std::vector<IndexReport>& reports) {
    std::ostringstream out;
    out << "| Nr | Attribute |";
    for (const auto& r : reports) {
        out << ' ' << r.library.name << " |";
    }
    out << "\n|---|---|";
    for (std::size_t i = 0; i < reports.size(); ++i) {
        out << "---|";
    }
    out << '\n';
    for (const auto& attribute : catalog.attributes()) {
        out << "| **" << attribute.id.value << "** | **" << attribute.name << "** |";
        for (const auto& r : reports) {
            const auto& row = r.row(attribute.id);
            out << ' ' << (row.mean ? "**" + display_signed(*row.mean) + "**" : std::string("-")) << " |";
        }
        out << '\n';
        for (const auto& criterion : attribute.criteria) {
            std::vector<std::string> cells;
            bool any = false;
            for (const auto& r : reports) {
                std::string cell;
                for (const auto& rating : r.row(attribute.id).ratings) {
                    if (rating.criterion_id == criterion.id) {
                        cell = display_signed(rating.rating);
                        any = true;
                    }
                }
                cells.push_back(cell);
            }
            if (!any) {
                continue;
            }
            out << "| " << criterion.id << " | " << criterion.name << " |";
            for (const auto& cell : cells) {
                out << ' ' << cell << " |";
            }
            out << '\n';
        }
    }
    out << "| | **Index** |";
    for (const auto& r : reports) {
        out << " **" << display(r.total) << "** |";
    }
    out << "\n| | Achievable range |";
    for (const auto& r : reports) {
        out << ' ' << display(r.achievable_min) << " .. " << display(r.achievable_max) << " |";
    }
    out << '\n';
    return out.str();
}

nlohmann::json sensitivity_to_json(const SensitivityResult& result) {
    nlohmann::json crossovers = nlohmann::json::array();
    for (const auto& c : result.crossovers) {
        nlohmann::json entry = {{"leader_before", c.leader_before}, {"leader_after", c.leader_after}};
        put_rational(entry, "g_value", c.g_value);
        crossovers.push_back(std::move(entry));
    }
    nlohmann::json out = {
        {"library_a", result.library_a},
        {"library_b", result.library_b},
        {"attribute_id", result.attribute_id.value},
        {"range", {rational_to_json(result.lo), rational_to_json(result.hi)}},
        {"crossovers", crossovers},
        {"sum_constraint_relaxed", result.sum_constraint_relaxed},
    };
    put_rational(out, "delta_at_zero", result.delta_at_zero);
    put_rational(out, "slope", result.slope);
    return out;
}

}  // namespace libdex
