#include "libdex/catalog.hpp"

namespace libdex {

namespace {

CriterionDef criterion(int attribute, std::string id, std::string name, RubricSpec rubric,
                       std::string guidance, nlohmann::json reference = nullptr) {
    return CriterionDef{std::move(id), std::move(name), AttributeId{attribute}, std::move(rubric),
                        std::move(guidance), std::move(reference)};
}

RubricSpec three_step(std::string top, std::string middle, std::string bottom) {
    return RubricSpec::enumerated({{std::move(top), 2}, {std::move(middle), 0}, {std::move(bottom), -2}});
}

RubricSpec two_step(std::string top, std::string bottom) {
    return RubricSpec::enumerated({{std::move(top), 2}, {std::move(bottom), -2}});
}

Catalog make_builtin() {
    const auto pct = RubricSpec::default_percentage;
    const auto grade = RubricSpec::grade_scale;

    std::vector<AttributeDef> attributes{
        {AttributeId{1}, "Ease of Use",
         "How much can a developer work out intuitively while using the library?",
         {
             criterion(1, "1a", "Readability", pct(),
                       "Share of public functions taking at most two parameters; long parameter lists "
                       "hurt intuitive use."),
             criterion(1, "1b", "Default Settings",
                       RubricSpec::enumerated({{"defaults match current recommendations", 2},
                                               {"no or weak defaults", -1}}),
                       "Cryptographic procedures ship default values that are secure under current "
                       "national recommendations (e.g. BSI TR-02102)."),
             criterion(1, "1c", "Naming Conventions", pct(),
                       "A naming scheme (e.g. a published style guide for the language) is applied "
                       "consistently."),
             criterion(1, "1d", "Regularity",
                       three_step("symmetric naming wherever possible", "symmetric naming for central functions",
                                  "no recognizable naming system"),
                       "Paired operations use symmetric names, such as connect()/disconnect()."),
             criterion(1, "1e", "Self-describing Function Names", pct(),
                       "Function names are understandable and reflect what the function does."),
         }},
        {AttributeId{2}, "Scalability",
         "Can work run synchronously and in parallel, and what data sizes can be handled?",
         {
             criterion(2, "2a", "Concurrency",
                       three_step("supported", "possible through workarounds", "not supported"),
                       "Library functions can run in parallel (threads, clusters, load balancers). "
                       "Inherently sequential operations are not counted."),
         }},
        {AttributeId{3}, "Testability",
         "Is the API easy to test and debug, is system state observable, are errors caught and logged?",
         {
             criterion(3, "3a", "Testability",
                       two_step("test helpers or examples supplied", "no test helpers or examples"),
                       "The library offers test classes, default tests or test examples in its documentation."),
             criterion(3, "3b", "Exceptions",
                       three_step("custom error handling with descriptions", "standard error handling",
                                  "no error handling"),
                       "The library actively handles errors."),
         }},
        {AttributeId{4}, "Extendability",
         "Can the functionality be extended, and how much effort does that take?",
         {
             criterion(4, "4a", "Public",
                       three_step("extension points public", "partially public", "little or nothing public"),
                       "Classes and functions needed for extension are public and inheritable."),
             criterion(4, "4b", "Interfaces",
                       three_step("interfaces on all user-facing classes", "isolated interfaces",
                                  "no interfaces"),
                       "The library exposes interfaces for the types users work with."),
         }},
        {AttributeId{5}, "Functional Completeness",
         "Does the API cover the needed features and stay focused on its purpose?",
         {
             criterion(5, "5a", "Purposefulness",
                       three_step("core mission only", "useful extras beyond the core",
                                  "purpose obscured by unrelated features"),
                       "The library concentrates on its core mission."),
         }},
        {AttributeId{6}, "Data Types",
         "Are the data types intuitive, do parameters and return values fit, and is their order consistent?",
         {
             criterion(6, "6a", "Return Values", pct(),
                       "Functions return values that confirm successful execution."),
             criterion(6, "6b", "Ordering", pct(), "Parameter order is consistent across the API."),
         }},
        {AttributeId{7}, "Code Quality", "Does the code follow standards and conventions?",
         {
             criterion(7, "7a", "Bugs", grade(),
                       "Static-analysis reliability grade (A..E) from a code-quality server such as SonarQube."),
             criterion(7, "7b", "Vulnerability", grade(), "Static-analysis security grade (A..E)."),
             criterion(7, "7c", "Code Smell", grade(), "Static-analysis maintainability grade (A..E)."),
         }},
        {AttributeId{8}, "Cost", "What does the library cost and under which licenses is it offered?",
         {
             criterion(8, "8a", "Cost", two_step("free of charge", "requires a fee"),
                       "The library can be used without fees."),
             criterion(8, "8b", "Licence",
                       three_step("unrestricted commercial use", "non-commercial only or paid commercial use",
                                  "no commercial use and payment required"),
                       "License terms for commercial and non-commercial use."),
         }},
        {AttributeId{9}, "Requirements",
         "What does the library require, and which dependencies must be resolved?",
         {
             criterion(9, "9a", "Dependencies",
                       two_step("dependencies installed automatically", "dependencies installed manually"),
                       "Other software, packages or files the library needs, and how they get installed."),
         }},
        {AttributeId{10}, "Complexity",
         "How complex and configurable is the API, and how much boilerplate does it demand?",
         {
             criterion(10, "10a", "Atomic Setting",
                       three_step("settings provided and adjustable", "settings provided but fixed",
                                  "all parameters chosen manually"),
                       "Fine-grained adjustments are possible."),
             criterion(10, "10b", "Boilerplate Code",
                       three_step("dedicated methods replace recurring code", "largest blocks simplified",
                                  "same code written repeatedly"),
                       "Amount of recurring code developers must write to use the API."),
         }},
        {AttributeId{11}, "Maintained", "Is the library still developed and is support provided?",
         {
             criterion(11, "11a", "Release Frequency",
                       three_step("fixed release schedule", "no schedule but releases continue",
                                  "further releases uncertain"),
                       "Release cadence over the last three major versions."),
             criterion(11, "11b", "Patch Frequency",
                       RubricSpec::enumerated({{"patches within 90 days", 2},
                                               {"patches later than 90 days", 1},
                                               {"patch delivery unclear", 0},
                                               {"no patches", -2}}),
                       "Security issues are fixed promptly (90-day disclosure window)."),
             criterion(11, "11c", "Support",
                       three_step("free official support", "paid official support", "no official channels"),
                       "An official support channel exists (forum, wiki, mailing list)."),
         }},
        {AttributeId{12}, "Spread",
         "How widespread is the library, how large is its community and what is its reputation?",
         {
             criterion(12, "12a", "Successful Stories",
                       three_step("several reputable trade-press reports", "no significant mentions",
                                  "only purchased posts"),
                       "Published accounts of successful use in other projects."),
             criterion(12, "12b", "Repositories", pct(),
                       "Popularity on public repositories (stars, likes), relative to the reference project.",
                       {{"repository", "Mindustry"},
                        {"platform", "GitHub"},
                        {"stars", 7557},
                        {"as_of", "2020-12"},
                        {"scope", "most popular English-language Java project"}}),
         }},
        {AttributeId{13}, "Performance Impact", "How does the library affect performance and latency?", {}},
        {AttributeId{14}, "Security", "Are the API and the procedures it uses secure?",
         {
             criterion(14, "14a", "Standards",
                       three_step("exceeds the state of the art", "meets the standards exactly",
                                  "some aspect obsolete or too weak"),
                       "Only algorithms on the recommended-algorithm whitelist are used.",
                       {{"whitelist", "external"}, {"source", "BSI TR-02102, supplied by the assessor"}}),
             criterion(14, "14b", "Certified", three_step("multiple certifications", "certified", "not certified"),
                       "The library holds security certifications."),
         }},
        {AttributeId{15}, "Documentation",
         "Is the API documented thoroughly, with best practices and examples?",
         {
             criterion(15, "15a", "Function Documentation", pct(), "Every method or function is documented."),
             criterion(15, "15b", "Examples", pct(),
                       "Every method or function has an example of correct use."),
         }},
    };
    return Catalog("1.0", std::move(attributes));
}

}  // namespace

const Catalog& builtin_catalog() {
    static const Catalog catalog = make_builtin();
    return catalog;
}

}  // namespace libdex
