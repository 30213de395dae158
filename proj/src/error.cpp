#include "libdex/error.hpp"

namespace libdex {

std::string_view code_name(ErrorCode code) {
    switch (code) {
        case ErrorCode::Range: return "RANGE";
        case ErrorCode::OffAnchor: return "OFF_ANCHOR";
        case ErrorCode::UnknownCriterion: return "UNKNOWN_CRITERION";
        case ErrorCode::UnknownAttribute: return "UNKNOWN_ATTRIBUTE";
        case ErrorCode::DuplicateCriterion: return "DUPLICATE_CRITERION";
        case ErrorCode::DuplicateId: return "DUPLICATE_ID";
        case ErrorCode::CatalogVersion: return "CATALOG_VERSION";
        case ErrorCode::MixedCatalog: return "MIXED_CATALOG";
        case ErrorCode::WeightSum: return "WEIGHT_SUM";
        case ErrorCode::NegativeWeight: return "NEGATIVE_WEIGHT";
        case ErrorCode::WeightMismatch: return "WEIGHT_MISMATCH";
        case ErrorCode::InfeasiblePin: return "INFEASIBLE_PIN";
        case ErrorCode::MalformedBallot: return "MALFORMED_BALLOT";
        case ErrorCode::EvidenceMismatch: return "EVIDENCE_MISMATCH";
        case ErrorCode::EmptyInput: return "EMPTY_INPUT";
        case ErrorCode::BadRange: return "BAD_RANGE";
        case ErrorCode::UnknownGrade: return "UNKNOWN_GRADE";
        case ErrorCode::MissingKey: return "MISSING_KEY";
        case ErrorCode::MissingNote: return "MISSING_NOTE";
        case ErrorCode::Parse: return "PARSE";
        case ErrorCode::NotFound: return "NOT_FOUND";
        case ErrorCode::WriteConflict: return "WRITE_CONFLICT";
        case ErrorCode::Usage: return "USAGE";
        case ErrorCode::Internal: return "INTERNAL";
    }
    return "INTERNAL";
}

int http_status(ErrorCode code) {
    switch (code) {
        case ErrorCode::NotFound: return 404;
        case ErrorCode::WriteConflict: return 409;
        case ErrorCode::Parse:
        case ErrorCode::Usage:
        case ErrorCode::MissingKey: return 400;
        case ErrorCode::Internal: return 500;
        default: return 422;
    }
}

Error::Error(ErrorCode code, const std::string& message, nlohmann::json detail)
    : std::runtime_error(message), code_(code), detail_(std::move(detail)) {}

nlohmann::json Error::to_json() const {
    return {{"code", code_name(code_)}, {"message", what()}, {"detail", detail_}};
}

}  // namespace libdex
