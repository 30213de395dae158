#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

#include "json.hpp"

namespace libdex {

enum class ErrorCode {
    Range,
    OffAnchor,
    UnknownCriterion,
    UnknownAttribute,
    DuplicateCriterion,
    DuplicateId,
    CatalogVersion,
    MixedCatalog,
    WeightSum,
    NegativeWeight,
    WeightMismatch,
    InfeasiblePin,
    MalformedBallot,
    EvidenceMismatch,
    EmptyInput,
    BadRange,
    UnknownGrade,
    MissingKey,
    MissingNote,
    Parse,
    NotFound,
    WriteConflict,
    Usage,
    Internal,
};

/// Machine-readable code string, e.g. "WEIGHT_SUM".
std::string_view code_name(ErrorCode code);

/// HTTP status class used when the error crosses the API boundary.
int http_status(ErrorCode code);

/// Engine error. Every failure raised by the library carries exactly one code.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message, nlohmann::json detail = nlohmann::json::object());

    ErrorCode code() const noexcept { return code_; }
    const nlohmann::json& detail() const noexcept { return detail_; }

    /// Write conflicts may succeed when retried against the new latest revision.
    bool retryable() const noexcept { return code_ == ErrorCode::WriteConflict; }

    /// {code, message, detail}
    nlohmann::json to_json() const;

private:
    ErrorCode code_;
    nlohmann::json detail_;
};

}  // namespace libdex
