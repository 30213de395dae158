#pragma once

#include <string>

#include "json.hpp"

namespace libdex {

/// Sorted keys, two-space indent, UTF-8, LF line endings, trailing newline.
/// Identical values always produce identical bytes.
std::string canonical_dump(const nlohmann::json& value);

/// Lower-case hex SHA-256 of the given bytes.
std::string sha256_hex(const std::string& bytes);

}  // namespace libdex
