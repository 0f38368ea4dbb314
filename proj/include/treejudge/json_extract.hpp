/// @file json_extract.hpp
/// @brief Recovers JSON fragments embedded in free-form model output.

#pragma once

#include <optional>
#include <string_view>

#include <nlohmann/json.hpp>

namespace treejudge {

/// Returns the first balanced `{...}` substring of `text` that parses as a
/// JSON object. Braces inside string literals are ignored while balancing.
std::optional<nlohmann::json> first_json_object(std::string_view text);

/// Same scan for `[...]` arrays.
std::optional<nlohmann::json> first_json_array(std::string_view text);

}  // namespace treejudge
