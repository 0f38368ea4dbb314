/// @file session_io.hpp
/// @brief Session files: one JSON document per session, keys sorted so equal
/// sessions serialize to equal bytes.

#pragma once

#include <string>

#include <nlohmann/json.hpp>

#include "treejudge/config.hpp"
#include "treejudge/types.hpp"

namespace treejudge {

inline constexpr const char* kSessionFormat = "treejudge-session/1";

struct SessionFile {
    EvalConfig config;
    SessionResult result;

    bool operator==(const SessionFile&) const = default;
};

nlohmann::json session_to_json(const SessionResult& result, const EvalConfig& config);
nlohmann::json tree_to_json(const EvalTree& tree);

/// Throws SchemaViolation naming the first offending JSON pointer.
SessionFile session_from_json(const nlohmann::json& doc);
EvalTree tree_from_json(const nlohmann::json& doc, const std::string& path = "");

/// Serialized text as written to disk, newline-terminated.
std::string session_to_text(const SessionResult& result, const EvalConfig& config);

/// Writes to a sibling temp file, then renames. Throws IoFailure.
void save_session(const SessionResult& result, const EvalConfig& config, const std::string& path);

/// Throws IoFailure or SchemaViolation.
SessionFile load_session(const std::string& path);

/// Writes `text` to `path` atomically. Throws IoFailure.
void write_file_atomic(const std::string& path, const std::string& text);

}  // namespace treejudge
