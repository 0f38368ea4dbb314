/// @file scripted.hpp
/// @brief Deterministic rule-driven mock provider.
///
/// A script is a JSON document:
///
///     {
///       "rules": [
///         {"contains": ["Response 1"], "regex": "about (.*?)\\.", "responses": ["..."]}
///       ],
///       "default": ["..."]
///     }
///
/// The first rule whose `contains` substrings all occur in the user text (and
/// whose `regex`, if any, matches) answers. Among its responses one is picked
/// by hashing the prompt together with the call's sub-seed, so replies are a
/// pure function of (prompt, sub-seed). Responses may reference regex groups
/// as `$1`..`$9` and a per-call number as `{nonce}`.

#pragma once

#include <optional>
#include <regex>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "treejudge/chat.hpp"

namespace treejudge {

class ScriptedBackend final : public ChatBackend {
public:
    ScriptedBackend(std::string name, const nlohmann::json& script);

    /// Reads a script file. Throws IoFailure or ConfigError.
    static ScriptedBackend from_file(const std::string& path);

    std::string complete(std::span<const Message> messages, const CompletionOptions& options) override;
    std::string name() const override { return name_; }

private:
    struct Rule {
        std::vector<std::string> contains;
        std::optional<std::regex> pattern;
        std::vector<std::string> responses;
    };

    std::string name_;
    std::vector<Rule> rules_;
    std::vector<std::string> fallback_;
};

}  // namespace treejudge
