#include "treejudge/scripted.hpp"

#include <fstream>

#include "treejudge/errors.hpp"
#include "treejudge/seed.hpp"

namespace treejudge {

using json = nlohmann::json;

namespace {

std::vector<std::string> string_list(const json& j, const std::string& where) {
    if (j.is_string()) return {j.get<std::string>()};
    if (!j.is_array() || j.empty())
        throw ConfigError(ConfigError::Kind::TypeMismatch, where, "expected a non-empty list of strings");
    std::vector<std::string> out;
    for (const auto& s : j) {
        if (!s.is_string()) throw ConfigError(ConfigError::Kind::TypeMismatch, where, "expected strings");
        out.push_back(s.get<std::string>());
    }
    return out;
}

std::string expand(const std::string& response, const std::smatch* groups, std::uint64_t nonce) {
    std::string out;
    for (std::size_t i = 0; i < response.size(); ++i) {
        if (groups && response[i] == '$' && i + 1 < response.size() && response[i + 1] >= '1' && response[i + 1] <= '9') {
            const auto g = static_cast<std::size_t>(response[i + 1] - '0');
            if (g < groups->size()) out += (*groups)[g].str();
            ++i;
        } else if (response.compare(i, 7, "{nonce}") == 0) {
            out += std::to_string(nonce % 100000);
            i += 6;
        } else {
            out += response[i];
        }
    }
    return out;
}

}  // namespace

ScriptedBackend::ScriptedBackend(std::string name, const json& script) : name_(std::move(name)) {
    if (!script.is_object()) throw ConfigError(ConfigError::Kind::TypeMismatch, "script", "expected an object");
    if (script.contains("rules")) {
        const auto& rules = script["rules"];
        if (!rules.is_array()) throw ConfigError(ConfigError::Kind::TypeMismatch, "rules", "expected a list");
        for (std::size_t i = 0; i < rules.size(); ++i) {
            const auto& r = rules[i];
            const std::string where = "rules[" + std::to_string(i) + "]";
            if (!r.is_object() || !r.contains("responses"))
                throw ConfigError(ConfigError::Kind::MissingField, where + ".responses", "rule needs responses");
            Rule rule;
            if (r.contains("contains")) rule.contains = string_list(r["contains"], where + ".contains");
            if (r.contains("regex")) {
                try {
                    rule.pattern.emplace(r["regex"].get<std::string>());
                } catch (const std::regex_error& e) {
                    throw ConfigError(ConfigError::Kind::OutOfRange, where + ".regex", e.what());
                }
            }
            rule.responses = string_list(r["responses"], where + ".responses");
            rules_.push_back(std::move(rule));
        }
    }
    if (script.contains("default")) fallback_ = string_list(script["default"], "default");
}

ScriptedBackend ScriptedBackend::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoFailure("cannot open mock script " + path);
    auto doc = json::parse(in, nullptr, false);
    if (doc.is_discarded()) throw ConfigError(ConfigError::Kind::TypeMismatch, path, "mock script is not valid JSON");
    return ScriptedBackend("mock:" + path, doc);
}

std::string ScriptedBackend::complete(std::span<const Message> messages, const CompletionOptions& options) {
    const std::string prompt = user_text(messages);
    const std::uint64_t pick = derive_seed(options.seed, {fnv1a(prompt)});
    const std::uint64_t nonce = derive_seed(pick, "nonce");
    for (const auto& rule : rules_) {
        bool ok = true;
        for (const auto& needle : rule.contains) {
            if (prompt.find(needle) == std::string::npos) {
                ok = false;
                break;
            }
        }
        if (!ok) continue;
        std::smatch groups;
        if (rule.pattern && !std::regex_search(prompt, groups, *rule.pattern)) continue;
        const auto& response = rule.responses[pick % rule.responses.size()];
        return expand(response, rule.pattern ? &groups : nullptr, nonce);
    }
    if (fallback_.empty())
        throw BackendError(BackendError::Kind::Unavailable, name_, "no scripted rule matched the prompt");
    return expand(fallback_[pick % fallback_.size()], nullptr, nonce);
}

}  // namespace treejudge
