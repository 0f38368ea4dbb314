#include "treejudge/json_extract.hpp"

#include <cstddef>

namespace treejudge {

namespace {

// Position one past the bracket that closes the one at `start`, or npos.
std::size_t balanced_end(std::string_view text, std::size_t start, char open, char close) {
    int depth = 0;
    bool in_string = false;
    bool escaped = false;
    for (std::size_t i = start; i < text.size(); ++i) {
        const char c = text[i];
        if (in_string) {
            if (escaped) escaped = false;
            else if (c == '\\') escaped = true;
            else if (c == '"') in_string = false;
            continue;
        }
        if (c == '"') in_string = true;
        else if (c == open) ++depth;
        else if (c == close && --depth == 0) return i + 1;
    }
    return std::string_view::npos;
}

std::optional<nlohmann::json> first_balanced(std::string_view text, char open, char close) {
    for (std::size_t pos = text.find(open); pos != std::string_view::npos; pos = text.find(open, pos + 1)) {
        const std::size_t end = balanced_end(text, pos, open, close);
        if (end == std::string_view::npos) continue;
        auto parsed = nlohmann::json::parse(text.substr(pos, end - pos), nullptr, /*allow_exceptions=*/false);
        if (parsed.is_discarded()) continue;
        if ((open == '{' && parsed.is_object()) || (open == '[' && parsed.is_array())) return parsed;
    }
    return std::nullopt;
}

}  // namespace

std::optional<nlohmann::json> first_json_object(std::string_view text) { return first_balanced(text, '{', '}'); }

std::optional<nlohmann::json> first_json_array(std::string_view text) { return first_balanced(text, '[', ']'); }

}  // namespace treejudge
