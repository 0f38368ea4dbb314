/// @file config.hpp
/// @brief Session configuration and its JSON schema.

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace treejudge {

enum class Traversal { BFS, DFS };

enum class ReplayMode { Off, Record, Replay };

/// Where each auxiliary role gets its completions and embeddings.
///
/// Role specs use the endpoint grammar `http:<base-url>#<model>`,
/// `mock:<script-path>` or `synthetic`; the embedder accepts `mock` or
/// `http:<base-url>#<model>`.
struct BackendConfig {
    std::string examiner = "synthetic";
    std::string judge = "synthetic";
    std::string ner = "synthetic";
    std::string embedder = "mock";
    std::string api_key_env = "EVAL_API_KEY";
    std::string chat_path = "/v1/chat/completions";
    std::string embeddings_path = "/v1/embeddings";
    int timeout_ms = 60000;
    int backoff_ms = 500;
    ReplayMode replay_mode = ReplayMode::Off;
    std::string replay_path;

    bool operator==(const BackendConfig&) const = default;
};

struct EvalConfig {
    int max_depth = 3;            // T
    int branching = 3;            // k
    int question_candidates = 3;  // m
    double alpha = 1.0;
    double beta = 1.0;
    double gamma = 0.4;
    double temperature = 1.0;        // examiner sampling temperature
    double judge_temperature = 0.0;  // verdict stability
    int repeats = 3;
    std::vector<std::string> predefined_topics = default_topics();
    int retry_limit = 3;
    std::uint64_t seed = 0;
    Traversal traversal = Traversal::BFS;
    bool step_one_enabled = true;
    bool history_conditioning = true;
    bool sibling_group_includes_self = true;
    std::string templates_dir;  // empty: built-in templates
    double tie_band = 0.1;      // oracle judge tie band for synthetic sessions
    BackendConfig backends;

    static std::vector<std::string> default_topics();

    bool operator==(const EvalConfig&) const = default;
};

/// Builds a config from a parsed document, filling defaults and enforcing
/// bounds. Throws ConfigError.
EvalConfig validate_config(const nlohmann::json& raw);

/// Reads and validates a JSON config file.
EvalConfig load_config(const std::string& path);

/// Full snapshot; `validate_config(config_to_json(c)) == c` holds.
nlohmann::json config_to_json(const EvalConfig& config);

const char* to_string(Traversal t) noexcept;
const char* to_string(ReplayMode m) noexcept;

}  // namespace treejudge
