#include "treejudge/config.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <set>

#include "treejudge/errors.hpp"
#include "treejudge/types.hpp"

namespace treejudge {

using json = nlohmann::json;
using Kind = ConfigError::Kind;

std::vector<std::string> EvalConfig::default_topics() {
    return {
        "Technology and Communication",
        "Business and Finance",
        "Travel and Shopping",
        "Health and Medicine",
        "Science and Nature",
        "History and Culture",
        "Arts and Entertainment",
        "Education and Learning",
        "Sports and Recreation",
        "Food and Drink",
    };
}

const char* to_string(Traversal t) noexcept { return t == Traversal::BFS ? "bfs" : "dfs"; }

const char* to_string(ReplayMode m) noexcept {
    switch (m) {
        case ReplayMode::Off: return "off";
        case ReplayMode::Record: return "record";
        case ReplayMode::Replay: return "replay";
    }
    return "off";
}

namespace {

/// Reads one object level, tracking which keys were consumed so leftovers can
/// be reported as unknown.
class Reader {
public:
    Reader(const json& obj, std::string prefix) : obj_(obj), prefix_(std::move(prefix)) {
        if (!obj_.is_object()) throw ConfigError(Kind::TypeMismatch, prefix_.empty() ? "<root>" : prefix_, "expected an object");
    }

    const json* get(const std::string& key) {
        seen_.insert(key);
        auto it = obj_.find(key);
        if (it == obj_.end()) return nullptr;
        if (it->is_null()) throw ConfigError(Kind::MissingField, path(key), "value is null");
        return &*it;
    }

    void integer(const std::string& key, int& out, long long lo, long long hi = std::numeric_limits<int>::max()) {
        const json* v = get(key);
        if (!v) return;
        if (!v->is_number_integer()) throw ConfigError(Kind::TypeMismatch, path(key), "expected an integer");
        const auto value = v->get<long long>();
        if (value < lo || value > hi)
            throw ConfigError(Kind::OutOfRange, path(key), "must be in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
        out = static_cast<int>(value);
    }

    void real(const std::string& key, double& out, double lo) {
        const json* v = get(key);
        if (!v) return;
        if (!v->is_number()) throw ConfigError(Kind::TypeMismatch, path(key), "expected a number");
        const double value = v->get<double>();
        if (!(value >= lo) || !std::isfinite(value))
            throw ConfigError(Kind::OutOfRange, path(key), "must be finite and >= " + std::to_string(lo));
        out = value;
    }

    void boolean(const std::string& key, bool& out) {
        const json* v = get(key);
        if (!v) return;
        if (!v->is_boolean()) throw ConfigError(Kind::TypeMismatch, path(key), "expected a boolean");
        out = v->get<bool>();
    }

    void string(const std::string& key, std::string& out) {
        const json* v = get(key);
        if (!v) return;
        if (!v->is_string()) throw ConfigError(Kind::TypeMismatch, path(key), "expected a string");
        out = v->get<std::string>();
    }

    void finish() const {
        for (const auto& [key, _] : obj_.items()) {
            if (!seen_.contains(key)) throw ConfigError(Kind::UnknownField, path(key), "unrecognized key");
        }
    }

    std::string path(const std::string& key) const { return prefix_.empty() ? key : prefix_ + "." + key; }

private:
    const json& obj_;
    std::string prefix_;
    std::set<std::string> seen_;
};

void read_backends(const json& raw, BackendConfig& out) {
    Reader r(raw, "backends");
    r.string("examiner", out.examiner);
    r.string("judge", out.judge);
    r.string("ner", out.ner);
    r.string("embedder", out.embedder);
    r.string("api_key_env", out.api_key_env);
    r.string("chat_path", out.chat_path);
    r.string("embeddings_path", out.embeddings_path);
    r.integer("timeout_ms", out.timeout_ms, 1);
    r.integer("backoff_ms", out.backoff_ms, 0);
    std::string mode = to_string(out.replay_mode);
    r.string("replay_mode", mode);
    if (mode == "off") out.replay_mode = ReplayMode::Off;
    else if (mode == "record") out.replay_mode = ReplayMode::Record;
    else if (mode == "replay") out.replay_mode = ReplayMode::Replay;
    else throw ConfigError(Kind::OutOfRange, "backends.replay_mode", "expected off, record or replay");
    r.string("replay_path", out.replay_path);
    if (out.replay_mode != ReplayMode::Off && out.replay_path.empty())
        throw ConfigError(Kind::MissingField, "backends.replay_path", "required when replay_mode is not off");
    for (const auto* role : {&out.examiner, &out.judge, &out.ner, &out.embedder}) {
        if (trim(*role).empty()) throw ConfigError(Kind::OutOfRange, "backends", "endpoint specs must be non-empty");
    }
    r.finish();
}

}  // namespace

EvalConfig validate_config(const json& raw) {
    EvalConfig c;
    Reader r(raw, "");
    r.integer("max_depth", c.max_depth, 1);
    r.integer("branching", c.branching, 1);
    r.integer("question_candidates", c.question_candidates, 1);
    r.real("alpha", c.alpha, 0.0);
    r.real("beta", c.beta, 0.0);
    r.real("gamma", c.gamma, 0.0);
    r.real("temperature", c.temperature, 0.0);
    r.real("judge_temperature", c.judge_temperature, 0.0);
    r.integer("repeats", c.repeats, 1);
    r.integer("retry_limit", c.retry_limit, 0);
    r.real("tie_band", c.tie_band, 0.0);

    if (const json* topics = r.get("predefined_topics")) {
        if (!topics->is_array()) throw ConfigError(Kind::TypeMismatch, "predefined_topics", "expected a list of strings");
        if (topics->empty()) throw ConfigError(Kind::EmptyTopicList, "predefined_topics", "at least one topic is required");
        c.predefined_topics.clear();
        for (std::size_t i = 0; i < topics->size(); ++i) {
            const auto& t = (*topics)[i];
            const std::string where = "predefined_topics[" + std::to_string(i) + "]";
            if (!t.is_string()) throw ConfigError(Kind::TypeMismatch, where, "expected a string");
            auto label = trim(t.get<std::string>());
            if (label.empty()) throw ConfigError(Kind::OutOfRange, where, "topic label is blank");
            c.predefined_topics.push_back(std::move(label));
        }
    }

    if (const json* seed = r.get("seed")) {
        if (!seed->is_number_unsigned() && !(seed->is_number_integer() && seed->get<long long>() >= 0))
            throw ConfigError(Kind::OutOfRange, "seed", "expected a non-negative integer");
        c.seed = seed->get<std::uint64_t>();
    }

    std::string traversal = to_string(c.traversal);
    r.string("traversal", traversal);
    if (traversal == "bfs") c.traversal = Traversal::BFS;
    else if (traversal == "dfs") c.traversal = Traversal::DFS;
    else throw ConfigError(Kind::OutOfRange, "traversal", "expected bfs or dfs");

    r.boolean("step_one_enabled", c.step_one_enabled);
    r.boolean("history_conditioning", c.history_conditioning);
    r.boolean("sibling_group_includes_self", c.sibling_group_includes_self);
    r.string("templates_dir", c.templates_dir);

    if (const json* b = r.get("backends")) read_backends(*b, c.backends);
    r.finish();
    return c;
}

EvalConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoFailure("cannot open config file: " + path);
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError(Kind::TypeMismatch, "<root>", std::string("not valid JSON: ") + e.what());
    }
    return validate_config(doc);
}

json config_to_json(const EvalConfig& c) {
    const auto& b = c.backends;
    return json{
        {"max_depth", c.max_depth},
        {"branching", c.branching},
        {"question_candidates", c.question_candidates},
        {"alpha", c.alpha},
        {"beta", c.beta},
        {"gamma", c.gamma},
        {"temperature", c.temperature},
        {"judge_temperature", c.judge_temperature},
        {"repeats", c.repeats},
        {"predefined_topics", c.predefined_topics},
        {"retry_limit", c.retry_limit},
        {"seed", c.seed},
        {"traversal", to_string(c.traversal)},
        {"step_one_enabled", c.step_one_enabled},
        {"history_conditioning", c.history_conditioning},
        {"sibling_group_includes_self", c.sibling_group_includes_self},
        {"templates_dir", c.templates_dir},
        {"tie_band", c.tie_band},
        {"backends",
         {
             {"examiner", b.examiner},
             {"judge", b.judge},
             {"ner", b.ner},
             {"embedder", b.embedder},
             {"api_key_env", b.api_key_env},
             {"chat_path", b.chat_path},
             {"embeddings_path", b.embeddings_path},
             {"timeout_ms", b.timeout_ms},
             {"backoff_ms", b.backoff_ms},
             {"replay_mode", to_string(b.replay_mode)},
             {"replay_path", b.replay_path},
         }},
    };
}

}  // namespace treejudge
