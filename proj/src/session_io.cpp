#include "treejudge/session_io.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "treejudge/errors.hpp"

namespace treejudge {

using json = nlohmann::json;

namespace {

json topic_to_json(const Topic& t) {
    return json{{"label", t.label},
                {"origin", to_string(t.origin)},
                {"origin_slot", to_string(t.origin_slot)},
                {"parent_node", t.parent_node ? json(*t.parent_node) : json(nullptr)}};
}

json verdict_to_json(const Verdict& v) {
    return json{{"direction", to_string(v.direction)},
                {"raw", to_string(v.raw)},
                {"resolved", to_string(v.resolved)},
                {"degraded", v.degraded}};
}

json score_pair_to_json(const ScorePair& s) { return json{{"a", s.a}, {"b", s.b}}; }

json node_to_json(const TreeNode& n) {
    json follow = json::array();
    for (const auto& t : n.follow_up_topics) follow.push_back(topic_to_json(t));
    json weight = nullptr;
    if (n.weight)
        weight = json{{"root", n.weight->root},
                      {"topic", n.weight->topic},
                      {"sibling", n.weight->sibling},
                      {"combined", n.weight->combined}};
    return json{
        {"id", n.id},
        {"parent", n.parent ? json(*n.parent) : json(nullptr)},
        {"depth", n.depth},
        {"topic", topic_to_json(n.topic)},
        {"question", json{{"text", n.question.text}, {"selection_score", n.question.selection_score}}},
        {"answers", json{{"a", n.answers.answer_a},
                         {"b", n.answers.answer_b},
                         {"failed_a", n.answers.failed_a},
                         {"failed_b", n.answers.failed_b}}},
        {"verdicts", json::array({verdict_to_json(n.verdicts.first), verdict_to_json(n.verdicts.second)})},
        {"score", json{{"a", n.score.a()}, {"b", n.score.b()}}},
        {"candidate_topics", n.candidate_topics},
        {"follow_up_topics", follow},
        {"children", n.children},
        {"status", to_string(n.status)},
        {"expansion_failures", n.expansion_failures},
        {"weight", weight},
    };
}

/// Typed field access that reports the JSON pointer of the first bad value.
class Reader {
public:
    Reader(const json& j, std::string path) : j_(j), path_(std::move(path)) {}

    const json& at(const char* key, json::value_t type) const {
        const auto p = child(key);
        if (!j_.is_object()) throw SchemaViolation(path_.empty() ? "/" : path_, "expected an object");
        auto it = j_.find(key);
        if (it == j_.end()) throw SchemaViolation(p, "missing field");
        if (!matches(*it, type)) throw SchemaViolation(p, std::string("expected ") + name(type));
        return *it;
    }

    std::string str(const char* key) const { return at(key, json::value_t::string).get<std::string>(); }
    bool boolean(const char* key) const { return at(key, json::value_t::boolean).get<bool>(); }
    double number(const char* key) const { return at(key, json::value_t::number_float).get<double>(); }
    std::int64_t integer(const char* key) const { return at(key, json::value_t::number_integer).get<std::int64_t>(); }

    std::size_t index(const char* key) const {
        const auto v = integer(key);
        if (v < 0) throw SchemaViolation(child(key), "expected a non-negative integer");
        return static_cast<std::size_t>(v);
    }

    std::optional<std::size_t> optional_index(const char* key) const {
        if (!j_.is_object()) throw SchemaViolation(path_.empty() ? "/" : path_, "expected an object");
        auto it = j_.find(key);
        if (it == j_.end()) throw SchemaViolation(child(key), "missing field");
        if (it->is_null()) return std::nullopt;
        return index(key);
    }

    Reader object(const char* key) const { return Reader(at(key, json::value_t::object), child(key)); }

    std::vector<std::string> strings(const char* key) const {
        const auto& arr = at(key, json::value_t::array);
        std::vector<std::string> out;
        for (std::size_t i = 0; i < arr.size(); ++i) {
            if (!arr[i].is_string()) throw SchemaViolation(child(key) + "/" + std::to_string(i), "expected string");
            out.push_back(arr[i].get<std::string>());
        }
        return out;
    }

    template <typename T, typename F>
    T parse_enum(const char* key, F from_string) const {
        const auto s = str(key);
        auto v = from_string(s);
        if (!v) throw SchemaViolation(child(key), "unrecognized value '" + s + "'");
        return *v;
    }

    std::string child(const std::string& key) const { return path_ + "/" + key; }
    const json& raw() const { return j_; }
    const std::string& path() const { return path_; }

private:
    static bool matches(const json& v, json::value_t type) {
        switch (type) {
            case json::value_t::number_float: return v.is_number();
            case json::value_t::number_integer: return v.is_number_integer();
            default: return v.type() == type;
        }
    }

    static const char* name(json::value_t type) {
        switch (type) {
            case json::value_t::object: return "object";
            case json::value_t::array: return "array";
            case json::value_t::string: return "string";
            case json::value_t::boolean: return "boolean";
            case json::value_t::number_float: return "number";
            case json::value_t::number_integer: return "integer";
            default: return "value";
        }
    }

    const json& j_;
    std::string path_;
};

Topic read_topic(const Reader& r) {
    Topic t;
    t.label = r.str("label");
    t.origin = r.parse_enum<TopicOrigin>("origin", topic_origin_from_string);
    t.origin_slot = r.parse_enum<OriginSlot>("origin_slot", origin_slot_from_string);
    t.parent_node = r.optional_index("parent_node");
    return t;
}

Verdict read_verdict(const Reader& r) {
    Verdict v;
    v.direction = r.parse_enum<Direction>("direction", direction_from_string);
    v.raw = r.parse_enum<RawVerdict>("raw", raw_verdict_from_string);
    v.resolved = r.parse_enum<Outcome>("resolved", outcome_from_string);
    v.degraded = r.boolean("degraded");
    if (v.resolved != resolve(v.raw, v.direction))
        throw SchemaViolation(r.child("resolved"), "inconsistent with raw verdict and direction");
    return v;
}

ScorePair read_score_pair(const Reader& r) { return ScorePair{r.number("a"), r.number("b")}; }

TreeNode read_node(const Reader& r, std::size_t expected_id) {
    TreeNode n;
    n.id = r.index("id");
    if (n.id != expected_id) throw SchemaViolation(r.child("id"), "node ids must equal their position");
    n.parent = r.optional_index("parent");
    n.depth = static_cast<int>(r.integer("depth"));
    if (n.depth < 1) throw SchemaViolation(r.child("depth"), "depth must be at least 1");
    n.topic = read_topic(r.object("topic"));

    const auto q = r.object("question");
    n.question = Question{q.str("text"), q.number("selection_score")};

    const auto a = r.object("answers");
    n.answers.answer_a = a.str("a");
    n.answers.answer_b = a.str("b");
    n.answers.failed_a = a.boolean("failed_a");
    n.answers.failed_b = a.boolean("failed_b");

    const auto& verdicts = r.at("verdicts", json::value_t::array);
    const auto vpath = r.child("verdicts");
    if (verdicts.size() != 2) throw SchemaViolation(vpath, "expected exactly two verdicts");
    n.verdicts.first = read_verdict(Reader(verdicts[0], vpath + "/0"));
    n.verdicts.second = read_verdict(Reader(verdicts[1], vpath + "/1"));

    const auto s = r.object("score");
    auto score = NodeScore::from_components(static_cast<int>(s.integer("a")), static_cast<int>(s.integer("b")));
    if (!score) throw SchemaViolation(s.path(), "score must be (2,0), (0,2) or (1,1)");
    n.score = *score;

    n.candidate_topics = r.strings("candidate_topics");
    const auto& follow = r.at("follow_up_topics", json::value_t::array);
    for (std::size_t i = 0; i < follow.size(); ++i)
        n.follow_up_topics.push_back(read_topic(Reader(follow[i], r.child("follow_up_topics") + "/" + std::to_string(i))));

    const auto& children = r.at("children", json::value_t::array);
    for (std::size_t i = 0; i < children.size(); ++i) {
        const auto& c = children[i];
        if (!c.is_number_integer() || c.get<std::int64_t>() < 0)
            throw SchemaViolation(r.child("children") + "/" + std::to_string(i), "expected a node id");
        n.children.push_back(c.get<std::size_t>());
    }

    n.status = r.parse_enum<NodeStatus>("status", node_status_from_string);
    n.expansion_failures = r.strings("expansion_failures");

    if (!r.raw().contains("weight")) throw SchemaViolation(r.child("weight"), "missing field");
    if (!r.raw()["weight"].is_null()) {
        const auto wr = r.object("weight");
        n.weight = NodeWeight{wr.number("root"), wr.number("topic"), wr.number("sibling"), wr.number("combined")};
    }
    return n;
}

void check_links(const EvalTree& tree, const std::string& path) {
    const auto nodes_path = path + "/nodes";
    for (const auto& n : tree.nodes) {
        const auto np = nodes_path + "/" + std::to_string(n.id);
        if (n.parent) {
            if (*n.parent >= n.id) throw SchemaViolation(np + "/parent", "parent must precede child");
            const auto& p = tree.nodes[*n.parent];
            if (n.depth != p.depth + 1) throw SchemaViolation(np + "/depth", "depth must be parent depth + 1");
        } else if (n.id != 0) {
            throw SchemaViolation(np + "/parent", "only node 0 may be a root");
        }
        for (std::size_t i = 0; i < n.children.size(); ++i) {
            const auto c = n.children[i];
            if (c >= tree.nodes.size() || tree.nodes[c].parent != n.id)
                throw SchemaViolation(np + "/children/" + std::to_string(i), "child does not point back to parent");
        }
    }
}

}  // namespace

json tree_to_json(const EvalTree& tree) {
    json nodes = json::array();
    for (const auto& n : tree.nodes) nodes.push_back(node_to_json(n));
    return json{{"root_topic", tree.root_topic},
                {"repeat", tree.repeat},
                {"failed", tree.failed},
                {"failure", tree.failure},
                {"nodes", nodes}};
}

json session_to_json(const SessionResult& result, const EvalConfig& config) {
    json trees = json::array();
    for (const auto& t : result.trees) trees.push_back(tree_to_json(t));
    json per_topic = json::object();
    for (const auto& [label, s] : result.per_topic) per_topic[label] = score_pair_to_json(s);
    json per_repeat = json::array();
    for (const auto& r : result.per_repeat)
        per_repeat.push_back(json{{"score", score_pair_to_json(r.score)},
                                  {"n_questions", r.n_questions},
                                  {"failed_topics", r.failed_topics}});
    // Replay settings describe how a run was driven, not what was evaluated,
    // so a recorded run and its replay serialize identically.
    EvalConfig snapshot = config;
    snapshot.backends.replay_mode = ReplayMode::Off;
    snapshot.backends.replay_path.clear();
    return json{
        {"format", kSessionFormat},
        {"config", config_to_json(snapshot)},
        {"seed", result.seed},
        {"model_a", result.model_a_id},
        {"model_b", result.model_b_id},
        {"score", score_pair_to_json(result.score)},
        {"n_questions", result.n_questions},
        {"variance_a", result.variance_a},
        {"per_topic", per_topic},
        {"per_repeat", per_repeat},
        {"trees", trees},
    };
}

EvalTree tree_from_json(const json& doc, const std::string& path) {
    const Reader r(doc, path);
    EvalTree tree;
    tree.root_topic = r.str("root_topic");
    tree.repeat = static_cast<int>(r.integer("repeat"));
    tree.failed = r.boolean("failed");
    tree.failure = r.str("failure");
    const auto& nodes = r.at("nodes", json::value_t::array);
    for (std::size_t i = 0; i < nodes.size(); ++i)
        tree.nodes.push_back(read_node(Reader(nodes[i], r.child("nodes") + "/" + std::to_string(i)), i));
    check_links(tree, path);
    return tree;
}

SessionFile session_from_json(const json& doc) {
    const Reader r(doc, "");
    if (r.str("format") != kSessionFormat) throw SchemaViolation("/format", "unsupported session format");
    SessionFile out;
    try {
        out.config = validate_config(r.at("config", json::value_t::object));
    } catch (const ConfigError& e) {
        std::string field = e.field();
        std::replace(field.begin(), field.end(), '.', '/');
        throw SchemaViolation("/config/" + field, e.what());
    }
    auto& res = out.result;
    const auto& seed = r.at("seed", json::value_t::number_integer);
    if (!seed.is_number_unsigned()) throw SchemaViolation("/seed", "expected a non-negative integer");
    res.seed = seed.get<std::uint64_t>();
    res.model_a_id = r.str("model_a");
    res.model_b_id = r.str("model_b");
    res.score = read_score_pair(r.object("score"));
    res.n_questions = r.number("n_questions");
    res.variance_a = r.number("variance_a");

    const auto pt = r.object("per_topic");
    for (const auto& [label, v] : pt.raw().items()) res.per_topic[label] = read_score_pair(Reader(v, pt.child(label)));

    const auto& reps = r.at("per_repeat", json::value_t::array);
    for (std::size_t i = 0; i < reps.size(); ++i) {
        const Reader rr(reps[i], r.child("per_repeat") + "/" + std::to_string(i));
        res.per_repeat.push_back(
            RepeatResult{read_score_pair(rr.object("score")), rr.index("n_questions"), rr.strings("failed_topics")});
    }

    const auto& trees = r.at("trees", json::value_t::array);
    for (std::size_t i = 0; i < trees.size(); ++i)
        res.trees.push_back(tree_from_json(trees[i], r.child("trees") + "/" + std::to_string(i)));
    return out;
}

std::string session_to_text(const SessionResult& result, const EvalConfig& config) {
    return session_to_json(result, config).dump(2) + "\n";
}

void write_file_atomic(const std::string& path, const std::string& text) {
    namespace fs = std::filesystem;
    const fs::path target(path);
    fs::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoFailure("cannot open " + tmp.string() + " for writing");
        out << text;
        out.flush();
        if (!out) throw IoFailure("write failed: " + tmp.string());
    }
    std::error_code ec;
    fs::rename(tmp, target, ec);
    if (ec) {
        fs::remove(tmp, ec);
        throw IoFailure("cannot rename onto " + path);
    }
}

void save_session(const SessionResult& result, const EvalConfig& config, const std::string& path) {
    write_file_atomic(path, session_to_text(result, config));
}

SessionFile load_session(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoFailure("cannot open session file " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    auto doc = json::parse(buf.str(), nullptr, false);
    if (doc.is_discarded()) throw SchemaViolation("/", "not valid JSON");
    return session_from_json(doc);
}

}  // namespace treejudge
