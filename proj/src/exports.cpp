#include "treejudge/exports.hpp"

#include <algorithm>

#include <fmt/format.h>

#include "treejudge/errors.hpp"

namespace treejudge {

namespace {

std::string dot_escape(const std::string& s) {
    std::string out;
    out.reserve(s.size());
    for (char c : s) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\r': break;
            default: out += c;
        }
    }
    return out;
}

std::string format_score(double v) { return fmt::format("{:.4f}", v); }

}  // namespace

std::string export_tree_dot(const EvalTree& tree) {
    std::string out = "digraph tree {\n  node [shape=box];\n";
    for (const auto& n : tree.nodes) {
        const std::string label =
            fmt::format("{} | {}:{} | {}", n.topic.label, n.score.a(), n.score.b(), to_string(n.status));
        out += fmt::format("  n{} [label=\"{}\"];\n", n.id, dot_escape(label));
    }
    for (const auto& n : tree.nodes)
        for (NodeId c : n.children) out += fmt::format("  n{} -> n{};\n", n.id, c);
    out += "}\n";
    return out;
}

std::vector<std::string> session_topics(const SessionResult& result) {
    std::vector<std::string> topics;
    if (result.trees.empty()) {
        for (const auto& [label, _] : result.per_topic) topics.push_back(label);
        return topics;
    }
    const int first = result.trees.front().repeat;
    for (const auto& t : result.trees)
        if (t.repeat == first) topics.push_back(t.root_topic);
    return topics;
}

std::string csv_field(const std::string& value) {
    if (value.find_first_of(",\"\r\n") == std::string::npos) return value;
    std::string out = "\"";
    for (char c : value) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

std::string export_radar_csv(const std::map<std::string, SessionResult>& results) {
    if (results.empty()) return "model\n";
    const auto topics = session_topics(results.begin()->second);
    for (const auto& [model, r] : results) {
        if (session_topics(r) != topics)
            throw TopicMismatch("session for " + model + " uses a different topic list than " +
                                results.begin()->first);
    }
    std::string out = "model";
    for (const auto& t : topics) out += "," + csv_field(t);
    out += "\n";
    for (const auto& [model, r] : results) {
        out += csv_field(model);
        for (const auto& t : topics) {
            out += ",";
            if (auto it = r.per_topic.find(t); it != r.per_topic.end()) out += format_score(it->second.a);
        }
        out += "\n";
    }
    return out;
}

}  // namespace treejudge
