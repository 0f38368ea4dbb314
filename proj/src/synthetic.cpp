#include "treejudge/synthetic.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <regex>
#include <vector>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "treejudge/errors.hpp"
#include "treejudge/seed.hpp"

namespace treejudge {

using json = nlohmann::json;

namespace {

constexpr std::array<const char*, 16> kFacets = {
    "fundamentals", "history",   "applications", "standards",  "security", "economics",
    "ethics",       "tooling",   "research",     "regulation", "performance", "design",
    "education",    "industry",  "future trends", "case studies",
};

constexpr std::string_view kExaminerLead = "Your task is to ask a question about ";
constexpr std::string_view kSubtopicsLead = "Subtopics: ";

std::string between(std::string_view text, std::string_view open, std::string_view close) {
    const auto start = text.find(open);
    if (start == std::string_view::npos) return {};
    const auto from = start + open.size();
    const auto end = close.empty() ? std::string_view::npos : text.find(close, from);
    return std::string(text.substr(from, end == std::string_view::npos ? std::string_view::npos : end - from));
}

}  // namespace

double SkillTable::effective(const std::string& topic) const {
    const std::string lowered = to_lower(topic);
    std::size_t best = 0;
    std::optional<double> skill;
    for (const auto& [prefix, value] : by_prefix) {
        const std::string p = to_lower(prefix);
        if (lowered.starts_with(p) && (!skill || p.size() > best)) {
            best = p.size();
            skill = value;
        }
    }
    return skill.value_or(default_skill);
}

SkillTable SkillTable::parse(const std::string& spec) {
    const std::string s = trim(spec);
    char* end = nullptr;
    const double value = std::strtod(s.c_str(), &end);
    if (!s.empty() && end == s.c_str() + s.size() && std::isfinite(value)) return SkillTable{{}, value};

    std::ifstream in(s);
    if (!in) throw ConfigError(ConfigError::Kind::OutOfRange, "synthetic", "not a number or readable skill file: " + s);
    auto doc = json::parse(in, nullptr, false);
    if (doc.is_discarded() || !doc.is_object())
        throw ConfigError(ConfigError::Kind::TypeMismatch, s, "skill table must be a JSON object");
    SkillTable table;
    if (doc.contains("default")) {
        if (!doc["default"].is_number()) throw ConfigError(ConfigError::Kind::TypeMismatch, "default", "expected a number");
        table.default_skill = doc["default"].get<double>();
    }
    if (doc.contains("skills")) {
        if (!doc["skills"].is_object()) throw ConfigError(ConfigError::Kind::TypeMismatch, "skills", "expected an object");
        for (const auto& [prefix, v] : doc["skills"].items()) {
            if (!v.is_number()) throw ConfigError(ConfigError::Kind::TypeMismatch, "skills." + prefix, "expected a number");
            table.by_prefix[prefix] = v.get<double>();
        }
    }
    return table;
}

std::string synthetic_question_topic(const std::string& question) {
    static const std::regex pattern(R"(about (.+)\? \(facet \d+\)$)");
    std::smatch m;
    if (std::regex_search(question, m, pattern)) return m[1].str();
    return trim(question);
}

std::string synthetic_answer(const SyntheticAgent& agent, const std::string& question, const std::string& topic) {
    // Three distinct facets chosen from the question alone, so every agent
    // offers the same follow-up material and only the skill tag differs.
    std::vector<std::size_t> picks;
    std::uint64_t h = fnv1a(question);
    while (picks.size() < 3) {
        h = mix64(h);
        const std::size_t idx = h % kFacets.size();
        if (std::find(picks.begin(), picks.end(), idx) == picks.end()) picks.push_back(idx);
    }
    const double skill = agent.skills().effective(topic);
    return fmt::format(
        "On {0}: this answer addresses \"{1}\" at a consistent level of expertise.\n"
        "{2}{0} > {3}; {0} > {4}; {0} > {5}\n"
        "[skill={6}]",
        topic, question, kSubtopicsLead, kFacets[picks[0]], kFacets[picks[1]], kFacets[picks[2]], skill);
}

std::string SyntheticAgent::complete(std::span<const Message> messages, const CompletionOptions&) {
    const std::string question = trim(user_text(messages));
    return synthetic_answer(*this, question, synthetic_question_topic(question));
}

std::optional<double> read_skill_tag(std::string_view text) {
    static const std::regex pattern(R"(\[skill=([-+0-9.eE]+|inf|-inf)\])");
    std::cmatch m;
    if (!std::regex_search(text.begin(), text.end(), m, pattern)) return std::nullopt;
    return std::strtod(m[1].str().c_str(), nullptr);
}

Outcome oracle_judge(double skill_1, double skill_2, double tie_band, std::uint64_t seed) {
    const double gap = skill_1 - skill_2;
    if (std::abs(gap) < tie_band) return Outcome::Tie;
    const double p_first = 1.0 / (1.0 + std::exp(-gap));
    return unit_interval(seed) < p_first ? Outcome::ModelA : Outcome::ModelB;
}

std::string OracleJudge::complete(std::span<const Message> messages, const CompletionOptions& options) {
    const std::string prompt = user_text(messages);
    const std::string query = between(prompt, "[Query]: ", "\n\n[Response 1]: ");
    const std::string first = between(prompt, "[Response 1]: ", "\n\n[Response 2]: ");
    const std::string second = between(prompt, "[Response 2]: ", "\n\nAssessment Criteria:");
    const auto s1 = read_skill_tag(first);
    const auto s2 = read_skill_tag(second);
    if (!s1 || !s2) return R"({"Eval_result": "Tie"})";
    switch (oracle_judge(*s1, *s2, tie_band_, derive_seed(options.seed, {fnv1a(query)}))) {
        case Outcome::ModelA: return R"({"Eval_result": "Response 1"})";
        case Outcome::ModelB: return R"({"Eval_result": "Response 2"})";
        case Outcome::Tie: break;
    }
    return R"({"Eval_result": "Tie"})";
}

std::string SyntheticExaminer::complete(std::span<const Message> messages, const CompletionOptions& options) {
    const std::string prompt = user_text(messages);
    std::string topic = trim(between(prompt, kExaminerLead, "\n"));
    if (topic.ends_with('.')) topic.pop_back();
    if (topic.empty()) topic = trim(prompt.substr(0, 80));
    const json out{{"question", fmt::format("What should an expert know about {}? (facet {})", topic, options.seed % 1000)}};
    return out.dump();
}

std::string SyntheticNer::complete(std::span<const Message> messages, const CompletionOptions&) {
    const std::string prompt = user_text(messages);
    // The template's worked example also has an [answer] slot; take the last.
    const auto at = prompt.rfind("[answer]:");
    json labels = json::array();
    if (at != std::string::npos) {
        const std::string line = between(std::string_view(prompt).substr(at), kSubtopicsLead, "\n");
        std::size_t pos = 0;
        while (pos <= line.size()) {
            const auto next = line.find("; ", pos);
            auto item = trim(line.substr(pos, next == std::string::npos ? std::string::npos : next - pos));
            if (!item.empty()) labels.push_back(item);
            if (next == std::string::npos) break;
            pos = next + 2;
        }
    }
    return labels.dump();
}

}  // namespace treejudge
