/// @file synthetic.hpp
/// @brief Simulated examiner, answering agents, topic extractor and judge.
///
/// These providers stand in for real models in desk-scale experiments. They
/// speak the same prompt formats as real models, so the engine runs unchanged;
/// the judge decides from skill metadata embedded in the agents' answers
/// rather than from answer quality. None of this is part of the evaluation
/// method itself.

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>

#include "treejudge/chat.hpp"
#include "treejudge/types.hpp"

namespace treejudge {

/// Per-topic skill levels keyed by case-insensitive topic-label prefix.
struct SkillTable {
    std::map<std::string, double> by_prefix;
    double default_skill = 0.0;

    /// Longest matching prefix wins; falls back to default_skill.
    double effective(const std::string& topic) const;

    /// Parses `2.5` or a JSON file `{"default": 1.0, "skills": {"Technology": 2.0}}`.
    static SkillTable parse(const std::string& spec);

    bool operator==(const SkillTable&) const = default;
};

class SyntheticAgent final : public ChatBackend {
public:
    SyntheticAgent(std::string name, SkillTable skills) : name_(std::move(name)), skills_(std::move(skills)) {}

    std::string complete(std::span<const Message> messages, const CompletionOptions& options) override;
    std::string name() const override { return name_; }
    const SkillTable& skills() const noexcept { return skills_; }

private:
    std::string name_;
    SkillTable skills_;
};

/// Deterministic answer text. Lists three follow-up subtopics of `topic` and
/// carries the agent's effective skill as a `[skill=...]` tag.
std::string synthetic_answer(const SyntheticAgent& agent, const std::string& question, const std::string& topic);

/// Topic recovered from a question written by SyntheticExaminer; otherwise
/// the question text itself.
std::string synthetic_question_topic(const std::string& question);

std::optional<double> read_skill_tag(std::string_view text);

/// Simulated verdict between the answers in slot 1 and slot 2: Tie inside the
/// band, otherwise slot 1 wins with probability logistic(skill_1 - skill_2).
/// Returns ModelA for slot 1, ModelB for slot 2.
Outcome oracle_judge(double skill_1, double skill_2, double tie_band, std::uint64_t seed);

/// Judge role for synthetic sessions. The draw depends on the query and the
/// call seed but not on slot order, so when both orderings of a pair receive
/// the same seed a low draw reads as a preference for slot 1 and a high draw
/// as a preference for slot 2; only draws in between produce a consistent
/// winner.
class OracleJudge final : public ChatBackend {
public:
    explicit OracleJudge(double tie_band) : tie_band_(tie_band) {}

    std::string complete(std::span<const Message> messages, const CompletionOptions& options) override;
    std::string name() const override { return "synthetic-judge"; }

private:
    double tie_band_;
};

/// Examiner role: `What should an expert know about <topic>? (facet N)`.
class SyntheticExaminer final : public ChatBackend {
public:
    std::string complete(std::span<const Message> messages, const CompletionOptions& options) override;
    std::string name() const override { return "synthetic-examiner"; }
};

/// Topic extraction role: returns the subtopics listed in a synthetic answer.
class SyntheticNer final : public ChatBackend {
public:
    std::string complete(std::span<const Message> messages, const CompletionOptions& options) override;
    std::string name() const override { return "synthetic-ner"; }
};

}  // namespace treejudge
