/// @file judge.hpp
/// @brief Order-swapped pairwise judging and node scoring.

#pragma once

#include "treejudge/chat.hpp"
#include "treejudge/templates.hpp"
#include "treejudge/types.hpp"

namespace treejudge {

Messages render_judge_prompt(const TemplateSet& templates, const std::string& question, const std::string& first_answer,
                             const std::string& second_answer);

/// Reads "Eval_result" from the first JSON object (value matched
/// case-insensitively) and resolves it through `direction`. Throws ParseError.
Verdict parse_verdict(std::string_view raw, Direction direction);

struct JudgeSettings {
    double temperature = 0.0;
    int retry_limit = 3;
    std::uint64_t seed = 0;  // same sub-seed for both directions of one node
};

/// Judges A-first then B-first. A direction whose output never parses within
/// 1 + retry_limit attempts becomes a degraded Tie. Backend errors propagate.
VerdictPair exchange_judge(ChatBackend& backend, const TemplateSet& templates, const std::string& question,
                           const AnswerPair& answers, const JudgeSettings& settings);

/// (2,0) or (0,2) when both verdicts name the same model, (1,1) otherwise.
NodeScore score_node(const VerdictPair& verdicts) noexcept;

}  // namespace treejudge
