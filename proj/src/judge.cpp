#include "treejudge/judge.hpp"

#include <spdlog/spdlog.h>

#include "treejudge/errors.hpp"
#include "treejudge/json_extract.hpp"
#include "treejudge/seed.hpp"

namespace treejudge {

Messages render_judge_prompt(const TemplateSet& templates, const std::string& question, const std::string& first_answer,
                             const std::string& second_answer) {
    return {Message{Role::User, render(templates.judge,
                                       {{"question", question}, {"answer 1", first_answer}, {"answer 2", second_answer}})}};
}

Verdict parse_verdict(std::string_view raw, Direction direction) {
    const auto obj = first_json_object(raw);
    if (!obj) throw ParseError(ParseError::Kind::NoJsonFound, "no JSON object in judge output");
    const auto it = obj->find("Eval_result");
    if (it == obj->end() || !it->is_string())
        throw ParseError(ParseError::Kind::UnrecognizedValue, "judge output lacks an \"Eval_result\" string");
    const std::string value = to_lower(trim(it->get<std::string>()));
    if (value == "response 1") return Verdict::make(RawVerdict::Response1, direction);
    if (value == "response 2") return Verdict::make(RawVerdict::Response2, direction);
    if (value == "tie") return Verdict::make(RawVerdict::Tie, direction);
    throw ParseError(ParseError::Kind::UnrecognizedValue, "unrecognized Eval_result \"" + it->get<std::string>() + "\"");
}

namespace {

Verdict judge_once(ChatBackend& backend, const Messages& prompt, Direction direction, const JudgeSettings& settings) {
    for (int attempt = 0; attempt <= settings.retry_limit; ++attempt) {
        // Attempt 0 of both directions shares the node seed.
        const std::uint64_t seed =
            attempt == 0 ? settings.seed
                         : derive_seed(settings.seed, {static_cast<std::uint64_t>(direction), static_cast<std::uint64_t>(attempt)});
        try {
            return parse_verdict(backend.complete(prompt, CompletionOptions{settings.temperature, seed}), direction);
        } catch (const ParseError& e) {
            spdlog::debug("judge {} attempt {}: {}", to_string(direction), attempt + 1, e.what());
        }
    }
    spdlog::warn("judge {} verdict unparseable after {} attempts; recording a tie", to_string(direction),
                 settings.retry_limit + 1);
    return Verdict::make(RawVerdict::Tie, direction, /*degraded=*/true);
}

}  // namespace

VerdictPair exchange_judge(ChatBackend& backend, const TemplateSet& templates, const std::string& question,
                           const AnswerPair& answers, const JudgeSettings& settings) {
    const auto forward = render_judge_prompt(templates, question, answers.answer_a, answers.answer_b);
    const auto swapped = render_judge_prompt(templates, question, answers.answer_b, answers.answer_a);
    Verdict first = judge_once(backend, forward, Direction::Forward, settings);
    Verdict second = judge_once(backend, swapped, Direction::Swapped, settings);
    return {first, second};
}

NodeScore score_node(const VerdictPair& verdicts) noexcept {
    const Outcome x = verdicts.first.resolved;
    if (x != Outcome::Tie && x == verdicts.second.resolved) return NodeScore::win(x == Outcome::ModelA ? Slot::A : Slot::B);
    return NodeScore::tie();
}

}  // namespace treejudge
