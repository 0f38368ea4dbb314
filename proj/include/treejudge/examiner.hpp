/// @file examiner.hpp
/// @brief Question generation for a topic.

#pragma once

#include <string>
#include <vector>

#include "treejudge/chat.hpp"
#include "treejudge/templates.hpp"
#include "treejudge/types.hpp"

namespace treejudge {

inline constexpr std::string_view kHistoryInstruction = "Do not repeat or closely paraphrase these prior questions.";

/// Examiner template with {topic} filled in. A non-empty history appends the
/// anti-repetition instruction followed by a numbered list of prior questions.
Messages render_examiner_prompt(const TemplateSet& templates, const Topic& topic,
                                const std::vector<std::string>& history_digest);

/// The trimmed "question" field of the first JSON object in `raw`. Throws ParseError.
std::string parse_question(std::string_view raw);

struct SamplingSettings {
    int candidates = 3;  // m
    double temperature = 1.0;
    int retry_limit = 3;
    bool history_conditioning = true;
    std::uint64_t seed = 0;  // sub-seed for this node's examiner calls
};

/// Draws `settings.candidates` independent questions. Each candidate slot gets
/// 1 + retry_limit attempts; slots that never parse are dropped. Throws
/// AllCandidatesFailed when nothing survives. Output order follows slot index.
std::vector<std::string> sample_candidates(ChatBackend& backend, const TemplateSet& templates, const Topic& topic,
                                           const SessionMemory& memory, const SamplingSettings& settings);

}  // namespace treejudge
