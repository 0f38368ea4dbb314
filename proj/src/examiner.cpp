#include "treejudge/examiner.hpp"

#include <spdlog/spdlog.h>

#include "treejudge/errors.hpp"
#include "treejudge/json_extract.hpp"
#include "treejudge/seed.hpp"

namespace treejudge {

Messages render_examiner_prompt(const TemplateSet& templates, const Topic& topic,
                                const std::vector<std::string>& history_digest) {
    std::string prompt = render(templates.examiner, {{"topic", topic.label}});
    if (!history_digest.empty()) {
        prompt += "\n\n";
        prompt += kHistoryInstruction;
        for (std::size_t i = 0; i < history_digest.size(); ++i) {
            prompt += "\n" + std::to_string(i + 1) + ". " + history_digest[i];
        }
    }
    return {Message{Role::User, std::move(prompt)}};
}

std::string parse_question(std::string_view raw) {
    const auto obj = first_json_object(raw);
    if (!obj) throw ParseError(ParseError::Kind::NoJsonFound, "no JSON object in examiner output");
    const auto it = obj->find("question");
    if (it == obj->end() || !it->is_string())
        throw ParseError(ParseError::Kind::MissingQuestionField, "examiner output lacks a \"question\" string");
    auto text = trim(it->get<std::string>());
    if (text.empty()) throw ParseError(ParseError::Kind::EmptyQuestion, "examiner produced an empty question");
    return text;
}

std::vector<std::string> sample_candidates(ChatBackend& backend, const TemplateSet& templates, const Topic& topic,
                                           const SessionMemory& memory, const SamplingSettings& settings) {
    const auto digest = settings.history_conditioning ? memory.questions() : std::vector<std::string>{};
    const Messages prompt = render_examiner_prompt(templates, topic, digest);

    std::vector<std::string> out;
    for (int slot = 0; slot < settings.candidates; ++slot) {
        for (int attempt = 0; attempt <= settings.retry_limit; ++attempt) {
            const CompletionOptions options{settings.temperature,
                                            derive_seed(settings.seed, {static_cast<std::uint64_t>(slot),
                                                                        static_cast<std::uint64_t>(attempt)})};
            try {
                out.push_back(parse_question(backend.complete(prompt, options)));
                break;
            } catch (const ParseError& e) {
                spdlog::debug("examiner slot {} attempt {}: {}", slot, attempt + 1, e.what());
            }
            if (attempt == settings.retry_limit)
                spdlog::warn("examiner slot {} for topic '{}' dropped after {} attempts", slot, topic.label, attempt + 1);
        }
    }
    if (out.empty())
        throw AllCandidatesFailed("examiner produced no usable question for topic '" + topic.label + "'");
    return out;
}

}  // namespace treejudge
