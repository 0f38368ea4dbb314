/// @file templates.hpp
/// @brief Prompt templates for the examiner, judge and topic-extraction roles.
///
/// Placeholders are `{name}`. Only names passed to render() are substituted,
/// in a single pass, so literal JSON braces in the templates and any braces in
/// substituted values survive untouched.

#pragma once

#include <map>
#include <string>
#include <string_view>

namespace treejudge {

struct TemplateSet {
    std::string examiner;  // {topic}
    std::string judge;     // {question} {answer 1} {answer 2}
    std::string ner;       // {topic} {question} {answer}

    /// Copies compiled in from the repository's templates/ directory.
    static const TemplateSet& builtin();

    /// Reads examiner.txt, judge.txt and ner.txt from `dir`. One trailing
    /// newline per file is dropped. Throws IoFailure.
    static TemplateSet load(const std::string& dir);

    bool operator==(const TemplateSet&) const = default;
};

std::string render(std::string_view tmpl, const std::map<std::string, std::string, std::less<>>& values);

}  // namespace treejudge
