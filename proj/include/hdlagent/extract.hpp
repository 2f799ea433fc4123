#pragma once
// Pulls compilable code out of noisy LLM responses: fenced blocks first, then
// per-language boundary rules, then a bare-code fallback.

#include "hdlagent/errors.hpp"
#include "hdlagent/profile.hpp"

#include <string>

namespace hdlagent {

enum class ExtractionRule { fenced_block, language_boundary, whole_response };

std::string extraction_rule_to_string(ExtractionRule rule);
ExtractionRule extraction_rule_from_string(const std::string& text);

struct CodeCandidate {
    std::string code;          // trimmed of leading/trailing blank lines, non-empty
    std::string language;      // the profile name the code was extracted for
    int source_iteration = 0;  // which agent iteration produced the raw response
    ExtractionRule extraction_rule = ExtractionRule::whole_response;

    bool operator==(const CodeCandidate&) const = default;
};

// Rule order: (1) concatenate fenced blocks, (2) language boundary rule for
// the profile's language, (3) whole response iff nothing looks like prose.
// Throws NoCodeFound when all three fail.
CodeCandidate extract_code(const std::string& raw_response, const HdlProfile& profile,
                           int iteration);

// The rule-3 gate, exposed so tests can target it exactly: at least 4
// whitespace-separated words, ends in '.', '!' or '?', and contains no
// structural keyword of the given language.
bool looks_like_prose(const std::string& line, const std::string& language);

}  // namespace hdlagent
