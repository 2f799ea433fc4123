#pragma once
// Assembles the stateless initial and repair queries. Every part is trimmed
// and parts are joined with exactly one blank line, so bundles are
// byte-reproducible for golden tests.

#include "hdlagent/errors.hpp"
#include "hdlagent/extract.hpp"
#include "hdlagent/profile.hpp"

#include <optional>
#include <string>

namespace hdlagent {

// Totally ordered; each stage includes all capabilities of the lower ones.
enum class AblationStage {
    base = 0,
    description = 1,
    few_shot = 2,
    compile = 3,
    fixes = 4,
};

// Accepts the CLI spellings: base, description, fewshot (or few_shot),
// compile, fixes.
AblationStage stage_from_string(const std::string& text);
std::string stage_to_string(AblationStage stage);

inline constexpr const char* kCompileErrorConnective =
    "The previous code has the following compile error:";

// Diagnostics are capped head-biased before entering a repair query, so one
// runaway stack trace cannot blow the context window.
inline constexpr std::size_t kMaxErrorChars = 8000;

enum class PromptPurpose { initial, repair };

struct PromptBundle {
    std::optional<std::string> system_text;
    std::string user_text;
    AblationStage stage = AblationStage::fixes;
    PromptPurpose purpose = PromptPurpose::initial;
};

// description (stage >= description), few-shot Q/A pairs in profile order
// (stage >= few_shot), then prefix, question, suffix.
PromptBundle build_initial_query(const HdlProfile& profile, const std::string& question,
                                 AblationStage stage);

// The full initial query for this stage, then the entire latest code snippet,
// the connective sentence, the (capped) error text, and — only at stage=fixes
// with a matched fix — the fix explanation and example. Nothing from earlier
// iterations is carried over.
PromptBundle build_repair_query(const HdlProfile& profile, const std::string& question,
                                const CodeCandidate& latest_code, const std::string& error_text,
                                const std::optional<ErrorFix>& fix, AblationStage stage);

}  // namespace hdlagent
