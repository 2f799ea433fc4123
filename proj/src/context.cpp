#include "hdlagent/context.hpp"

#include "hdlagent/util.hpp"

#include <vector>

namespace hdlagent {

AblationStage stage_from_string(const std::string& text) {
    if (text == "base") return AblationStage::base;
    if (text == "description") return AblationStage::description;
    if (text == "fewshot" || text == "few_shot") return AblationStage::few_shot;
    if (text == "compile") return AblationStage::compile;
    if (text == "fixes") return AblationStage::fixes;
    throw ValidationError("stage", "unknown stage '" + text +
                                       "' (expected base|description|fewshot|compile|fixes)");
}

std::string stage_to_string(AblationStage stage) {
    switch (stage) {
        case AblationStage::base: return "base";
        case AblationStage::description: return "description";
        case AblationStage::few_shot: return "fewshot";
        case AblationStage::compile: return "compile";
        case AblationStage::fixes: return "fixes";
    }
    throw ValidationError("stage", "unknown stage value");
}

namespace {

void push_part(std::vector<std::string>& parts, const std::string& text) {
    std::string t = trim(text);
    if (!t.empty()) parts.push_back(std::move(t));
}

std::vector<std::string> initial_parts(const HdlProfile& profile, const std::string& question,
                                       AblationStage stage) {
    std::vector<std::string> parts;
    if (stage >= AblationStage::description) push_part(parts, profile.description_summary);
    if (stage >= AblationStage::few_shot) {
        for (const FewShotExample& example : profile.few_shot) {
            push_part(parts, example.question);
            push_part(parts, example.code);
        }
    }
    push_part(parts, profile.prefix);
    push_part(parts, question);
    push_part(parts, profile.suffix);
    return parts;
}

}  // namespace

PromptBundle build_initial_query(const HdlProfile& profile, const std::string& question,
                                 AblationStage stage) {
    if (trim(question).empty()) throw EmptyQuestion();
    PromptBundle bundle;
    bundle.system_text = profile.system_text;
    bundle.stage = stage;
    bundle.purpose = PromptPurpose::initial;
    bundle.user_text = join(initial_parts(profile, question, stage), "\n\n");
    return bundle;
}

PromptBundle build_repair_query(const HdlProfile& profile, const std::string& question,
                                const CodeCandidate& latest_code, const std::string& error_text,
                                const std::optional<ErrorFix>& fix, AblationStage stage) {
    if (stage < AblationStage::compile)
        throw StageTooLow("stage '" + stage_to_string(stage) +
                          "' never reaches the compiler; repair queries need compile or fixes");
    if (trim(question).empty()) throw EmptyQuestion();
    if (latest_code.code.empty())
        throw ValidationError("latest_code", "repair query needs the latest code snippet");
    std::string error = trim(error_text);
    if (error.empty()) throw EmptyError();
    if (error.size() > kMaxErrorChars) error = error.substr(0, kMaxErrorChars);

    std::vector<std::string> parts = initial_parts(profile, question, stage);
    push_part(parts, latest_code.code);
    parts.emplace_back(kCompileErrorConnective);
    parts.push_back(std::move(error));
    if (fix && stage == AblationStage::fixes) {
        push_part(parts, fix->explanation);
        push_part(parts, fix->example_fix);
    }

    PromptBundle bundle;
    bundle.system_text = profile.system_text;
    bundle.stage = stage;
    bundle.purpose = PromptPurpose::repair;
    bundle.user_text = join(parts, "\n\n");
    return bundle;
}

}  // namespace hdlagent
