#pragma once
// Per-HDL knowledge packs: language description, few-shot examples,
// prefix/suffix, compile command, and the error-fix knowledge base.

#include <nlohmann/json.hpp>

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace hdlagent {

class LlmBackend;

enum class FewShotTopic { bit_ops, reduction, loop, multiplexing, multiply_add, other };

struct FewShotExample {
    FewShotTopic topic = FewShotTopic::other;
    std::string question;
    std::string code;

    bool operator==(const FewShotExample&) const = default;
};

struct ErrorFix {
    std::string pattern;       // literal substring, or regex when is_regex
    bool is_regex = false;
    std::string explanation;
    std::string example_fix;   // before/after snippet

    bool operator==(const ErrorFix&) const = default;
};

enum class IoConvention { verilog_native, chisel_io_prefixed, dslx_single_out, pyrtl_named };

struct HdlProfile {
    std::string name;
    std::string file_extension;        // without the dot, e.g. "v"
    std::string description_summary;   // may be empty; then it contributes no prompt part
    std::string prefix;
    std::string suffix;
    std::string compile_command;       // template with {file} (exactly once) and {workdir}
    int compile_timeout_s = 60;
    IoConvention io_convention = IoConvention::verilog_native;
    std::optional<std::string> top_module_hint;
    std::optional<std::string> system_text;  // optional system message for every bundle
    std::vector<FewShotExample> few_shot;    // order is part of the prompt contract
    std::vector<ErrorFix> error_fixes;       // first match wins

    bool operator==(const HdlProfile&) const = default;
};

FewShotTopic topic_from_string(const std::string& s);
std::string to_string(FewShotTopic t);
IoConvention io_convention_from_string(const std::string& s);
std::string to_string(IoConvention c);

// Loads and validates a profile file. Throws ParseError on malformed JSON and
// ValidationError (naming the field) on a violated invariant.
HdlProfile load_profile(const std::filesystem::path& path);

// Same contract, starting from already-parsed JSON.
HdlProfile profile_from_json(const nlohmann::json& doc);

nlohmann::json profile_to_json(const HdlProfile& profile);

// One diagnostic string per violated invariant; empty means valid.
std::vector<std::string> validate_profile(const HdlProfile& profile);

// Bundled knowledge packs shipped with the library.
std::vector<std::string> bundled_profile_names();
bool is_bundled_profile(const std::string& name);
HdlProfile load_bundled_profile(const std::string& name);
std::string bundled_profile_json(const std::string& name);

enum class SummaryStyle { standard, concise };

struct RequestParams {
    std::string model;
    double temperature = 0.7;
    int max_output_tokens = 4096;
};

// Renders the reference-manual summarization prompt for `hdl_name`, issues
// exactly one backend call, and returns the completion text verbatim.
std::string summarize_reference(const std::string& manual_text, const std::string& hdl_name,
                                SummaryStyle style, LlmBackend& backend,
                                const RequestParams& params = {});

// The rendered prompt itself, exposed for the CLI and tests.
std::string render_summarize_prompt(const std::string& manual_text, const std::string& hdl_name,
                                    SummaryStyle style);

}  // namespace hdlagent
