#include "hdlagent/profile.hpp"

#include "hdlagent/backend.hpp"
#include "hdlagent/errors.hpp"
#include "hdlagent/util.hpp"

#include <nlohmann/json.hpp>

#include <regex>

namespace hdlagent {

using nlohmann::json;

FewShotTopic topic_from_string(const std::string& s) {
    if (s == "bit_ops") return FewShotTopic::bit_ops;
    if (s == "reduction") return FewShotTopic::reduction;
    if (s == "loop") return FewShotTopic::loop;
    if (s == "multiplexing") return FewShotTopic::multiplexing;
    if (s == "multiply_add") return FewShotTopic::multiply_add;
    if (s == "other") return FewShotTopic::other;
    throw ValidationError("topic", "unknown few-shot topic '" + s + "'");
}

std::string to_string(FewShotTopic t) {
    switch (t) {
        case FewShotTopic::bit_ops: return "bit_ops";
        case FewShotTopic::reduction: return "reduction";
        case FewShotTopic::loop: return "loop";
        case FewShotTopic::multiplexing: return "multiplexing";
        case FewShotTopic::multiply_add: return "multiply_add";
        case FewShotTopic::other: return "other";
    }
    return "other";
}

IoConvention io_convention_from_string(const std::string& s) {
    if (s == "verilog_native") return IoConvention::verilog_native;
    if (s == "chisel_io_prefixed") return IoConvention::chisel_io_prefixed;
    if (s == "dslx_single_out") return IoConvention::dslx_single_out;
    if (s == "pyrtl_named") return IoConvention::pyrtl_named;
    throw ValidationError("io_convention", "unknown convention '" + s + "'");
}

std::string to_string(IoConvention c) {
    switch (c) {
        case IoConvention::verilog_native: return "verilog_native";
        case IoConvention::chisel_io_prefixed: return "chisel_io_prefixed";
        case IoConvention::dslx_single_out: return "dslx_single_out";
        case IoConvention::pyrtl_named: return "pyrtl_named";
    }
    return "verilog_native";
}

namespace {

std::string require_string(const json& doc, const char* key) {
    if (!doc.contains(key)) {
        throw ValidationError(key, "required field is missing");
    }
    if (!doc.at(key).is_string()) {
        throw ValidationError(key, "must be a string");
    }
    return doc.at(key).get<std::string>();
}

}  // namespace

HdlProfile profile_from_json(const json& doc) {
    if (!doc.is_object()) {
        throw ParseError("profile document must be a JSON object");
    }

    HdlProfile p;
    p.name = require_string(doc, "name");
    p.file_extension = require_string(doc, "file_extension");
    p.prefix = require_string(doc, "prefix");
    p.suffix = require_string(doc, "suffix");
    p.compile_command = require_string(doc, "compile_command");

    if (doc.contains("description_summary")) {
        if (!doc.at("description_summary").is_string()) {
            throw ValidationError("description_summary", "must be a string");
        }
        p.description_summary = doc.at("description_summary").get<std::string>();
    }
    if (doc.contains("compile_timeout_s") && !doc.at("compile_timeout_s").is_null()) {
        if (!doc.at("compile_timeout_s").is_number_integer()) {
            throw ValidationError("compile_timeout_s", "must be an integer");
        }
        p.compile_timeout_s = doc.at("compile_timeout_s").get<int>();
    }
    if (doc.contains("io_convention") && !doc.at("io_convention").is_null()) {
        if (!doc.at("io_convention").is_string()) {
            throw ValidationError("io_convention", "must be a string");
        }
        p.io_convention = io_convention_from_string(doc.at("io_convention").get<std::string>());
    }
    if (doc.contains("top_module_hint") && !doc.at("top_module_hint").is_null()) {
        if (!doc.at("top_module_hint").is_string()) {
            throw ValidationError("top_module_hint", "must be a string or null");
        }
        p.top_module_hint = doc.at("top_module_hint").get<std::string>();
    }
    if (doc.contains("system_text") && !doc.at("system_text").is_null()) {
        if (!doc.at("system_text").is_string()) {
            throw ValidationError("system_text", "must be a string or null");
        }
        p.system_text = doc.at("system_text").get<std::string>();
    }

    if (doc.contains("few_shot")) {
        if (!doc.at("few_shot").is_array()) {
            throw ValidationError("few_shot", "must be an array");
        }
        std::size_t i = 0;
        for (const auto& item : doc.at("few_shot")) {
            std::string at = "few_shot[" + std::to_string(i) + "]";
            if (!item.is_object()) throw ValidationError(at, "must be an object");
            FewShotExample ex;
            if (!item.contains("topic") || !item.at("topic").is_string()) {
                throw ValidationError(at + ".topic", "required string");
            }
            ex.topic = topic_from_string(item.at("topic").get<std::string>());
            if (!item.contains("question") || !item.at("question").is_string()) {
                throw ValidationError(at + ".question", "required string");
            }
            ex.question = item.at("question").get<std::string>();
            if (!item.contains("code") || !item.at("code").is_string()) {
                throw ValidationError(at + ".code", "required string");
            }
            ex.code = item.at("code").get<std::string>();
            p.few_shot.push_back(std::move(ex));
            ++i;
        }
    }

    if (doc.contains("error_fixes")) {
        if (!doc.at("error_fixes").is_array()) {
            throw ValidationError("error_fixes", "must be an array");
        }
        std::size_t i = 0;
        for (const auto& item : doc.at("error_fixes")) {
            std::string at = "error_fixes[" + std::to_string(i) + "]";
            if (!item.is_object()) throw ValidationError(at, "must be an object");
            ErrorFix fix;
            if (!item.contains("pattern") || !item.at("pattern").is_string()) {
                throw ValidationError(at + ".pattern", "required string");
            }
            fix.pattern = item.at("pattern").get<std::string>();
            if (item.contains("is_regex")) {
                if (!item.at("is_regex").is_boolean()) {
                    throw ValidationError(at + ".is_regex", "must be a boolean");
                }
                fix.is_regex = item.at("is_regex").get<bool>();
            }
            if (item.contains("explanation") && item.at("explanation").is_string()) {
                fix.explanation = item.at("explanation").get<std::string>();
            }
            if (item.contains("example_fix") && item.at("example_fix").is_string()) {
                fix.example_fix = item.at("example_fix").get<std::string>();
            }
            p.error_fixes.push_back(std::move(fix));
            ++i;
        }
    }

    auto diagnostics = validate_profile(p);
    if (!diagnostics.empty()) {
        std::string field = diagnostics.front().substr(0, diagnostics.front().find(':'));
        throw ValidationError(field, diagnostics.front());
    }
    return p;
}

HdlProfile load_profile(const std::filesystem::path& path) {
    std::string text = read_file(path);
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError("malformed profile file " + path.string() + ": " + e.what());
    }
    return profile_from_json(doc);
}

json profile_to_json(const HdlProfile& p) {
    json few_shot = json::array();
    for (const auto& ex : p.few_shot) {
        few_shot.push_back({{"topic", to_string(ex.topic)},
                            {"question", ex.question},
                            {"code", ex.code}});
    }
    json fixes = json::array();
    for (const auto& fix : p.error_fixes) {
        fixes.push_back({{"pattern", fix.pattern},
                         {"is_regex", fix.is_regex},
                         {"explanation", fix.explanation},
                         {"example_fix", fix.example_fix}});
    }
    json doc = {
        {"name", p.name},
        {"file_extension", p.file_extension},
        {"description_summary", p.description_summary},
        {"prefix", p.prefix},
        {"suffix", p.suffix},
        {"compile_command", p.compile_command},
        {"compile_timeout_s", p.compile_timeout_s},
        {"io_convention", to_string(p.io_convention)},
        {"top_module_hint", p.top_module_hint ? json(*p.top_module_hint) : json(nullptr)},
        {"few_shot", std::move(few_shot)},
        {"error_fixes", std::move(fixes)},
    };
    if (p.system_text) {
        doc["system_text"] = *p.system_text;
    }
    return doc;
}

std::vector<std::string> validate_profile(const HdlProfile& p) {
    std::vector<std::string> out;
    if (p.name.empty()) out.push_back("name: must be non-empty");
    if (p.file_extension.empty()) out.push_back("file_extension: must be non-empty");
    if (p.prefix.empty()) out.push_back("prefix: must be non-empty");
    if (p.suffix.empty()) out.push_back("suffix: must be non-empty");

    std::size_t first = p.compile_command.find("{file}");
    if (first == std::string::npos) {
        out.push_back("compile_command: must contain the {file} placeholder");
    } else if (p.compile_command.find("{file}", first + 1) != std::string::npos) {
        out.push_back("compile_command: {file} placeholder must appear exactly once");
    }
    if (p.compile_timeout_s < 1) {
        out.push_back("compile_timeout_s: must be at least 1 second");
    }

    for (std::size_t i = 0; i < p.few_shot.size(); ++i) {
        const auto& ex = p.few_shot[i];
        std::string at = "few_shot[" + std::to_string(i) + "]";
        if (ex.question.empty()) out.push_back(at + ".question: must be non-empty");
        if (ex.code.empty()) out.push_back(at + ".code: must be non-empty");
    }

    for (std::size_t i = 0; i < p.error_fixes.size(); ++i) {
        const auto& fix = p.error_fixes[i];
        std::string at = "error_fixes[" + std::to_string(i) + "].pattern";
        if (fix.pattern.empty()) {
            out.push_back(at + ": must be non-empty");
            continue;
        }
        if (fix.is_regex) {
            try {
                std::regex re(fix.pattern);
            } catch (const std::regex_error& e) {
                out.push_back(at + ": invalid regex (" + e.what() + ")");
            }
        }
    }
    return out;
}

std::string render_summarize_prompt(const std::string& manual_text, const std::string& hdl_name,
                                    SummaryStyle style) {
    std::string prompt = hdl_name +
        " is a Hardware Description Language with the following reference documentation and "
        "tutorial. Create documentation useful for LLMs trying to generate " + hdl_name +
        " code. The generated documentation should include code snippets and highlight any "
        "language syntax that is atypical for HDLs.";
    prompt += "\n\n" + trim(manual_text);
    if (style == SummaryStyle::concise) {
        prompt += "\n\nBe concise and avoid examples with similar syntax.";
    }
    return prompt;
}

std::string summarize_reference(const std::string& manual_text, const std::string& hdl_name,
                                SummaryStyle style, LlmBackend& backend,
                                const RequestParams& params) {
    if (trim(manual_text).empty()) {
        throw std::invalid_argument("manual_text must be non-empty");
    }
    ChatRequest request;
    request.user_text = render_summarize_prompt(manual_text, hdl_name, style);
    request.model = params.model;
    request.temperature = params.temperature;
    request.max_output_tokens = params.max_output_tokens;
    return backend.complete(request).text;
}

}  // namespace hdlagent
