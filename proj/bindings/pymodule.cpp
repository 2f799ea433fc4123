// Python bindings for the core operations: profiles, prompt assembly, code
// extraction, the repair loop (with scripted responses), interface
// normalization, and the benchmark arithmetic.

#include "hdlagent/agent.hpp"
#include "hdlagent/backend.hpp"
#include "hdlagent/bench.hpp"
#include "hdlagent/cli.hpp"
#include "hdlagent/context.hpp"
#include "hdlagent/errors.hpp"
#include "hdlagent/extract.hpp"
#include "hdlagent/profile.hpp"
#include "hdlagent/verilog_io.hpp"

#include <nlohmann/json.hpp>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <string>
#include <vector>

namespace py = pybind11;
using namespace hdlagent;
using nlohmann::json;

namespace {

HdlProfile profile_for_language(const std::string& language) {
    if (is_bundled_profile(language)) return load_bundled_profile(language);
    HdlProfile p;  // extraction only reads the name; the rest is filler
    p.name = language;
    p.file_extension = "txt";
    p.prefix = "-";
    p.suffix = "-";
    p.compile_command = "true {file}";
    return p;
}

SummaryStyle style_from_string(const std::string& style) {
    if (style == "standard" || style == "default") return SummaryStyle::standard;
    if (style == "concise") return SummaryStyle::concise;
    throw ValidationError("style", "unknown style: " + style + " (expected standard or concise)");
}

std::string run_scripted_json(const std::string& question, const HdlProfile& profile,
                              const std::vector<std::string>& responses,
                              const std::string& stage, int max_iterations) {
    std::vector<ScriptedResponse> script;
    script.reserve(responses.size());
    for (const std::string& text : responses) script.push_back({text, {}, {}});
    ScriptedBackend backend(std::move(script));
    AgentOptions options;
    options.max_iterations = max_iterations;
    AgentRunRecord record =
        run_agent(question, profile, backend, stage_from_string(stage), options);
    return run_record_to_json(record).dump();
}

bool pass_at_k_bools(const std::vector<bool>& outcomes, int k) {
    std::vector<AgentRunRecord> records;
    records.reserve(outcomes.size());
    for (bool passed : outcomes) {
        AgentRunRecord r;
        r.final_status = passed ? FinalStatus::passed_compile : FinalStatus::exhausted;
        records.push_back(std::move(r));
    }
    return pass_at_k(records, k);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Grounded LLM code generation for low-resource HDLs";

    py::register_exception<Error>(m, "HdlAgentError");

    py::class_<HdlProfile>(m, "Profile")
        .def_property_readonly("name", [](const HdlProfile& p) { return p.name; })
        .def_property_readonly("file_extension",
                               [](const HdlProfile& p) { return p.file_extension; })
        .def_property_readonly("description",
                               [](const HdlProfile& p) { return p.description_summary; })
        .def_property_readonly("prefix", [](const HdlProfile& p) { return p.prefix; })
        .def_property_readonly("suffix", [](const HdlProfile& p) { return p.suffix; })
        .def_property_readonly("compile_command",
                               [](const HdlProfile& p) { return p.compile_command; })
        .def_property_readonly("io_convention",
                               [](const HdlProfile& p) { return to_string(p.io_convention); })
        .def("to_json", [](const HdlProfile& p) { return profile_to_json(p).dump(2); })
        .def_static("from_json",
                    [](const std::string& text) { return profile_from_json(json::parse(text)); })
        .def("__repr__", [](const HdlProfile& p) { return "<Profile '" + p.name + "'>"; });

    m.def("bundled_profiles", &bundled_profile_names,
          "Names of the profiles shipped with the library.");
    m.def("load_profile", &resolve_profile, py::arg("name_or_path"),
          "Load a bundled profile by name, or any profile from a JSON file path.");

    m.def(
        "build_initial_query",
        [](const HdlProfile& profile, const std::string& question, const std::string& stage) {
            return build_initial_query(profile, question, stage_from_string(stage)).user_text;
        },
        py::arg("profile"), py::arg("question"), py::arg("stage") = "fixes",
        "Assemble the stateless initial prompt for one problem.");

    m.def(
        "extract_code",
        [](const std::string& raw, const std::string& language, int iteration) {
            CodeCandidate got = extract_code(raw, profile_for_language(language), iteration);
            py::dict out;
            out["code"] = got.code;
            out["rule"] = extraction_rule_to_string(got.extraction_rule);
            out["language"] = got.language;
            return out;
        },
        py::arg("raw"), py::arg("language") = "verilog", py::arg("iteration") = 1,
        "Extract the code block from a raw model response. Raises HdlAgentError "
        "when the response holds no code.");

    m.def("run_scripted_json", &run_scripted_json, py::arg("question"), py::arg("profile"),
          py::arg("responses"), py::arg("stage") = "fixes", py::arg("max_iterations") = 8,
          "Run the full repair loop against scripted responses; returns the run "
          "record as a JSON string.");

    m.def(
        "normalize_interface",
        [](const std::string& verilog, const std::string& convention,
           const std::string& golden_verilog) {
            return normalize(verilog, io_convention_from_string(convention),
                             parse_interface(golden_verilog));
        },
        py::arg("verilog"), py::arg("convention"), py::arg("golden_verilog"),
        "Rename convention-mangled ports, strip unused clock/reset, and check "
        "the result against the golden interface.");

    m.def(
        "interface_ports",
        [](const std::string& verilog) {
            ModuleInterface iface = parse_interface(verilog);
            py::list ports;
            for (const PortDecl& port : iface.ports) {
                py::dict d;
                d["name"] = port.name;
                d["direction"] = port.direction == PortDirection::input    ? "input"
                                 : port.direction == PortDirection::output ? "output"
                                                                           : "inout";
                d["width"] = port.width();
                ports.append(d);
            }
            py::dict out;
            out["module"] = iface.module_name;
            out["ports"] = ports;
            return out;
        },
        py::arg("verilog"), "Parse an ANSI-style module header into its port list.");

    m.def(
        "check_io_match",
        [](const std::string& candidate, const std::string& golden) {
            IoCheck r = check_io_match(parse_interface(candidate), parse_interface(golden));
            py::dict out;
            out["matches"] = r.matches;
            out["diff"] = r.diff;
            return out;
        },
        py::arg("candidate_verilog"), py::arg("golden_verilog"),
        "Set-compare two module interfaces; diff lists ports only on one side.");

    m.def(
        "summarize_prompt",
        [](const std::string& manual, const std::string& hdl, const std::string& style) {
            return render_summarize_prompt(manual, hdl, style_from_string(style));
        },
        py::arg("manual"), py::arg("hdl"), py::arg("style") = "standard",
        "Render the prompt that asks a model to condense an HDL reference manual.");

    m.def("pass_at_k", &pass_at_k_bools, py::arg("outcomes"), py::arg("k"),
          "True when at least one of the first k attempt outcomes passed.");
    m.def("qor_ratio", &qor_ratio, py::arg("candidate_gates"), py::arg("best_gates"),
          "Gate-count ratio against the best known implementation (1.0 = optimal).");
    m.def("bucket_label", &bucket_label, py::arg("loc"),
          "Lines-of-code bucket: <25, 25-50, 50-75, or >75.");
    m.def("count_loc", &count_loc, py::arg("verilog"),
          "Non-blank, non-comment lines of Verilog.");
    m.def("estimate_tokens", &estimate_tokens, py::arg("characters"),
          "Fallback token estimate used when a provider reports no usage.");

    m.attr("__version__") = "0.1.0";
}
