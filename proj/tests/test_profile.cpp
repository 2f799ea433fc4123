#include "hdlagent/backend.hpp"
#include "hdlagent/errors.hpp"
#include "hdlagent/profile.hpp"

#include <doctest.h>
#include <nlohmann/json.hpp>

#include <algorithm>
#include <set>

using namespace hdlagent;
using nlohmann::json;

namespace {

json minimal_profile_json() {
    return json{{"name", "toy"},
                {"file_extension", "v"},
                {"prefix", "P."},
                {"suffix", "S."},
                {"compile_command", "true {file}"}};
}

}  // namespace

TEST_CASE("the four low-resource HDLs ship as bundled profiles") {
    auto names = bundled_profile_names();
    CHECK(names == std::vector<std::string>{"verilog", "chisel", "pyrtl", "dslx"});
    for (const auto& name : names) {
        CHECK(is_bundled_profile(name));
        HdlProfile p = load_bundled_profile(name);
        CHECK(p.name == name);
        CHECK(validate_profile(p).empty());
    }
    CHECK_FALSE(is_bundled_profile("vhdl"));
    CHECK_THROWS_AS(load_bundled_profile("vhdl"), ValidationError);
}

TEST_CASE("every bundled profile covers the five few-shot topics") {
    for (const auto& name : bundled_profile_names()) {
        HdlProfile p = load_bundled_profile(name);
        REQUIRE(p.few_shot.size() == 5);
        std::set<FewShotTopic> topics;
        for (const auto& ex : p.few_shot) topics.insert(ex.topic);
        CHECK(topics == std::set<FewShotTopic>{FewShotTopic::bit_ops, FewShotTopic::reduction,
                                               FewShotTopic::loop, FewShotTopic::multiplexing,
                                               FewShotTopic::multiply_add});
        CHECK_FALSE(p.description_summary.empty());
        CHECK_FALSE(p.error_fixes.empty());
    }
}

TEST_CASE("bundled prompt anchors are present") {
    HdlProfile dslx = load_bundled_profile("dslx");
    CHECK(dslx.prefix == "The following statements describe the problem to be addressed in DSLX.");
    CHECK(dslx.suffix.find("do not split the outputs into individual bits") != std::string::npos);
    CHECK(dslx.io_convention == IoConvention::dslx_single_out);

    HdlProfile pyrtl = load_bundled_profile("pyrtl");
    bool has_wire_fix = std::any_of(pyrtl.error_fixes.begin(), pyrtl.error_fixes.end(),
                                    [](const ErrorFix& f) {
                                        return f.explanation.find("use <<= for wire assignment") !=
                                               std::string::npos;
                                    });
    CHECK(has_wire_fix);
    CHECK(pyrtl.io_convention == IoConvention::pyrtl_named);

    CHECK(load_bundled_profile("verilog").io_convention == IoConvention::verilog_native);
    CHECK(load_bundled_profile("chisel").io_convention == IoConvention::chisel_io_prefixed);
}

TEST_CASE("bundled compile commands use the {file} placeholder exactly once") {
    for (const auto& name : bundled_profile_names()) {
        HdlProfile p = load_bundled_profile(name);
        std::size_t first = p.compile_command.find("{file}");
        REQUIRE(first != std::string::npos);
        CHECK(p.compile_command.find("{file}", first + 1) == std::string::npos);
        CHECK(p.compile_timeout_s >= 1);
    }
}

TEST_CASE("profile_from_json enforces required fields") {
    CHECK_NOTHROW(profile_from_json(minimal_profile_json()));
    for (const char* field : {"name", "file_extension", "prefix", "suffix", "compile_command"}) {
        json doc = minimal_profile_json();
        doc.erase(field);
        CHECK_THROWS_AS(profile_from_json(doc), ValidationError);
        try {
            profile_from_json(doc);
        } catch (const ValidationError& e) {
            CHECK(std::string(e.what()).find(field) != std::string::npos);
        }
    }
}

TEST_CASE("profile_from_json rejects violated invariants") {
    json doc = minimal_profile_json();
    doc["compile_command"] = "no placeholder";
    CHECK_THROWS_AS(profile_from_json(doc), ValidationError);

    doc = minimal_profile_json();
    doc["compile_command"] = "a {file} b {file}";
    CHECK_THROWS_AS(profile_from_json(doc), ValidationError);

    doc = minimal_profile_json();
    doc["compile_timeout_s"] = 0;
    CHECK_THROWS_AS(profile_from_json(doc), ValidationError);

    doc = minimal_profile_json();
    doc["few_shot"] = json::array({{{"topic", "bit_ops"}, {"question", "q"}}});
    CHECK_THROWS_AS(profile_from_json(doc), ValidationError);

    doc = minimal_profile_json();
    doc["few_shot"] = json::array({{{"topic", "no_such_topic"}, {"question", "q"}, {"code", "c"}}});
    CHECK_THROWS_AS(profile_from_json(doc), ValidationError);

    doc = minimal_profile_json();
    doc["error_fixes"] = json::array({{{"pattern", "("}, {"is_regex", true}}});
    CHECK_THROWS_AS(profile_from_json(doc), ValidationError);

    doc = minimal_profile_json();
    doc["io_convention"] = "unknown";
    CHECK_THROWS_AS(profile_from_json(doc), ValidationError);
}

TEST_CASE("profile json round-trips") {
    for (const auto& name : bundled_profile_names()) {
        HdlProfile p = load_bundled_profile(name);
        HdlProfile again = profile_from_json(profile_to_json(p));
        CHECK(p == again);
    }
}

TEST_CASE("topic and convention string mappings round-trip") {
    for (FewShotTopic t : {FewShotTopic::bit_ops, FewShotTopic::reduction, FewShotTopic::loop,
                           FewShotTopic::multiplexing, FewShotTopic::multiply_add,
                           FewShotTopic::other}) {
        CHECK(topic_from_string(to_string(t)) == t);
    }
    for (IoConvention c : {IoConvention::verilog_native, IoConvention::chisel_io_prefixed,
                           IoConvention::dslx_single_out, IoConvention::pyrtl_named}) {
        CHECK(io_convention_from_string(to_string(c)) == c);
    }
    CHECK_THROWS_AS(io_convention_from_string("bogus"), ValidationError);
}

TEST_CASE("summarize prompt follows the documented template") {
    std::string prompt = render_summarize_prompt("MANUAL BODY", "PyRTL", SummaryStyle::standard);
    CHECK(prompt ==
          "PyRTL is a Hardware Description Language with the following reference documentation "
          "and tutorial. Create documentation useful for LLMs trying to generate PyRTL code. The "
          "generated documentation should include code snippets and highlight any language "
          "syntax that is atypical for HDLs.\n\nMANUAL BODY");

    std::string concise = render_summarize_prompt("MANUAL BODY", "PyRTL", SummaryStyle::concise);
    CHECK(concise == prompt + "\n\nBe concise and avoid examples with similar syntax.");
}

TEST_CASE("summarize_reference issues exactly one backend call") {
    ScriptedBackend backend({ScriptedResponse{"THE SUMMARY", 10, 5}});
    std::string out = summarize_reference("manual", "DSLX", SummaryStyle::standard, backend);
    CHECK(out == "THE SUMMARY");
    CHECK(backend.calls_made() == 1);

    EchoBackend echo;
    std::string echoed = summarize_reference("manual", "DSLX", SummaryStyle::concise, echo);
    CHECK(echoed == render_summarize_prompt("manual", "DSLX", SummaryStyle::concise));
}
