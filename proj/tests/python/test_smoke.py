"""End-to-end smoke of the Python surface over the compiled core."""

import json

import pytest

import hdlagent

TOY_PROFILE = {
    "name": "toy",
    "file_extension": "v",
    "prefix": "PREFIX",
    "suffix": "SUFFIX",
    "compile_command": "grep -q GOOD {file}",
    "compile_timeout_s": 10,
    "io_convention": "verilog_native",
}

GOOD = "module t(input a, output y);\n  assign y = a; // GOOD\nendmodule"
BAD = "module t(input a, output y);\nendmodule"


def fenced(code):
    return "```\n" + code + "\n```"


def test_bundled_profiles_round_trip():
    names = hdlagent.bundled_profiles()
    assert names == ["verilog", "chisel", "pyrtl", "dslx"]
    for name in names:
        profile = hdlagent.load_profile(name)
        assert profile.name == name
        clone = hdlagent.Profile.from_json(profile.to_json())
        assert clone.to_json() == profile.to_json()


def test_initial_query_part_order():
    profile = hdlagent.load_profile("verilog")
    question = "Make an adder."
    prompt = hdlagent.build_initial_query(profile, question, stage="fixes")
    assert prompt.index(profile.description[:30]) < prompt.index(profile.prefix[:30])
    assert prompt.index(profile.prefix[:30]) < prompt.index(question)
    assert prompt.index(question) < prompt.index(profile.suffix[:30])


def test_extract_code_rules():
    got = hdlagent.extract_code(fenced(GOOD), language="verilog")
    assert got["code"] == GOOD
    assert got["rule"] == "fenced_block"
    with pytest.raises(hdlagent.HdlAgentError):
        hdlagent.extract_code("No code here, sorry about that one.", language="verilog")


def test_scripted_repair_loop():
    profile = hdlagent.Profile.from_json(json.dumps(TOY_PROFILE))
    record = hdlagent.run_scripted(
        "Make a passthrough.", profile, [fenced(BAD), fenced(GOOD)]
    )
    assert record["final_status"] == "passed_compile"
    assert len(record["iterations"]) == 2
    assert record["final_code"] == GOOD


def test_normalize_and_match():
    candidate = (
        "module top(input clock, input io_a, output io_y);\n"
        "  assign io_y = io_a;\nendmodule\n"
    )
    golden = "module t(input a, output y);\n  assign y = a;\nendmodule\n"
    normalized = hdlagent.normalize_interface(candidate, "chisel_io_prefixed", golden)
    assert "io_" not in normalized
    assert "clock" not in normalized
    assert hdlagent.check_io_match(normalized, golden)["matches"]
    ports = hdlagent.interface_ports(normalized)["ports"]
    assert {p["name"] for p in ports} == {"a", "y"}


def test_bench_arithmetic():
    assert hdlagent.qor_ratio(200, 100) == 2.0
    assert hdlagent.bucket_label(24) == "<25"
    assert hdlagent.bucket_label(75) == ">75"
    assert hdlagent.count_loc("// c\nmodule t;\n\nendmodule\n") == 2
    assert hdlagent.pass_at_k([False, True], 2)
    assert not hdlagent.pass_at_k([False, True], 1)
    assert hdlagent.estimate_tokens(5) == 2


def test_summarize_prompt_template():
    prompt = hdlagent.summarize_prompt("Wires connect things.", "PyRTL", style="concise")
    assert prompt.startswith("PyRTL is a Hardware Description Language")
    assert prompt.endswith("Be concise and avoid examples with similar syntax.")
