#include "hdlagent/cli.hpp"
#include "hdlagent/errors.hpp"
#include "hdlagent/profile.hpp"
#include "hdlagent/util.hpp"

#include <doctest.h>
#include <nlohmann/json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#ifdef HDLAGENT_CLI_PATH
#include <sys/wait.h>
#endif

using namespace hdlagent;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string& leaf) {
    fs::path dir = fs::temp_directory_path() / ("hdlagent_cli_" + leaf);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

// A profile whose "compiler" is grep: code passes iff it contains GOOD.
fs::path write_toy_profile(const fs::path& dir) {
    HdlProfile p;
    p.name = "toy";
    p.file_extension = "v";
    p.prefix = "PREFIX";
    p.suffix = "SUFFIX";
    p.compile_command = "grep -q GOOD {file}";
    p.compile_timeout_s = 10;
    fs::path path = dir / "toy_profile.json";
    write_file(path, profile_to_json(p).dump(2));
    return path;
}

const std::string kGoodCode = "module t(input a, output y);\n  assign y = a; // GOOD\nendmodule";
const std::string kBadCode = "module t(input a, output y);\nendmodule";

fs::path write_script(const fs::path& dir, const std::vector<std::string>& codes,
                      const std::string& name = "script.json") {
    json arr = json::array();
    for (const auto& code : codes) arr.push_back("```\n" + code + "\n```");
    fs::path path = dir / name;
    write_file(path, arr.dump());
    return path;
}

struct CliResult {
    int code = 0;
    std::string out;
    std::string err;
};

CliResult cli(std::vector<std::string> args) {
    std::ostringstream out;
    std::ostringstream err;
    int code = run_cli(std::move(args), out, err);
    return {code, out.str(), err.str()};
}

}  // namespace

TEST_CASE("parse_k_spec accepts comma-separated positive integers") {
    CHECK(parse_k_spec("1,5,10") == std::vector<int>{1, 5, 10});
    CHECK(parse_k_spec("3") == std::vector<int>{3});
    CHECK(parse_k_spec(" 2 , 4 ") == std::vector<int>{2, 4});
    CHECK_THROWS_AS(parse_k_spec("0"), ValidationError);
    CHECK_THROWS_AS(parse_k_spec("a"), ValidationError);
    CHECK_THROWS_AS(parse_k_spec("1,,2"), ValidationError);
    CHECK_THROWS_AS(parse_k_spec(""), ValidationError);
    CHECK_THROWS_AS(parse_k_spec("2.5"), ValidationError);
}

TEST_CASE("make_backend enforces per-kind requirements") {
    CliConfig cfg;
    cfg.backend_kind = "mock";
    CHECK(make_backend(cfg)->kind() == "mock");

    cfg.backend_kind = "replay";
    CHECK_THROWS_AS(make_backend(cfg), ValidationError);

    cfg.backend_kind = "http";
    CHECK_THROWS_AS(make_backend(cfg), ValidationError);  // no endpoint
    cfg.endpoint = "http://127.0.0.1:9/v1/chat/completions";
    CHECK_THROWS_AS(make_backend(cfg), ValidationError);  // no model
    cfg.model = "m";
    CHECK(make_backend(cfg)->kind() == "http");

    cfg.backend_kind = "carrier-pigeon";
    CHECK_THROWS_AS(make_backend(cfg), ValidationError);
}

TEST_CASE("resolve_profile prefers bundled names and falls back to paths") {
    CHECK(resolve_profile("verilog").name == "verilog");
    fs::path dir = fresh_dir("resolve");
    fs::path toy = write_toy_profile(dir);
    CHECK(resolve_profile(toy.string()).name == "toy");
    CHECK_THROWS_AS(resolve_profile(dir / "missing.json"), IoError);
    fs::remove_all(dir);
}

TEST_CASE("gen prints exactly the final code on stdout and logs on stderr") {
    fs::path dir = fresh_dir("gen_ok");
    fs::path toy = write_toy_profile(dir);
    fs::path script = write_script(dir, {kGoodCode});

    CliResult r = cli({"gen", "Make a passthrough.", "--profile", toy.string(),
                       "--mock-script", script.string(), "--outdir", (dir / "out").string()});
    CHECK(r.code == 0);
    CHECK(r.out == kGoodCode + "\n");  // stdout holds nothing but the code
    CHECK(r.err.find("status: passed_compile") != std::string::npos);
    CHECK(fs::exists(dir / "out" / "runs" / "gen" / "1.json"));
    fs::remove_all(dir);
}

TEST_CASE("gen repairs a failing candidate before printing") {
    fs::path dir = fresh_dir("gen_repair");
    fs::path toy = write_toy_profile(dir);
    fs::path script = write_script(dir, {kBadCode, kGoodCode});

    CliResult r = cli({"gen", "Make a passthrough.", "--profile", toy.string(),
                       "--mock-script", script.string(), "--outdir", (dir / "out").string()});
    CHECK(r.code == 0);
    CHECK(r.out == kGoodCode + "\n");
    CHECK(r.err.find("2 iteration(s)") != std::string::npos);
    fs::remove_all(dir);
}

TEST_CASE("gen exits 1 when the budget runs out, with the last diagnostic on stderr") {
    fs::path dir = fresh_dir("gen_fail");
    fs::path toy = write_toy_profile(dir);
    fs::path script = write_script(dir, {kBadCode, kBadCode});

    CliResult r = cli({"gen", "Make a passthrough.", "--profile", toy.string(),
                       "--mock-script", script.string(), "--max-iterations", "2",
                       "--outdir", (dir / "out").string()});
    CHECK(r.code == 1);
    CHECK(r.out.empty());
    CHECK(r.err.find("status: exhausted") != std::string::npos);
    CHECK(r.err.find("last diagnostic:") != std::string::npos);
    CHECK(fs::exists(dir / "out" / "runs" / "gen" / "1.json"));
    fs::remove_all(dir);
}

TEST_CASE("gen reads the question from a file when asked") {
    fs::path dir = fresh_dir("gen_qfile");
    fs::path toy = write_toy_profile(dir);
    fs::path script = write_script(dir, {kGoodCode});
    write_file(dir / "q.txt", "Make a passthrough.\n");

    CliResult r = cli({"gen", "--question-file", (dir / "q.txt").string(), "--profile",
                       toy.string(), "--mock-script", script.string(), "--outdir",
                       (dir / "out").string()});
    CHECK(r.code == 0);
    CHECK(r.out == kGoodCode + "\n");
    fs::remove_all(dir);
}

TEST_CASE("configuration errors exit 2 before any run starts") {
    fs::path dir = fresh_dir("cfg_err");
    fs::path toy = write_toy_profile(dir);

    CHECK(cli({"gen", "q", "--backend", "replay", "--profile", toy.string()}).code == 2);
    CHECK(cli({"gen", "q", "--backend", "http", "--profile", toy.string()}).code == 2);
    CHECK(cli({"gen", "q", "--profile", (dir / "nope.json").string()}).code == 2);
    CHECK(cli({"gen", "q", "--profile", toy.string(), "--stage", "psychic"}).code == 2);
    CHECK(cli({"gen", "   ", "--profile", toy.string()}).code == 2);  // blank question
    CHECK(cli({"gen", "q", "--question-file", (dir / "missing_q.txt").string(),
               "--profile", toy.string()})
              .code == 2);
    CHECK(cli({"gen", "q", "--backend", "telepathy"}).code == 2);  // rejected by flag check
    CHECK(cli({"bench", (dir / "no_suite").string(), "--profile", toy.string()}).code == 2);
    CHECK(cli({"bench", dir.string(), "--profile", toy.string(), "--k", "0"}).code == 2);
    CHECK(cli({"bench", dir.string(), "--profile", toy.string(), "--k", "ten"}).code == 2);
    CHECK(cli({}).code == 2);                    // a subcommand is required
    CHECK(cli({"transmogrify"}).code == 2);      // unknown subcommand
    CHECK(cli({"gen", "q", "--no-such-flag"}).code == 2);
    fs::remove_all(dir);
}

TEST_CASE("bench runs a suite and writes all three report formats") {
    fs::path dir = fresh_dir("bench_cli");
    fs::path toy = write_toy_profile(dir);
    fs::path suite = dir / "suite";
    fs::create_directories(suite / "t1");
    write_file(suite / "t1" / "question.txt", "Implement passthrough.");
    write_file(suite / "t1" / "golden.v",
               "module t(input a, output y);\n  assign y = a;\nendmodule\n");
    fs::path script = write_script(dir, {kGoodCode});
    fs::path outdir = dir / "out";

    CliResult r = cli({"bench", suite.string(), "--profile", toy.string(), "--mock-script",
                       script.string(), "--outdir", outdir.string()});
    CHECK(r.code == 0);
    CHECK(r.out.find("# Benchmark report") == 0);
    CHECK(fs::exists(outdir / "report.json"));
    CHECK(fs::exists(outdir / "report.csv"));
    CHECK(fs::exists(outdir / "report.md"));
    json report = json::parse(read_file(outdir / "report.json"));
    CHECK(report["pass_at_k"]["1"] == 1);
    CHECK(report["tests_total"] == 1);
    fs::remove_all(dir);
}

TEST_CASE("a pending interrupt makes bench flush what it has and exit 130") {
    fs::path dir = fresh_dir("bench_int");
    fs::path toy = write_toy_profile(dir);
    fs::path suite = dir / "suite";
    fs::create_directories(suite / "t1");
    write_file(suite / "t1" / "question.txt", "Implement passthrough.");
    write_file(suite / "t1" / "golden.v",
               "module t(input a, output y);\n  assign y = a;\nendmodule\n");
    fs::path script = write_script(dir, {kGoodCode});
    fs::path outdir = dir / "out";

    cancel_flag() = true;
    CliResult r = cli({"bench", suite.string(), "--profile", toy.string(), "--mock-script",
                       script.string(), "--outdir", outdir.string()});
    cancel_flag() = false;
    CHECK(r.code == 130);
    CHECK(r.err.find("interrupted: partial report flushed") != std::string::npos);
    CHECK(fs::exists(outdir / "report.json"));  // partial report still lands
    json report = json::parse(read_file(outdir / "report.json"));
    CHECK(report["per_test"].empty());
    fs::remove_all(dir);
}

TEST_CASE("profiles list, validate, and show cover the bundled set") {
    CliResult list = cli({"profiles", "list"});
    CHECK(list.code == 0);
    CHECK(list.out == "verilog\nchisel\npyrtl\ndslx\n");

    CliResult validate = cli({"profiles", "validate"});
    CHECK(validate.code == 0);
    CHECK(validate.out.find("verilog: ok") != std::string::npos);
    CHECK(validate.out.find("dslx: ok") != std::string::npos);

    CliResult show = cli({"profiles", "show", "pyrtl"});
    CHECK(show.code == 0);
    json doc = json::parse(show.out);
    CHECK(doc["name"] == "pyrtl");

    CHECK(cli({"profiles", "show", "vhdl"}).code == 2);
    CHECK(cli({"profiles", "frobnicate"}).code == 2);
    CHECK(cli({"profiles"}).code == 2);
}

TEST_CASE("profiles validate distinguishes unreadable from invalid files") {
    fs::path dir = fresh_dir("prof_val");
    CHECK(cli({"profiles", "validate", (dir / "missing.json").string()}).code == 2);

    write_file(dir / "bad.json", "{\"name\": \"x\"}");
    CliResult r = cli({"profiles", "validate", (dir / "bad.json").string()});
    CHECK(r.code == 1);
    CHECK(r.err.find("invalid profile:") != std::string::npos);

    fs::path toy = write_toy_profile(dir);
    CliResult ok = cli({"profiles", "validate", toy.string()});
    CHECK(ok.code == 0);
    CHECK(ok.out == "toy: ok\n");
    fs::remove_all(dir);
}

TEST_CASE("normalize rewrites an interface and its output is a fixed point") {
    fs::path dir = fresh_dir("norm");
    write_file(dir / "cand.v",
               "module top(input clock, input reset, input io_a, input io_b, output io_s);\n"
               "  assign io_s = io_a ^ io_b;\n"
               "endmodule\n");
    write_file(dir / "golden.v",
               "module fa(input a, input b, output s);\n  assign s = a ^ b;\nendmodule\n");

    CliResult r = cli({"normalize", (dir / "cand.v").string(), "--convention",
                       "chisel_io_prefixed", "--golden", (dir / "golden.v").string()});
    CHECK(r.code == 0);
    CHECK(r.out.find("io_") == std::string::npos);
    CHECK(r.out.find("clock") == std::string::npos);
    CHECK(r.out.find("assign s = a ^ b;") != std::string::npos);

    // Feeding the output back through the same command changes nothing.
    write_file(dir / "round2.v", r.out);
    CliResult again = cli({"normalize", (dir / "round2.v").string(), "--convention",
                           "chisel_io_prefixed", "--golden", (dir / "golden.v").string()});
    CHECK(again.code == 0);
    CHECK(again.out == r.out);
    fs::remove_all(dir);
}

TEST_CASE("normalize separates golden-side errors from interface mismatches") {
    fs::path dir = fresh_dir("norm_err");
    write_file(dir / "cand.v",
               "module t(input a, output y);\n  assign y = a;\nendmodule\n");
    write_file(dir / "golden.v",
               "module t(input a, input b, output y);\n  assign y = a & b;\nendmodule\n");
    write_file(dir / "bad_golden.v", "this is not verilog");

    CliResult mismatch = cli({"normalize", (dir / "cand.v").string(), "--golden",
                              (dir / "golden.v").string()});
    CHECK(mismatch.code == 1);
    CHECK(mismatch.err.find("only in") != std::string::npos);

    CHECK(cli({"normalize", (dir / "cand.v").string(), "--golden",
               (dir / "bad_golden.v").string()})
              .code == 2);
    CHECK(cli({"normalize", (dir / "missing.v").string(), "--golden",
               (dir / "golden.v").string()})
              .code == 2);
    CHECK(cli({"normalize", (dir / "cand.v").string(), "--convention", "martian",
               "--golden", (dir / "golden.v").string()})
              .code == 2);
    fs::remove_all(dir);
}

TEST_CASE("summarize sends the documentation prompt through the backend") {
    fs::path dir = fresh_dir("summ");
    write_file(dir / "manual.txt", "Wires connect things.\n");

    // The echo backend returns its own prompt, exposing the template.
    CliResult r = cli({"summarize", (dir / "manual.txt").string(), "--hdl", "PyRTL"});
    CHECK(r.code == 0);
    CHECK(r.out.find("PyRTL is a Hardware Description Language") == 0);
    CHECK(r.out.find("Wires connect things.") != std::string::npos);
    CHECK(r.out.find("Be concise") == std::string::npos);

    CliResult concise =
        cli({"summarize", (dir / "manual.txt").string(), "--hdl", "PyRTL", "--style", "concise"});
    CHECK(concise.code == 0);
    CHECK(concise.out.find("Be concise and avoid examples with similar syntax.") !=
          std::string::npos);

    CHECK(cli({"summarize", (dir / "missing.txt").string(), "--hdl", "PyRTL"}).code == 2);
    CHECK(cli({"summarize", (dir / "manual.txt").string(), "--hdl", "PyRTL", "--style",
               "haiku"})
              .code == 2);
    fs::remove_all(dir);
}

TEST_CASE("version and help are well-formed") {
    CliResult version = cli({"--version"});
    CHECK(version.code == 0);
    CHECK(version.out == "hdlagent 0.1.0\n");

    CliResult help = cli({"--help"});
    CHECK(help.code == 0);
    CHECK(help.out.find("gen") != std::string::npos);
    CHECK(help.out.find("bench") != std::string::npos);
    CHECK(help.out.find("normalize") != std::string::npos);
}

TEST_CASE("recording through the CLI yields a replayable cassette") {
    fs::path dir = fresh_dir("record");
    fs::path toy = write_toy_profile(dir);
    fs::path script = write_script(dir, {kGoodCode});
    fs::path cassette = dir / "cassette.jsonl";

    CliResult live = cli({"gen", "Make a passthrough.", "--profile", toy.string(),
                          "--mock-script", script.string(), "--record", cassette.string(),
                          "--outdir", (dir / "out1").string()});
    CHECK(live.code == 0);
    REQUIRE(fs::exists(cassette));

    CliResult replay = cli({"gen", "Make a passthrough.", "--profile", toy.string(),
                            "--backend", "replay", "--cassette", cassette.string(),
                            "--outdir", (dir / "out2").string()});
    CHECK(replay.code == 0);
    CHECK(replay.out == live.out);
    fs::remove_all(dir);
}

#ifdef HDLAGENT_CLI_PATH
namespace {

CliResult spawn_cli(const std::string& args, const fs::path& dir) {
    fs::path out_path = dir / "spawn_out.txt";
    fs::path err_path = dir / "spawn_err.txt";
    std::string cmd = std::string(HDLAGENT_CLI_PATH) + " " + args + " > " + out_path.string() +
                      " 2> " + err_path.string();
    int rc = std::system(cmd.c_str());
    CliResult r;
    r.code = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
    r.out = read_file(out_path);
    r.err = read_file(err_path);
    return r;
}

}  // namespace

TEST_CASE("the installed binary keeps stdout pipeline-clean") {
    fs::path dir = fresh_dir("spawn");
    fs::path toy = write_toy_profile(dir);
    fs::path script = write_script(dir, {kGoodCode});

    CliResult r = spawn_cli("gen 'Make a passthrough.' --profile " + toy.string() +
                                " --mock-script " + script.string() + " --outdir " +
                                (dir / "out").string(),
                            dir);
    CHECK(r.code == 0);
    CHECK(r.out == kGoodCode + "\n");
    CHECK_FALSE(r.err.empty());  // logs land on stderr, not stdout

    CliResult version = spawn_cli("--version", dir);
    CHECK(version.code == 0);
    CHECK(version.out == "hdlagent 0.1.0\n");

    CliResult bad = spawn_cli("profiles show nothere", dir);
    CHECK(bad.code == 2);
    fs::remove_all(dir);
}
#endif
