#include "hdlagent/errors.hpp"
#include "hdlagent/verilog_io.hpp"

#include <doctest.h>

#include <string>
#include <vector>

using namespace hdlagent;

namespace {

// The stock header a Chisel flow emits for a full adder: io_-prefixed ports
// plus implicit clock and reset.
const char* kFullAdder = R"(module full_adder(
  input   clock,
  input   reset,
  input   io_a,
  input   io_b,
  input   io_cin,
  output  io_sum,
  output  io_cout
);
  assign io_sum = io_a ^ io_b ^ io_cin;
  assign io_cout = (io_a & io_b) | (io_cin & (io_a ^ io_b));
endmodule
)";

const char* kFullAdderGolden =
    "module full_adder(input a, input b, input cin, output sum, output cout);\n"
    "  assign sum = a ^ b ^ cin;\n"
    "  assign cout = (a & b) | (cin & (a ^ b));\n"
    "endmodule\n";

PortDecl port(std::string name, PortDirection dir, std::optional<int> msb = std::nullopt,
              std::optional<int> lsb = std::nullopt) {
    PortDecl p;
    p.name = std::move(name);
    p.direction = dir;
    p.msb = msb;
    p.lsb = lsb;
    return p;
}

}  // namespace

TEST_CASE("parse_interface reads ANSI headers") {
    ModuleInterface iface = parse_interface(kFullAdder);
    CHECK(iface.module_name == "full_adder");
    REQUIRE(iface.ports.size() == 7);
    CHECK(iface.ports[0] == port("clock", PortDirection::input));
    CHECK(iface.ports[2] == port("io_a", PortDirection::input));
    CHECK(iface.ports[5] == port("io_sum", PortDirection::output));
    CHECK(iface.ports[0].width() == 1);
}

TEST_CASE("parse_interface handles ranges, inheritance, and qualifiers") {
    ModuleInterface iface = parse_interface(
        "module m(input wire [3:0] a, b, output reg [7:0] y, inout z);\nendmodule\n");
    REQUIRE(iface.ports.size() == 4);
    CHECK(iface.ports[0] == port("a", PortDirection::input, 3, 0));
    CHECK(iface.ports[1] == port("b", PortDirection::input, 3, 0));  // inherits [3:0]
    CHECK(iface.ports[0].width() == 4);
    CHECK(iface.ports[2] == port("y", PortDirection::output, 7, 0));
    CHECK(iface.ports[2].qualifiers.find("reg") != std::string::npos);
    CHECK(iface.ports[3] == port("z", PortDirection::inout));
}

TEST_CASE("a new direction resets the inherited range") {
    ModuleInterface iface =
        parse_interface("module m(input [3:0] a, output y);\nendmodule\n");
    CHECK(iface.ports[0].width() == 4);
    CHECK(iface.ports[1].width() == 1);
}

TEST_CASE("parse_interface ignores comments and strings") {
    ModuleInterface iface = parse_interface(
        "// module fake(input bogus);\n"
        "/* module fake2(input [7:0] nope); */\n"
        "module real_one(input a, output y); // ports: a, y\n"
        "  initial $display(\"module not_a_module(input oops);\");\n"
        "endmodule\n");
    CHECK(iface.module_name == "real_one");
    CHECK(iface.ports.size() == 2);
}

TEST_CASE("parse_interface rejects what it cannot faithfully handle") {
    CHECK_THROWS_AS(parse_interface("module m(a, b);\n  input a;\n  output b;\nendmodule\n"),
                    ParseError);  // non-ANSI
    CHECK_THROWS_AS(parse_interface("module m(input [0:3] a);\nendmodule\n"), ParseError);
    CHECK_THROWS_AS(parse_interface("module m(input \\weird$name , output y);\nendmodule\n"),
                    ParseError);  // escaped identifier
    CHECK_THROWS_AS(parse_interface("module m(input a, input a);\nendmodule\n"), ParseError);
    CHECK_THROWS_AS(parse_interface("no hardware here"), ParseError);
    CHECK_THROWS_AS(parse_interface("module m(input a"), ParseError);  // unterminated header
}

TEST_CASE("multiple modules need a top hint") {
    std::string two = "module a(input x); endmodule\nmodule b(input y); endmodule\n";
    CHECK_THROWS_AS(parse_interface(two), AmbiguousTop);
    CHECK(parse_interface(two, "b").module_name == "b");
    CHECK_THROWS_AS(parse_interface(two, "c"), ParseError);
}

TEST_CASE("rename_ports rewrites header and body at token boundaries") {
    std::string text = "module m(input io_a, input io_ab, output y);\n"
                       "  assign y = io_a & io_ab;\n"
                       "endmodule\n";
    std::string renamed = rename_ports(text, {{"io_a", "a"}});
    ModuleInterface iface = parse_interface(renamed);
    CHECK(iface.ports[0].name == "a");
    CHECK(iface.ports[1].name == "io_ab");  // longer identifier untouched
    CHECK(renamed.find("assign y = a & io_ab;") != std::string::npos);
}

TEST_CASE("rename_ports supports swaps and rejects collisions") {
    std::string text = "module m(input a, input b, output y);\n  assign y = a ^ b;\nendmodule\n";
    std::string swapped = rename_ports(text, {{"a", "b"}, {"b", "a"}});
    ModuleInterface iface = parse_interface(swapped);
    CHECK(iface.ports[0].name == "b");
    CHECK(iface.ports[1].name == "a");

    CHECK_THROWS_AS(rename_ports(text, {{"a", "b"}}), NameCollision);
    CHECK_THROWS_AS(rename_ports(text, {{"nope", "x"}}), UnknownPort);
    CHECK_THROWS_AS(rename_ports(text, {{"a", "1bad"}}), ValidationError);
    CHECK_THROWS_AS(rename_ports(text, {{"a", "z"}, {"b", "z"}}), NameCollision);
}

TEST_CASE("identity renames return the text byte-identical") {
    std::string text = "module m(input a, output y);\n  assign y = a;\nendmodule\n";
    CHECK(rename_ports(text, {}) == text);
    CHECK(rename_ports(text, {{"a", "a"}}) == text);
}

TEST_CASE("strip_unused_ports drops only genuinely unused candidates") {
    std::string text = "module m(\n"
                       "  input clock,\n"
                       "  input reset,\n"
                       "  input a,\n"
                       "  output reg y\n"
                       ");\n"
                       "  always @(posedge clock) y <= a;\n"
                       "endmodule\n";
    std::string stripped = strip_unused_ports(text);
    ModuleInterface iface = parse_interface(stripped);
    // clock is referenced in the body, reset is not.
    REQUIRE(iface.ports.size() == 3);
    CHECK(iface.ports[0].name == "clock");
    CHECK(iface.ports[1].name == "a");
    CHECK(iface.ports[2].name == "y");
}

TEST_CASE("strip_unused_ports is byte-identical when nothing is strippable") {
    std::string text = "module m(input a, output y);\n  assign y = a;\nendmodule\n";
    CHECK(strip_unused_ports(text) == text);
}

TEST_CASE("check_io_match compares name, direction, and width as a set") {
    ModuleInterface a = parse_interface("module x(input [3:0] d, output q);\nendmodule\n");
    ModuleInterface b = parse_interface("module y(output q, input [3:0] d);\nendmodule\n");
    IoCheck same = check_io_match(a, b);
    CHECK(same.matches);
    CHECK(static_cast<bool>(same));
    CHECK(same.diff.empty());

    ModuleInterface c = parse_interface("module z(input [7:0] d, output q);\nendmodule\n");
    IoCheck widths = check_io_match(a, c);
    CHECK_FALSE(widths.matches);
    CHECK(widths.diff.find("only in") != std::string::npos);
    CHECK(widths.diff.find("d") != std::string::npos);

    ModuleInterface d = parse_interface("module w(input [3:0] d, output q, output extra);\nendmodule\n");
    IoCheck extra = check_io_match(a, d);
    CHECK_FALSE(extra.matches);
    CHECK(extra.diff.find("extra") != std::string::npos);
}

TEST_CASE("chisel normalization maps the generated header onto the golden interface") {
    ModuleInterface golden = parse_interface(kFullAdderGolden);
    std::string normalized = normalize(kFullAdder, IoConvention::chisel_io_prefixed, golden);
    ModuleInterface iface = parse_interface(normalized);
    CHECK(check_io_match(iface, golden).matches);
    CHECK(normalized.find("io_") == std::string::npos);
    CHECK(normalized.find("clock") == std::string::npos);
    CHECK(normalized.find("reset") == std::string::npos);
    CHECK(normalized.find("assign sum = a ^ b ^ cin;") != std::string::npos);

    // Idempotence: a normalized design normalizes to itself.
    CHECK(normalize(normalized, IoConvention::chisel_io_prefixed, golden) == normalized);
}

TEST_CASE("dslx normalization renames the single output to the golden name") {
    ModuleInterface golden =
        parse_interface("module popcount(input [7:0] d, output [3:0] count);\nendmodule\n");
    std::string candidate =
        "module popcount(input [7:0] d, output [3:0] out);\n  assign out = d[3:0];\nendmodule\n";
    std::string normalized = normalize(candidate, IoConvention::dslx_single_out, golden);
    ModuleInterface iface = parse_interface(normalized);
    CHECK(check_io_match(iface, golden).matches);
    CHECK(normalized.find("assign count = ") != std::string::npos);
}

TEST_CASE("case-insensitive rename for native and pyrtl conventions") {
    ModuleInterface golden = parse_interface("module m(input sum, output Y);\nendmodule\n");
    std::string candidate = "module m(input SUM, output y);\n  assign y = SUM;\nendmodule\n";
    for (IoConvention conv : {IoConvention::verilog_native, IoConvention::pyrtl_named}) {
        std::string normalized = normalize(candidate, conv, golden);
        CHECK(check_io_match(parse_interface(normalized), golden).matches);
    }
}

TEST_CASE("normalize raises IoMismatch with a diff when interfaces cannot align") {
    ModuleInterface golden = parse_interface("module m(input a, input b, output y);\nendmodule\n");
    std::string candidate = "module m(input a, output y);\n  assign y = a;\nendmodule\n";
    try {
        normalize(candidate, IoConvention::verilog_native, golden);
        FAIL("expected IoMismatch");
    } catch (const IoMismatch& e) {
        CHECK(std::string(e.what()).find("only in") != std::string::npos);
        CHECK(std::string(e.what()).find("b") != std::string::npos);
    }
}

TEST_CASE("normalization is idempotent across a fixture battery") {
    struct Fixture {
        const char* candidate;
        const char* golden;
        IoConvention conv;
    };
    std::vector<Fixture> fixtures = {
        {kFullAdder, kFullAdderGolden, IoConvention::chisel_io_prefixed},
        {"module t(input clock, input reset, input io_d, output io_q);\n"
         "  assign io_q = io_d;\nendmodule\n",
         "module t(input d, output q);\nendmodule\n", IoConvention::chisel_io_prefixed},
        {"module t(input [3:0] io_w, output [3:0] io_x);\n  assign io_x = io_w;\nendmodule\n",
         "module t(input [3:0] w, output [3:0] x);\nendmodule\n",
         IoConvention::chisel_io_prefixed},
        {"module t(input D, output Q);\n  assign Q = D;\nendmodule\n",
         "module t(input d, output q);\nendmodule\n", IoConvention::pyrtl_named},
        {"module t(input [1:0] sel, output out);\n  assign out = sel[0];\nendmodule\n",
         "module t(input [1:0] sel, output picked);\nendmodule\n",
         IoConvention::dslx_single_out},
        {"module t(input a, output y);\n  assign y = a;\nendmodule\n",
         "module t(input a, output y);\nendmodule\n", IoConvention::verilog_native},
        {"module t(input aIn, output yOut);\n  assign yOut = aIn;\nendmodule\n",
         "module t(input ain, output yout);\nendmodule\n", IoConvention::verilog_native},
        {"module t(input clock, input io_en, output io_v);\n  assign io_v = io_en;\nendmodule\n",
         "module t(input en, output v);\nendmodule\n", IoConvention::chisel_io_prefixed},
        {"module t(input x, input y, output z);\n  assign z = x & y;\nendmodule\n",
         "module t(input x, input y, output z);\nendmodule\n", IoConvention::pyrtl_named},
        {"module t(input [7:0] d, output out);\n  assign out = ^d;\nendmodule\n",
         "module t(input [7:0] d, output parity);\nendmodule\n",
         IoConvention::dslx_single_out},
    };
    REQUIRE(fixtures.size() == 10);
    for (std::size_t i = 0; i < fixtures.size(); ++i) {
        INFO("fixture ", i);
        ModuleInterface golden = parse_interface(fixtures[i].golden);
        std::string once = normalize(fixtures[i].candidate, fixtures[i].conv, golden);
        CHECK(check_io_match(parse_interface(once), golden).matches);
        CHECK(normalize(once, fixtures[i].conv, golden) == once);
    }
}

TEST_CASE("port width helper") {
    CHECK(port("p", PortDirection::input).width() == 1);
    CHECK(port("p", PortDirection::input, 7, 0).width() == 8);
    CHECK(port("p", PortDirection::input, 3, 1).width() == 3);
}
