#include "hdlagent/profile.hpp"

#include "hdlagent/errors.hpp"

#include <nlohmann/json.hpp>

#include <array>
#include <utility>

namespace hdlagent {

namespace {

// Bundled profiles are plain profile JSON embedded in the binary so the CLI
// works out of the box. Users can dump them ("profiles show NAME") and load
// edited copies from disk instead.

const char* kVerilogProfile = R"json({
  "name": "verilog",
  "file_extension": "v",
  "description_summary": "Verilog is a Hardware Description Language where a design is a set of modules. Each module declares its ports in an ANSI header (direction, optional [msb:lsb] range, name) and drives them with continuous assignments (assign) or procedural blocks (always). Combinational logic belongs in assign statements or always @(*) blocks; registers update in always @(posedge clk). Signals assigned inside an always block must be declared reg; everything else is a wire. Size literals explicitly (4'b0101, 8'd255), remember that case statements need a default arm, and never leave an output undriven.",
  "prefix": "The following statements describe the problem to be addressed in Verilog.",
  "suffix": "Respond with valid program syntax only, without additional English explanations. Write one complete synthesizable Verilog-2001 module with an ANSI port header, using exactly the port names given in the problem. Do not write a testbench.",
  "compile_command": "yosys -q -p \"read_verilog {file}; hierarchy -check; proc; opt\"",
  "compile_timeout_s": 60,
  "io_convention": "verilog_native",
  "few_shot": [
    {
      "topic": "bit_ops",
      "question": "Write a Verilog module named bit_ops with two 8-bit inputs a and b and three 8-bit outputs y_and, y_or and y_xor carrying the bitwise AND, OR and XOR of the inputs.",
      "code": "module bit_ops(\n  input [7:0] a,\n  input [7:0] b,\n  output [7:0] y_and,\n  output [7:0] y_or,\n  output [7:0] y_xor\n);\n  assign y_and = a & b;\n  assign y_or = a | b;\n  assign y_xor = a ^ b;\nendmodule"
    },
    {
      "topic": "reduction",
      "question": "Write a Verilog module named parity with a 16-bit input d and a 1-bit output p that is the XOR reduction of all bits of d.",
      "code": "module parity(\n  input [15:0] d,\n  output p\n);\n  assign p = ^d;\nendmodule"
    },
    {
      "topic": "loop",
      "question": "Write a Verilog module named popcount with an 8-bit input d and a 4-bit output count holding the number of set bits in d.",
      "code": "module popcount(\n  input [7:0] d,\n  output reg [3:0] count\n);\n  integer i;\n  always @(*) begin\n    count = 4'd0;\n    for (i = 0; i < 8; i = i + 1)\n      count = count + {3'b000, d[i]};\n  end\nendmodule"
    },
    {
      "topic": "multiplexing",
      "question": "Write a Verilog module named mux4 with a 2-bit select input sel, four 8-bit data inputs a, b, c and d, and an 8-bit output y that carries the selected input.",
      "code": "module mux4(\n  input [1:0] sel,\n  input [7:0] a,\n  input [7:0] b,\n  input [7:0] c,\n  input [7:0] d,\n  output reg [7:0] y\n);\n  always @(*) begin\n    case (sel)\n      2'd0: y = a;\n      2'd1: y = b;\n      2'd2: y = c;\n      default: y = d;\n    endcase\n  end\nendmodule"
    },
    {
      "topic": "multiply_add",
      "question": "Write a Verilog module named mac with 8-bit inputs a and b, a 16-bit input c, and a 16-bit output y computing a*b + c.",
      "code": "module mac(\n  input [7:0] a,\n  input [7:0] b,\n  input [15:0] c,\n  output [15:0] y\n);\n  assign y = a * b + c;\nendmodule"
    }
  ],
  "error_fixes": [
    {
      "pattern": "syntax error",
      "is_regex": false,
      "explanation": "A statement is malformed; check for a missing semicolon and wrap multi-statement always bodies in begin/end.",
      "example_fix": "always @(*) begin\n  y = a;\n  z = b;\nend"
    },
    {
      "pattern": "is implicitly declared",
      "is_regex": false,
      "explanation": "Every internal signal must be declared before use; add a wire declaration with the correct width.",
      "example_fix": "wire [7:0] sum;\nassign sum = a + b;"
    },
    {
      "pattern": "not a register|procedural assignment",
      "is_regex": true,
      "explanation": "Signals assigned inside an always block must be declared reg.",
      "example_fix": "output reg [7:0] y"
    }
  ]
})json";

const char* kChiselProfile = R"json({
  "name": "chisel",
  "file_extension": "scala",
  "description_summary": "Chisel is a Hardware Description Language embedded in Scala. A design is a class extending Module whose ports live in a val io = IO(new Bundle { ... }) of Input/Output-wrapped UInt, SInt or Bool; widths use the .W suffix (8.W) and literals the .U/.S suffix (3.U). Hardware connections use := (never Scala =, which only rebinds a name). Scala control flow elaborates statically, so runtime choices need when/.elsewhen/.otherwise or Mux, and every signal must be driven on all paths. Atypical for an HDL: clock and reset are implicit, and the emitted Verilog prefixes every bundle field with io_.",
  "prefix": "The following statements describe the problem to be addressed in Chisel.",
  "suffix": "Respond with valid program syntax only, without additional English explanations. Write one complete Chisel module: start with import chisel3._, define a single class extending Module, and declare every port in the io Bundle using exactly the names given in the problem. Do not write a testbench.",
  "compile_command": "scala-cli compile --server=false {file}",
  "compile_timeout_s": 180,
  "io_convention": "chisel_io_prefixed",
  "few_shot": [
    {
      "topic": "bit_ops",
      "question": "Write a Chisel module named BitOps with two 8-bit inputs a and b and three 8-bit outputs y_and, y_or and y_xor carrying the bitwise AND, OR and XOR of the inputs.",
      "code": "import chisel3._\n\nclass BitOps extends Module {\n  val io = IO(new Bundle {\n    val a = Input(UInt(8.W))\n    val b = Input(UInt(8.W))\n    val y_and = Output(UInt(8.W))\n    val y_or = Output(UInt(8.W))\n    val y_xor = Output(UInt(8.W))\n  })\n  io.y_and := io.a & io.b\n  io.y_or := io.a | io.b\n  io.y_xor := io.a ^ io.b\n}"
    },
    {
      "topic": "reduction",
      "question": "Write a Chisel module named Parity with a 16-bit input d and a 1-bit output p that is the XOR reduction of all bits of d.",
      "code": "import chisel3._\n\nclass Parity extends Module {\n  val io = IO(new Bundle {\n    val d = Input(UInt(16.W))\n    val p = Output(Bool())\n  })\n  io.p := io.d.xorR\n}"
    },
    {
      "topic": "loop",
      "question": "Write a Chisel module named Popcount with an 8-bit input d and a 4-bit output count holding the number of set bits in d.",
      "code": "import chisel3._\n\nclass Popcount extends Module {\n  val io = IO(new Bundle {\n    val d = Input(UInt(8.W))\n    val count = Output(UInt(4.W))\n  })\n  io.count := io.d.asBools.map(_.asUInt).reduce(_ +& _)\n}"
    },
    {
      "topic": "multiplexing",
      "question": "Write a Chisel module named Mux4 with a 2-bit select input sel, four 8-bit data inputs a, b, c and d, and an 8-bit output y that carries the selected input.",
      "code": "import chisel3._\n\nclass Mux4 extends Module {\n  val io = IO(new Bundle {\n    val sel = Input(UInt(2.W))\n    val a = Input(UInt(8.W))\n    val b = Input(UInt(8.W))\n    val c = Input(UInt(8.W))\n    val d = Input(UInt(8.W))\n    val y = Output(UInt(8.W))\n  })\n  io.y := io.d\n  when(io.sel === 0.U) {\n    io.y := io.a\n  }.elsewhen(io.sel === 1.U) {\n    io.y := io.b\n  }.elsewhen(io.sel === 2.U) {\n    io.y := io.c\n  }\n}"
    },
    {
      "topic": "multiply_add",
      "question": "Write a Chisel module named Mac with 8-bit inputs a and b, a 16-bit input c, and a 16-bit output y computing a*b + c.",
      "code": "import chisel3._\n\nclass Mac extends Module {\n  val io = IO(new Bundle {\n    val a = Input(UInt(8.W))\n    val b = Input(UInt(8.W))\n    val c = Input(UInt(16.W))\n    val y = Output(UInt(16.W))\n  })\n  io.y := io.a * io.b + io.c\n}"
    }
  ],
  "error_fixes": [
    {
      "pattern": "reassignment to val",
      "is_regex": false,
      "explanation": "Use := to connect hardware signals; Scala = only rebinds the Scala name and cannot drive a wire.",
      "example_fix": "io.y := io.a + io.b"
    },
    {
      "pattern": "not found: (value|type)",
      "is_regex": true,
      "explanation": "An identifier cannot be resolved; check that import chisel3._ (and chisel3.util._ for helpers like Mux1H or PopCount) is present and the name is defined.",
      "example_fix": "import chisel3._\nimport chisel3.util._"
    },
    {
      "pattern": "is not fully initialized|CheckInitialization",
      "is_regex": true,
      "explanation": "Every output must be driven on all paths; assign a default before when blocks.",
      "example_fix": "io.y := 0.U\nwhen(io.sel === 1.U) {\n  io.y := io.a\n}"
    }
  ]
})json";

const char* kPyrtlProfile = R"json({
  "name": "pyrtl",
  "file_extension": "py",
  "description_summary": "PyRTL is a Hardware Description Language embedded in Python: the program builds a netlist out of pyrtl.Input, pyrtl.Output, pyrtl.WireVector and pyrtl.Register objects. Wires are driven with the <<= operator; plain Python = only names a wire and never connects anything. Widths are bitwidth arguments (pyrtl.Input(8, 'a')), bit selects use Python indexing (d[0], d[0:4]), and arithmetic results grow by one bit, so slice results back to the declared output width. Atypical for an HDL: there is no clock port (registers update implicitly), Python if cannot branch on wire values (use pyrtl.select or pyrtl.mux), and Python >> is not a hardware shift (use pyrtl.shift_right_logical).",
  "prefix": "The following statements describe the problem to be addressed in PyRTL.",
  "suffix": "Respond with valid program syntax only, without additional English explanations. Write one complete PyRTL program: import pyrtl, declare the inputs and outputs with exactly the names given in the problem, and drive every output with <<=. Do not simulate or print anything.",
  "compile_command": "python3 -c 'import runpy, pyrtl; runpy.run_path(\"{file}\"); f = open(\"{workdir}/design_out.v\", \"w\"); pyrtl.output_to_verilog(f); f.close()'",
  "compile_timeout_s": 60,
  "io_convention": "pyrtl_named",
  "few_shot": [
    {
      "topic": "bit_ops",
      "question": "Write a PyRTL program with two 8-bit inputs a and b and three 8-bit outputs y_and, y_or and y_xor carrying the bitwise AND, OR and XOR of the inputs.",
      "code": "import pyrtl\n\na = pyrtl.Input(8, 'a')\nb = pyrtl.Input(8, 'b')\ny_and = pyrtl.Output(8, 'y_and')\ny_or = pyrtl.Output(8, 'y_or')\ny_xor = pyrtl.Output(8, 'y_xor')\n\ny_and <<= a & b\ny_or <<= a | b\ny_xor <<= a ^ b"
    },
    {
      "topic": "reduction",
      "question": "Write a PyRTL program with a 16-bit input d and a 1-bit output p that is the XOR reduction of all bits of d.",
      "code": "import pyrtl\n\nd = pyrtl.Input(16, 'd')\np = pyrtl.Output(1, 'p')\n\nparity = d[0]\nfor i in range(1, 16):\n    parity = parity ^ d[i]\np <<= parity"
    },
    {
      "topic": "loop",
      "question": "Write a PyRTL program with an 8-bit input d and a 4-bit output count holding the number of set bits in d.",
      "code": "import pyrtl\n\nd = pyrtl.Input(8, 'd')\ncount = pyrtl.Output(4, 'count')\n\ntotal = pyrtl.Const(0, 4)\nfor i in range(8):\n    total = total + d[i]\ncount <<= total[0:4]"
    },
    {
      "topic": "multiplexing",
      "question": "Write a PyRTL program with a 2-bit select input sel, four 8-bit data inputs a, b, c and d, and an 8-bit output y that carries the selected input.",
      "code": "import pyrtl\n\nsel = pyrtl.Input(2, 'sel')\na = pyrtl.Input(8, 'a')\nb = pyrtl.Input(8, 'b')\nc = pyrtl.Input(8, 'c')\nd = pyrtl.Input(8, 'd')\ny = pyrtl.Output(8, 'y')\n\ny <<= pyrtl.mux(sel, a, b, c, d)"
    },
    {
      "topic": "multiply_add",
      "question": "Write a PyRTL program with 8-bit inputs a and b, a 16-bit input c, and a 16-bit output y computing a*b + c.",
      "code": "import pyrtl\n\na = pyrtl.Input(8, 'a')\nb = pyrtl.Input(8, 'b')\nc = pyrtl.Input(16, 'c')\ny = pyrtl.Output(16, 'y')\n\ny <<= (a * b + c)[0:16]"
    }
  ],
  "error_fixes": [
    {
      "pattern": "cannot assign to|rvalue|= used where <<= was expected",
      "is_regex": true,
      "explanation": "use <<= for wire assignment",
      "example_fix": "y <<= a + b"
    },
    {
      "pattern": "PyrtlError",
      "is_regex": false,
      "explanation": "use <<= for wire assignment; Python = only names a wire, it never drives one, and every Output must be driven exactly once.",
      "example_fix": "y = pyrtl.Output(8, 'y')\ny <<= a + b"
    },
    {
      "pattern": "has no attribute",
      "is_regex": false,
      "explanation": "Only real PyRTL API names exist; build logic from wire operators and helpers like pyrtl.mux, pyrtl.concat or pyrtl.select instead of invented methods.",
      "example_fix": "y <<= pyrtl.mux(sel, a, b)"
    },
    {
      "pattern": "NameError",
      "is_regex": false,
      "explanation": "An identifier is used before it is defined; declare every wire with pyrtl.Input, pyrtl.Output or pyrtl.WireVector before connecting it.",
      "example_fix": "tmp = pyrtl.WireVector(8, 'tmp')\ntmp <<= a & b"
    }
  ]
})json";

const char* kDslxProfile = R"json({
  "name": "dslx",
  "file_extension": "x",
  "description_summary": "DSLX is the Hardware Description Language of the XLS toolchain: pure functions over fixed-width types (u1, u8, s16, bits[N]) that compile to combinational hardware. Syntax is Rust-like: fn main(a: u8, b: u8) -> u8 { a + b }, with the last expression as the result and no return keyword. Every literal carries its type (u8:3), let bindings are immutable, and operand widths must match exactly (cast with as). Loops are atypical: they thread an explicit accumulator, for (i, acc): (u32, u4) in u32:0..u32:8 { acc + ... }(u4:0). Multiple results are returned as one tuple or struct; there are no modules, ports, clocks or always blocks.",
  "prefix": "The following statements describe the problem to be addressed in DSLX.",
  "suffix": "Respond with valid program syntax only, without additional English explanations. Write one complete DSLX implementation whose top function is named main. Group all results into the single return value and do not split the outputs into individual bits; variables assigned to the output struct should have the same name as the struct fields. Give every literal an explicit type, like u8:1.",
  "compile_command": "ir_converter_main --top=main {file} > {workdir}/design.ir && codegen_main --generator=combinational --output_verilog_path={workdir}/design.v {workdir}/design.ir",
  "compile_timeout_s": 120,
  "io_convention": "dslx_single_out",
  "few_shot": [
    {
      "topic": "bit_ops",
      "question": "Write a DSLX function with two 8-bit inputs a and b returning the bitwise AND, OR and XOR of the inputs.",
      "code": "fn main(a: u8, b: u8) -> (u8, u8, u8) {\n  (a & b, a | b, a ^ b)\n}"
    },
    {
      "topic": "reduction",
      "question": "Write a DSLX function with a 16-bit input d returning the 1-bit XOR reduction of all bits of d.",
      "code": "fn main(d: u16) -> u1 {\n  xor_reduce(d)\n}"
    },
    {
      "topic": "loop",
      "question": "Write a DSLX function with an 8-bit input d returning a 4-bit count of the set bits in d.",
      "code": "fn main(d: u8) -> u4 {\n  for (i, acc): (u32, u4) in u32:0..u32:8 {\n    acc + (d[i +: u1] as u4)\n  }(u4:0)\n}"
    },
    {
      "topic": "multiplexing",
      "question": "Write a DSLX function with a 2-bit select input sel and four 8-bit data inputs a, b, c and d, returning the selected input.",
      "code": "fn main(sel: u2, a: u8, b: u8, c: u8, d: u8) -> u8 {\n  match sel {\n    u2:0 => a,\n    u2:1 => b,\n    u2:2 => c,\n    _ => d,\n  }\n}"
    },
    {
      "topic": "multiply_add",
      "question": "Write a DSLX function with 8-bit inputs a and b and a 16-bit input c, returning the 16-bit value a*b + c.",
      "code": "fn main(a: u8, b: u8, c: u16) -> u16 {\n  (a as u16) * (b as u16) + c\n}"
    }
  ],
  "error_fixes": [
    {
      "pattern": "TypeInferenceError",
      "is_regex": false,
      "explanation": "Operand widths must match exactly; widen with as before mixing widths.",
      "example_fix": "(a as u16) * (b as u16)"
    },
    {
      "pattern": "ScanError",
      "is_regex": false,
      "explanation": "A token is not legal DSLX; every literal needs a type prefix like u8:5 and identifiers are snake_case.",
      "example_fix": "let mask = u8:0x0f;"
    },
    {
      "pattern": "ParseError",
      "is_regex": false,
      "explanation": "DSLX is expression-based: no return keyword (the last expression is the result) and loops thread an explicit accumulator.",
      "example_fix": "for (i, acc): (u32, u16) in u32:0..u32:4 {\n  acc + i as u16\n}(u16:0)"
    },
    {
      "pattern": "Return type of function body",
      "is_regex": false,
      "explanation": "The body's type must equal the declared return type; adjust the declaration or cast the final expression.",
      "example_fix": "fn main(a: u8) -> u16 {\n  a as u16\n}"
    }
  ]
})json";

const std::array<std::pair<const char*, const char*>, 4> kBundled = {{
    {"verilog", kVerilogProfile},
    {"chisel", kChiselProfile},
    {"pyrtl", kPyrtlProfile},
    {"dslx", kDslxProfile},
}};

}  // namespace

std::vector<std::string> bundled_profile_names() {
  std::vector<std::string> names;
  names.reserve(kBundled.size());
  for (const auto& [name, text] : kBundled) names.emplace_back(name);
  return names;
}

bool is_bundled_profile(const std::string& name) {
  for (const auto& [key, text] : kBundled)
    if (name == key) return true;
  return false;
}

std::string bundled_profile_json(const std::string& name) {
  for (const auto& [key, text] : kBundled)
    if (name == key) return text;
  throw ValidationError("profile", "unknown bundled profile: " + name);
}

HdlProfile load_bundled_profile(const std::string& name) {
  return profile_from_json(nlohmann::json::parse(bundled_profile_json(name)));
}

}  // namespace hdlagent
