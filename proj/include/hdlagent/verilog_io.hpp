#pragma once
// Parses Verilog module headers (ANSI-style only) and rewrites port
// interfaces — rename, unused clock/reset pruning, convention-driven
// normalization — so generated designs line up with golden IO.

#include "hdlagent/errors.hpp"
#include "hdlagent/profile.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace hdlagent {

enum class PortDirection { input, output, inout };

std::string port_direction_to_string(PortDirection direction);

struct PortDecl {
    std::string name;
    PortDirection direction = PortDirection::input;
    std::optional<int> msb;
    std::optional<int> lsb;          // absent pair means a 1-bit port
    std::string qualifiers;          // "reg", "signed", ... kept for re-emission

    int width() const { return msb && lsb ? *msb - *lsb + 1 : 1; }

    friend bool operator==(const PortDecl& a, const PortDecl& b) {
        return a.name == b.name && a.direction == b.direction && a.msb == b.msb &&
               a.lsb == b.lsb;
    }
};

struct ModuleInterface {
    std::string module_name;
    std::vector<PortDecl> ports;  // source order

    bool operator==(const ModuleInterface&) const = default;
};

// Interface of the named module, or the sole module, or — with several
// modules and no `top` — AmbiguousTop. Escaped identifiers and non-ANSI
// (Verilog-1995 separate port declarations) raise ParseError.
ModuleInterface parse_interface(const std::string& verilog,
                                const std::optional<std::string>& top = std::nullopt);

// Token-level rewrite of every occurrence of each source identifier outside
// comments and strings. Sources must be ports of the top module; targets must
// not collide with any other identifier in the text.
std::string rename_ports(const std::string& verilog,
                         const std::map<std::string, std::string>& mapping);

// Removes each candidate port that is never referenced in the module body.
// Returns the input byte-identical when nothing qualifies.
std::string strip_unused_ports(const std::string& verilog,
                               const std::vector<std::string>& candidates = {"clock", "reset"});

struct IoCheck {
    bool matches = false;
    std::string diff;  // signatures present on only one side

    explicit operator bool() const { return matches; }
};

// Order-insensitive comparison of (name, direction, width) signature sets.
IoCheck check_io_match(const ModuleInterface& a, const ModuleInterface& b);

// Convention dispatch (io_-prefix stripping + clock/reset pruning for Chisel,
// single-`out` renaming for DSLX, case fixes otherwise), then verifies the
// result against `golden` and throws IoMismatch when the interfaces differ.
std::string normalize(const std::string& verilog, IoConvention convention,
                      const ModuleInterface& golden);

}  // namespace hdlagent
