#include "hdlagent/verilog_io.hpp"

#include "hdlagent/util.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <set>
#include <sstream>

namespace hdlagent {

std::string port_direction_to_string(PortDirection direction) {
    switch (direction) {
        case PortDirection::input: return "input";
        case PortDirection::output: return "output";
        case PortDirection::inout: return "inout";
    }
    return "input";
}

namespace {

bool ident_start(char c) {
    return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
}

bool ident_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '$';
}

const std::set<std::string>& qualifier_words() {
    static const std::set<std::string> words = {"wire", "reg",      "logic", "var",
                                                "bit",  "signed",   "unsigned"};
    return words;
}

struct ParsedModule {
    std::string name;
    std::vector<PortDecl> ports;
    std::size_t header_start = 0;  // offset of the `module` keyword
    std::size_t header_end = 0;    // offset one past the header's ';'
    std::size_t body_end = 0;      // offset of `endmodule` (or text end)
};

// Offset of `word` in `text` with Verilog-identifier boundaries, from `from`.
std::size_t find_keyword(const std::string& text, const std::string& word, std::size_t from) {
    std::size_t pos = from;
    while ((pos = text.find(word, pos)) != std::string::npos) {
        bool left_ok = pos == 0 || !ident_char(text[pos - 1]);
        std::size_t end = pos + word.size();
        bool right_ok = end >= text.size() || !ident_char(text[end]);
        if (left_ok && right_ok) return pos;
        ++pos;
    }
    return std::string::npos;
}

std::size_t skip_ws(const std::string& text, std::size_t i) {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    return i;
}

int parse_range_bound(const std::string& raw, const std::string& module_name) {
    std::string t = trim(raw);
    if (t.empty())
        throw ParseError("module " + module_name + ": empty port range bound");
    std::size_t idx = 0;
    try {
        int value = std::stoi(t, &idx);
        if (idx == t.size()) return value;
    } catch (const std::exception&) {
    }
    throw ParseError("module " + module_name + ": unsupported port range expression '" + t +
                     "' (only integer bounds are handled)");
}

// One comma-separated port-list segment; direction/range/qualifiers inherit
// from the previous segment when the segment is a bare identifier (ANSI
// `input [3:0] a, b` shares the declaration).
struct SegmentState {
    bool have_direction = false;
    PortDirection direction = PortDirection::input;
    std::optional<int> msb;
    std::optional<int> lsb;
    std::string qualifiers;
};

PortDecl parse_segment(const std::string& segment, SegmentState& state,
                       const std::string& module_name, bool first_segment) {
    std::vector<std::string> words;
    std::vector<std::string> ranges;
    std::size_t i = 0;
    while (i < segment.size()) {
        char c = segment[i];
        if (ident_start(c)) {
            std::size_t j = i;
            while (j < segment.size() && ident_char(segment[j])) ++j;
            words.push_back(segment.substr(i, j - i));
            i = j;
        } else if (c == '[') {
            std::size_t close = segment.find(']', i);
            if (close == std::string::npos)
                throw ParseError("module " + module_name + ": unterminated port range");
            ranges.push_back(segment.substr(i + 1, close - i - 1));
            i = close + 1;
        } else if (std::isspace(static_cast<unsigned char>(c))) {
            ++i;
        } else {
            throw ParseError("module " + module_name + ": unexpected character '" +
                             std::string(1, c) + "' in port list");
        }
    }
    if (words.empty())
        throw ParseError("module " + module_name + ": port declaration with no name");

    std::size_t w = 0;
    bool own_direction = false;
    PortDirection direction = state.direction;
    if (words[0] == "input" || words[0] == "output" || words[0] == "inout") {
        own_direction = true;
        direction = words[0] == "input"    ? PortDirection::input
                    : words[0] == "output" ? PortDirection::output
                                           : PortDirection::inout;
        w = 1;
    } else if (first_segment) {
        throw ParseError("module " + module_name +
                         ": non-ANSI port declarations are not supported (port '" + words[0] +
                         "' has no inline direction)");
    }

    std::vector<std::string> quals;
    std::string name;
    for (; w < words.size(); ++w) {
        if (qualifier_words().count(words[w]) && w + 1 < words.size()) {
            quals.push_back(words[w]);
        } else if (w + 1 == words.size()) {
            name = words[w];
        } else {
            throw ParseError("module " + module_name + ": cannot parse port declaration '" +
                             trim(segment) + "'");
        }
    }
    if (name.empty() || !ident_start(name[0]))
        throw ParseError("module " + module_name + ": missing port name in '" + trim(segment) +
                         "'");

    PortDecl port;
    port.name = name;
    if (own_direction) {
        state.have_direction = true;
        state.direction = direction;
        state.msb.reset();
        state.lsb.reset();
        state.qualifiers = join(quals, " ");
        if (!ranges.empty()) {
            if (ranges.size() > 1)
                throw ParseError("module " + module_name + ": multidimensional port '" + name +
                                 "' is not supported");
            state.msb = parse_range_bound(ranges[0].substr(0, ranges[0].find(':')), module_name);
            auto colon = ranges[0].find(':');
            if (colon == std::string::npos)
                throw ParseError("module " + module_name + ": port range needs msb:lsb");
            state.lsb = parse_range_bound(ranges[0].substr(colon + 1), module_name);
        }
    } else if (!ranges.empty() || !quals.empty()) {
        throw ParseError("module " + module_name + ": port '" + name +
                         "' declares a range without a direction");
    }
    port.direction = state.direction;
    port.msb = state.msb;
    port.lsb = state.lsb;
    port.qualifiers = state.qualifiers;
    if (port.msb && port.lsb && *port.msb < *port.lsb)
        throw ParseError("module " + module_name + ": ascending range [" +
                         std::to_string(*port.msb) + ":" + std::to_string(*port.lsb) +
                         "] on port '" + name + "' is not supported");
    return port;
}

std::vector<ParsedModule> parse_all(const std::string& text) {
    std::string blanked = blank_verilog_noncode(text);
    for (std::size_t i = 0; i + 1 < blanked.size(); ++i) {
        if (blanked[i] == '\\' && std::isgraph(static_cast<unsigned char>(blanked[i + 1])))
            throw ParseError("escaped identifiers (backslash form) are not supported");
    }

    std::vector<ParsedModule> modules;
    std::size_t search = 0;
    while (true) {
        std::size_t m = find_keyword(blanked, "module", search);
        if (m == std::string::npos) break;
        ParsedModule mod;
        mod.header_start = m;
        std::size_t i = skip_ws(blanked, m + 6);
        std::size_t name_start = i;
        while (i < blanked.size() && ident_char(blanked[i])) ++i;
        mod.name = text.substr(name_start, i - name_start);
        if (mod.name.empty() || !ident_start(mod.name[0]))
            throw ParseError("module keyword without a module name");

        i = skip_ws(blanked, i);
        if (i < blanked.size() && blanked[i] == '#') {  // parameter list
            i = skip_ws(blanked, i + 1);
            if (i >= blanked.size() || blanked[i] != '(')
                throw ParseError("module " + mod.name + ": malformed parameter list");
            int depth = 0;
            for (; i < blanked.size(); ++i) {
                if (blanked[i] == '(') ++depth;
                if (blanked[i] == ')' && --depth == 0) {
                    ++i;
                    break;
                }
            }
            if (depth != 0)
                throw ParseError("module " + mod.name + ": unterminated parameter list");
            i = skip_ws(blanked, i);
        }

        std::string port_span;
        if (i < blanked.size() && blanked[i] == '(') {
            std::size_t open = i;
            int depth = 0;
            for (; i < blanked.size(); ++i) {
                if (blanked[i] == '(') ++depth;
                if (blanked[i] == ')' && --depth == 0) break;
            }
            if (i >= blanked.size())
                throw ParseError("module " + mod.name + ": unterminated module header");
            port_span = blanked.substr(open + 1, i - open - 1);
            i = skip_ws(blanked, i + 1);
        }
        if (i >= blanked.size() || blanked[i] != ';')
            throw ParseError("module " + mod.name + ": unterminated module header");
        mod.header_end = i + 1;

        if (!trim(port_span).empty()) {
            std::vector<std::string> segments;
            std::string current;
            int depth = 0;
            for (char c : port_span) {
                if (c == '(' || c == '[') ++depth;
                if (c == ')' || c == ']') --depth;
                if (c == ',' && depth == 0) {
                    segments.push_back(current);
                    current.clear();
                } else {
                    current += c;
                }
            }
            segments.push_back(current);
            SegmentState state;
            std::set<std::string> seen;
            for (std::size_t s = 0; s < segments.size(); ++s) {
                PortDecl port = parse_segment(segments[s], state, mod.name, s == 0);
                if (!seen.insert(port.name).second)
                    throw ParseError("module " + mod.name + ": duplicate port '" + port.name +
                                     "'");
                mod.ports.push_back(std::move(port));
            }
        }

        std::size_t end = find_keyword(blanked, "endmodule", mod.header_end);
        mod.body_end = end == std::string::npos ? blanked.size() : end;
        modules.push_back(std::move(mod));
        search = mod.body_end == blanked.size() ? blanked.size() : mod.body_end + 9;
    }
    return modules;
}

ParsedModule select_module(std::vector<ParsedModule> modules, const std::string& text,
                           const std::optional<std::string>& top) {
    if (modules.empty()) throw ParseError("no module found in the given Verilog");
    if (top) {
        for (auto& mod : modules)
            if (mod.name == *top) return std::move(mod);
        throw ParseError("module '" + *top + "' not found");
    }
    if (modules.size() == 1) return std::move(modules.front());
    std::vector<std::string> names;
    for (const auto& mod : modules) names.push_back(mod.name);
    (void)text;
    throw AmbiguousTop("multiple modules (" + join(names, ", ") +
                       ") and no top module was specified");
}

ModuleInterface to_interface(const ParsedModule& mod) {
    ModuleInterface iface;
    iface.module_name = mod.name;
    iface.ports = mod.ports;
    return iface;
}

std::set<std::string> all_identifiers(const std::string& blanked) {
    std::set<std::string> idents;
    std::size_t i = 0;
    while (i < blanked.size()) {
        if (ident_start(blanked[i])) {
            std::size_t j = i;
            while (j < blanked.size() && ident_char(blanked[j])) ++j;
            idents.insert(blanked.substr(i, j - i));
            i = j;
        } else {
            ++i;
        }
    }
    return idents;
}

std::size_t count_identifier(const std::string& blanked, const std::string& name,
                             std::size_t from, std::size_t to) {
    std::size_t count = 0;
    std::size_t pos = from;
    while ((pos = find_keyword(blanked, name, pos)) != std::string::npos && pos < to) {
        ++count;
        pos += name.size();
    }
    return count;
}

std::string emit_header(const ParsedModule& mod, const std::vector<PortDecl>& ports) {
    std::ostringstream out;
    out << "module " << mod.name << "(";
    for (std::size_t i = 0; i < ports.size(); ++i) {
        const PortDecl& p = ports[i];
        out << "\n  " << port_direction_to_string(p.direction);
        if (!p.qualifiers.empty()) out << " " << p.qualifiers;
        if (p.msb && p.lsb) out << " [" << *p.msb << ":" << *p.lsb << "]";
        out << " " << p.name;
        if (i + 1 < ports.size()) out << ",";
    }
    out << "\n);";
    return out.str();
}

std::string signature_line(const PortDecl& p) {
    return p.name + " (" + port_direction_to_string(p.direction) + ", width " +
           std::to_string(p.width()) + ")";
}

}  // namespace

ModuleInterface parse_interface(const std::string& verilog,
                                const std::optional<std::string>& top) {
    return to_interface(select_module(parse_all(verilog), verilog, top));
}

std::string rename_ports(const std::string& verilog,
                         const std::map<std::string, std::string>& mapping) {
    ModuleInterface iface = parse_interface(verilog);
    std::set<std::string> port_names;
    for (const PortDecl& p : iface.ports) port_names.insert(p.name);

    std::map<std::string, std::string> active;
    for (const auto& [src, dst] : mapping) {
        if (!port_names.count(src))
            throw UnknownPort("'" + src + "' is not a port of module " + iface.module_name);
        if (src != dst) active[src] = dst;
    }
    if (active.empty()) return verilog;

    std::string blanked = blank_verilog_noncode(verilog);
    std::set<std::string> idents = all_identifiers(blanked);
    std::set<std::string> targets;
    for (const auto& [src, dst] : active) {
        if (dst.empty() || !ident_start(dst[0]) ||
            !std::all_of(dst.begin(), dst.end(), ident_char))
            throw ValidationError("rename", "'" + dst + "' is not a valid identifier");
        if (!targets.insert(dst).second)
            throw NameCollision("two ports would both become '" + dst + "'");
        bool taken = idents.count(dst) && !active.count(dst);
        if (taken)
            throw NameCollision("'" + dst + "' already names something in module " +
                                iface.module_name);
    }

    std::string out;
    out.reserve(verilog.size());
    std::size_t i = 0;
    while (i < blanked.size()) {
        if (ident_start(blanked[i])) {
            std::size_t j = i;
            while (j < blanked.size() && ident_char(blanked[j])) ++j;
            std::string token = blanked.substr(i, j - i);
            auto it = active.find(token);
            out += it != active.end() ? it->second : verilog.substr(i, j - i);
            i = j;
        } else {
            out += verilog[i];
            ++i;
        }
    }
    return out;
}

std::string strip_unused_ports(const std::string& verilog,
                               const std::vector<std::string>& candidates) {
    ParsedModule mod = select_module(parse_all(verilog), verilog, std::nullopt);
    std::string blanked = blank_verilog_noncode(verilog);

    std::set<std::string> removable;
    for (const std::string& name : candidates) {
        bool is_port = std::any_of(mod.ports.begin(), mod.ports.end(),
                                   [&](const PortDecl& p) { return p.name == name; });
        if (!is_port) continue;
        if (count_identifier(blanked, name, mod.header_end, mod.body_end) == 0)
            removable.insert(name);
    }
    if (removable.empty()) return verilog;

    std::vector<PortDecl> kept;
    for (const PortDecl& p : mod.ports)
        if (!removable.count(p.name)) kept.push_back(p);

    return verilog.substr(0, mod.header_start) + emit_header(mod, kept) +
           verilog.substr(mod.header_end);
}

IoCheck check_io_match(const ModuleInterface& a, const ModuleInterface& b) {
    auto key = [](const PortDecl& p) {
        return std::make_tuple(p.name, p.direction, p.width());
    };
    std::multiset<std::tuple<std::string, PortDirection, int>> in_a, in_b;
    for (const PortDecl& p : a.ports) in_a.insert(key(p));
    for (const PortDecl& p : b.ports) in_b.insert(key(p));

    IoCheck check;
    check.matches = in_a == in_b;
    if (check.matches) return check;

    std::string label_a = a.module_name.empty() ? "left" : a.module_name;
    std::string label_b = b.module_name.empty() ? "right" : b.module_name;
    if (label_a == label_b) {
        label_a = "left (" + label_a + ")";
        label_b = "right (" + label_b + ")";
    }
    std::ostringstream diff;
    for (const PortDecl& p : a.ports)
        if (!in_b.count(key(p))) diff << "only in " << label_a << ": " << signature_line(p) << "\n";
    for (const PortDecl& p : b.ports)
        if (!in_a.count(key(p))) diff << "only in " << label_b << ": " << signature_line(p) << "\n";
    check.diff = diff.str();
    return check;
}

std::string normalize(const std::string& verilog, IoConvention convention,
                      const ModuleInterface& golden) {
    auto parse_top = [&](const std::string& text) {
        try {
            return parse_interface(text, golden.module_name);
        } catch (const ParseError&) {
            return parse_interface(text);
        }
    };

    std::string result = verilog;
    ModuleInterface iface = parse_top(result);

    switch (convention) {
        case IoConvention::chisel_io_prefixed: {
            std::map<std::string, std::string> mapping;
            for (const PortDecl& p : iface.ports)
                if (p.name.rfind("io_", 0) == 0 && p.name.size() > 3)
                    mapping[p.name] = p.name.substr(3);
            if (!mapping.empty()) result = rename_ports(result, mapping);
            result = strip_unused_ports(result);
            break;
        }
        case IoConvention::dslx_single_out: {
            const PortDecl* golden_out = nullptr;
            int output_count = 0;
            for (const PortDecl& p : golden.ports)
                if (p.direction == PortDirection::output) {
                    ++output_count;
                    golden_out = &p;
                }
            bool have_out = std::any_of(iface.ports.begin(), iface.ports.end(),
                                        [](const PortDecl& p) {
                                            return p.name == "out" &&
                                                   p.direction == PortDirection::output;
                                        });
            if (output_count == 1 && have_out && golden_out->name != "out")
                result = rename_ports(result, {{"out", golden_out->name}});
            break;
        }
        case IoConvention::verilog_native:
        case IoConvention::pyrtl_named: {
            std::map<std::string, std::string> mapping;
            std::set<std::string> golden_names;
            for (const PortDecl& p : golden.ports) golden_names.insert(p.name);
            auto lower = [](std::string s) {
                std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) {
                    return static_cast<char>(std::tolower(c));
                });
                return s;
            };
            for (const PortDecl& p : iface.ports) {
                if (golden_names.count(p.name)) continue;
                for (const PortDecl& g : golden.ports)
                    if (lower(g.name) == lower(p.name)) {
                        mapping[p.name] = g.name;
                        break;
                    }
            }
            if (!mapping.empty()) result = rename_ports(result, mapping);
            break;
        }
    }

    ModuleInterface final_iface = parse_top(result);
    IoCheck check = check_io_match(final_iface, golden);
    if (!check.matches)
        throw IoMismatch("normalized interface does not match the golden interface:\n" +
                         check.diff);
    return result;
}

}  // namespace hdlagent
