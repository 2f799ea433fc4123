#include "hdlagent/extract.hpp"

#include "hdlagent/util.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <vector>

namespace hdlagent {

std::string extraction_rule_to_string(ExtractionRule rule) {
    switch (rule) {
        case ExtractionRule::fenced_block: return "fenced_block";
        case ExtractionRule::language_boundary: return "language_boundary";
        case ExtractionRule::whole_response: return "whole_response";
    }
    throw ValidationError("extraction_rule", "unknown rule value");
}

ExtractionRule extraction_rule_from_string(const std::string& text) {
    if (text == "fenced_block") return ExtractionRule::fenced_block;
    if (text == "language_boundary") return ExtractionRule::language_boundary;
    if (text == "whole_response") return ExtractionRule::whole_response;
    throw ValidationError("extraction_rule", "unknown rule '" + text + "'");
}

namespace {

bool is_ident_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

// Position of `word` in `line` with identifier boundaries on both sides.
std::size_t find_word(const std::string& line, const std::string& word, std::size_t from = 0) {
    std::size_t pos = from;
    while ((pos = line.find(word, pos)) != std::string::npos) {
        bool left_ok = pos == 0 || !is_ident_char(line[pos - 1]);
        std::size_t end = pos + word.size();
        bool right_ok = end >= line.size() || !is_ident_char(line[end]);
        if (left_ok && right_ok) return pos;
        pos += 1;
    }
    return std::string::npos;
}

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

// A keyword hit past the start of a line that ends like an English sentence
// ("here is a module that does it.") marks prose, not the start of code.
bool prose_tail_blocks(const std::string& line, std::size_t pos) {
    std::size_t lead = line.find_first_not_of(" \t");
    if (lead != std::string::npos && lead == pos) return false;
    std::string t = trim(line);
    if (t.empty()) return false;
    char last = t.back();
    return last == '.' || last == '!' || last == '?';
}

std::size_t find_opener(const std::string& line, const std::string& word) {
    std::size_t pos = find_word(line, word);
    while (pos != std::string::npos && prose_tail_blocks(line, pos))
        pos = find_word(line, word, pos + 1);
    return pos;
}

std::string join_code(std::vector<std::string> lines) {
    while (!lines.empty() && trim(lines.front()).empty()) lines.erase(lines.begin());
    while (!lines.empty() && trim(lines.back()).empty()) lines.pop_back();
    return join(lines, "\n");
}

std::string fenced_blocks(const std::vector<std::string>& lines) {
    std::vector<std::string> out;
    bool in_fence = false;
    bool saw_fence = false;
    for (const std::string& line : lines) {
        if (trim(line).rfind("```", 0) == 0) {
            in_fence = !in_fence;
            saw_fence = true;
            continue;
        }
        if (in_fence) out.push_back(line);
    }
    if (!saw_fence) return {};
    return join_code(std::move(out));
}

// Preprocessor-directive lines plus each module…endmodule span. Capture
// starts at the `module` token itself so prose earlier on that line is shed;
// an unmatched `module` runs to end of text and the compiler arbitrates.
std::string verilog_boundary(const std::vector<std::string>& lines) {
    std::vector<std::string> out;
    std::size_t i = 0;
    while (i < lines.size()) {
        const std::string& line = lines[i];
        std::string t = trim(line);
        if (!t.empty() && t[0] == '`') {
            out.push_back(line);
            ++i;
            continue;
        }
        std::size_t pos = find_opener(line, "module");
        if (pos == std::string::npos) {
            ++i;
            continue;
        }
        out.push_back(line.substr(pos));
        if (find_word(line, "endmodule", pos) != std::string::npos) {
            ++i;
            continue;
        }
        ++i;
        while (i < lines.size()) {
            out.push_back(lines[i]);
            bool done = find_word(lines[i], "endmodule") != std::string::npos;
            ++i;
            if (done) break;
        }
    }
    return join_code(std::move(out));
}

long brace_delta(const std::string& text, bool& seen_open) {
    long delta = 0;
    for (char c : text) {
        if (c == '{') {
            ++delta;
            seen_open = true;
        } else if (c == '}') {
            --delta;
        }
    }
    return delta;
}

// import lines plus brace-balanced blocks opened by any of `openers`.
// `statement_openers` end at the first ';' instead (single declarations).
std::string braced_boundary(const std::vector<std::string>& lines,
                            const std::set<std::string>& openers,
                            const std::set<std::string>& statement_openers) {
    std::vector<std::string> out;
    std::size_t i = 0;
    while (i < lines.size()) {
        const std::string& line = lines[i];
        std::string t = trim(line);
        if (t.rfind("import ", 0) == 0 || t == "import") {
            out.push_back(line);
            ++i;
            continue;
        }
        std::size_t pos = std::string::npos;
        std::string word;
        for (const std::string& opener : openers) {
            std::size_t p = find_opener(line, opener);
            if (p < pos) {
                pos = p;
                word = opener;
            }
        }
        for (const std::string& opener : statement_openers) {
            std::size_t p = find_opener(line, opener);
            if (p < pos) {
                pos = p;
                word = opener;
            }
        }
        if (pos == std::string::npos) {
            ++i;
            continue;
        }
        std::string rest = line.substr(pos);
        // `pub fn …`: capture from `pub` but classify by the word after it.
        if (word == "pub") {
            std::string next;
            std::size_t best = std::string::npos;
            for (const std::string& opener : openers) {
                if (opener == "pub") continue;
                std::size_t p = find_word(rest, opener);
                if (p < best) {
                    best = p;
                    next = opener;
                }
            }
            for (const std::string& opener : statement_openers) {
                std::size_t p = find_word(rest, opener);
                if (p < best) {
                    best = p;
                    next = opener;
                }
            }
            word = next.empty() ? "fn" : next;
        }
        if (statement_openers.count(word)) {
            out.push_back(rest);
            bool closed = rest.find(';') != std::string::npos;
            ++i;
            while (!closed && i < lines.size()) {
                out.push_back(lines[i]);
                closed = lines[i].find(';') != std::string::npos;
                ++i;
            }
            continue;
        }
        bool seen_open = false;
        long depth = brace_delta(rest, seen_open);
        out.push_back(rest);
        ++i;
        if (seen_open && depth <= 0) continue;
        if (!seen_open) {
            // Braceless header: only continue if an opening brace follows soon.
            if (i >= lines.size() || lines[i].find('{') == std::string::npos) continue;
        }
        while (i < lines.size()) {
            depth += brace_delta(lines[i], seen_open);
            out.push_back(lines[i]);
            ++i;
            if (seen_open && depth <= 0) break;
        }
    }
    return join_code(std::move(out));
}

// Import lines, then everything from the first reference into the library
// namespace onward with prose lines dropped.
std::string pyrtl_boundary(const std::vector<std::string>& lines, const std::string& language) {
    std::size_t first_ref = lines.size();
    for (std::size_t i = 0; i < lines.size(); ++i) {
        if (lines[i].find("pyrtl.") != std::string::npos ||
            trim(lines[i]).rfind("import pyrtl", 0) == 0 ||
            trim(lines[i]).rfind("from pyrtl", 0) == 0) {
            first_ref = i;
            break;
        }
    }
    if (first_ref == lines.size()) return {};
    std::vector<std::string> out;
    for (std::size_t i = 0; i < first_ref; ++i) {
        std::string t = trim(lines[i]);
        if (t.rfind("import ", 0) == 0 || t.rfind("from ", 0) == 0) out.push_back(lines[i]);
    }
    for (std::size_t i = first_ref; i < lines.size(); ++i) {
        if (looks_like_prose(lines[i], language)) continue;
        out.push_back(lines[i]);
    }
    return join_code(std::move(out));
}

const std::set<std::string>& structural_tokens(const std::string& language) {
    static const std::set<std::string> verilog = {
        "module", "endmodule", "assign",   "wire",       "reg",      "logic",
        "input",  "output",    "inout",    "always",     "initial",  "begin",
        "end",    "parameter", "localparam", "generate", "endgenerate",
        "case",   "endcase",   "function", "endfunction", "posedge", "negedge"};
    static const std::set<std::string> chisel = {
        "import", "class",  "object", "extends", "val",  "var",       "def",
        "Module", "Bundle", "UInt",   "SInt",    "Bool", "Input",     "Output",
        "Wire",   "Reg",    "RegInit", "RegNext", "when", "otherwise", "io"};
    static const std::set<std::string> pyrtl = {
        "import", "from",  "def",      "return",   "pyrtl",    "WireVector",
        "Input",  "Output", "Register", "Const",   "simulate", "probe"};
    static const std::set<std::string> dslx = {
        "fn",  "struct", "const", "import", "pub",  "let",
        "enum", "type",  "bits",  "match",  "u32",  "s32"};
    static const std::set<std::string> generic = {"module", "class", "def",    "fn",
                                                  "import", "struct", "assign", "let"};
    std::string name = lower(language);
    if (name == "verilog") return verilog;
    if (name == "chisel") return chisel;
    if (name == "pyrtl") return pyrtl;
    if (name == "dslx") return dslx;
    return generic;
}

}  // namespace

bool looks_like_prose(const std::string& line, const std::string& language) {
    std::string t = trim(line);
    if (t.empty()) return false;
    char last = t.back();
    if (last != '.' && last != '!' && last != '?') return false;
    int words = 0;
    bool in_word = false;
    for (char c : t) {
        bool space = std::isspace(static_cast<unsigned char>(c));
        if (!space && !in_word) ++words;
        in_word = !space;
    }
    if (words < 4) return false;
    for (const std::string& token : structural_tokens(language))
        if (find_word(t, token) != std::string::npos) return false;
    return true;
}

CodeCandidate extract_code(const std::string& raw_response, const HdlProfile& profile,
                           int iteration) {
    if (iteration < 0) throw ValidationError("iteration", "must be non-negative");
    std::vector<std::string> lines = split_lines(raw_response);

    CodeCandidate candidate;
    candidate.language = profile.name;
    candidate.source_iteration = iteration;

    std::string fenced = fenced_blocks(lines);
    if (!fenced.empty()) {
        candidate.code = std::move(fenced);
        candidate.extraction_rule = ExtractionRule::fenced_block;
        return candidate;
    }

    std::string name = lower(profile.name);
    std::string bounded;
    if (name == "verilog") {
        bounded = verilog_boundary(lines);
    } else if (name == "chisel") {
        bounded = braced_boundary(lines, {"class", "object"}, {});
    } else if (name == "pyrtl") {
        bounded = pyrtl_boundary(lines, profile.name);
    } else if (name == "dslx") {
        bounded = braced_boundary(lines, {"fn", "struct", "enum", "pub"},
                                  {"const", "import", "type"});
    }
    if (!bounded.empty()) {
        candidate.code = std::move(bounded);
        candidate.extraction_rule = ExtractionRule::language_boundary;
        return candidate;
    }

    bool any_prose = false;
    bool any_content = false;
    for (const std::string& line : lines) {
        if (trim(line).empty()) continue;
        any_content = true;
        if (looks_like_prose(line, profile.name)) {
            any_prose = true;
            break;
        }
    }
    if (any_content && !any_prose) {
        candidate.code = join_code(lines);
        candidate.extraction_rule = ExtractionRule::whole_response;
        return candidate;
    }
    throw NoCodeFound("no extractable " + profile.name + " code in response");
}

}  // namespace hdlagent
