#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace hdlagent {

// Hex-encoded SHA-256 of the input bytes.
std::string sha256_hex(std::string_view data);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view text);

// Appends one line (a trailing '\n' is added) under an exclusive flock so
// concurrent writers from a worker pool never interleave.
void append_line_locked(const std::filesystem::path& path, std::string_view line);

std::string trim(std::string_view text);
std::vector<std::string> split_lines(std::string_view text);
std::string join(const std::vector<std::string>& parts, std::string_view sep);

bool starts_with_word(std::string_view line, std::string_view word);

// Replaces every occurrence of `placeholder` in `text`.
std::string replace_all(std::string text, std::string_view placeholder, std::string_view value);

// True when `text` contains any substring of `source` of at least `min_len`
// characters. Used to audit history flushing in persisted prompts.
bool shares_substring(std::string_view text, std::string_view source, std::size_t min_len);

// Verilog comments blanked out (characters replaced by spaces, newlines
// kept), so offsets into the result line up with the original text.
std::string blank_verilog_comments(std::string_view text);

// Comments and string literals blanked; what remains is scannable code, with
// offsets still aligned to the original.
std::string blank_verilog_noncode(std::string_view text);

inline long ceil_div(long a, long b) { return (a + b - 1) / b; }

}  // namespace hdlagent
