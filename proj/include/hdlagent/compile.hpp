#pragma once
// Runs the profile's compiler over a candidate in an isolated work directory
// and classifies the result. Never throws for tool conditions — every failure
// mode is a status so the repair loop can react uniformly.

#include "hdlagent/extract.hpp"
#include "hdlagent/profile.hpp"

#include <filesystem>
#include <optional>
#include <string>

namespace hdlagent {

enum class CompileStatus { success, failure, timeout, tool_missing };

std::string compile_status_to_string(CompileStatus status);

struct CompileOutcome {
    CompileStatus status = CompileStatus::failure;
    std::string diagnostic;  // stderr then stdout; set for failure/timeout/tool_missing
    int exit_code = 0;
    std::optional<std::filesystem::path> artifact_path;  // generated Verilog, if any
};

// Writes candidate.code to workdir/design.<ext>, renders compile_command
// ({file}, {workdir}), runs it under the profile timeout, and scans for a
// generated Verilog artifact when the source language is not Verilog itself.
CompileOutcome compile(const CodeCandidate& candidate, const HdlProfile& profile,
                       const std::filesystem::path& workdir);

// First profile-order fix whose pattern (substring, or regex when is_regex)
// matches the diagnostic.
std::optional<ErrorFix> match_fix(const std::string& diagnostic, const HdlProfile& profile);

// Exposed for tests: substitute {file} and {workdir} in a command template.
std::string render_compile_command(const std::string& command_template,
                                   const std::filesystem::path& file,
                                   const std::filesystem::path& workdir);

// Runs an already-rendered shell command under a timeout with the same
// outcome classification as compile(). Used for equivalence-check and
// synthesis hooks.
CompileOutcome run_tool_command(const std::string& command, int timeout_s);

}  // namespace hdlagent
