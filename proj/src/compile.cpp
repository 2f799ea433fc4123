#include "hdlagent/compile.hpp"

#include "hdlagent/util.hpp"

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <array>
#include <cerrno>
#include <chrono>
#include <cstdlib>
#include <cstring>
#include <regex>
#include <sstream>
#include <vector>

namespace hdlagent {

namespace fs = std::filesystem;

std::string compile_status_to_string(CompileStatus status) {
    switch (status) {
        case CompileStatus::success: return "success";
        case CompileStatus::failure: return "failure";
        case CompileStatus::timeout: return "timeout";
        case CompileStatus::tool_missing: return "tool_missing";
    }
    return "failure";
}

std::string render_compile_command(const std::string& command_template, const fs::path& file,
                                   const fs::path& workdir) {
    std::string command = command_template;
    command = replace_all(command, "{file}", file.string());
    command = replace_all(command, "{workdir}", workdir.string());
    return command;
}

namespace {

// First whitespace-delimited token of a shell command, with quotes stripped.
std::string first_command_word(const std::string& command) {
    std::string t = trim(command);
    std::string word;
    for (char c : t) {
        if (std::isspace(static_cast<unsigned char>(c))) break;
        if (c == '"' || c == '\'') continue;
        word += c;
    }
    return word;
}

bool executable_on_path(const std::string& word) {
    if (word.empty()) return false;
    // Commands run through `sh -c`, which resolves these without PATH.
    static const std::array<const char*, 10> kShellBuiltins = {
        "exit", "true", "false", "test", "[", ":", "echo", "set", "eval", "exec"};
    for (const char* builtin : kShellBuiltins)
        if (word == builtin) return true;
    if (word.find('/') != std::string::npos)
        return ::access(word.c_str(), X_OK) == 0;
    const char* path_env = std::getenv("PATH");
    if (!path_env) return false;
    std::stringstream ss(path_env);
    std::string dir;
    while (std::getline(ss, dir, ':')) {
        if (dir.empty()) continue;
        if (::access((dir + "/" + word).c_str(), X_OK) == 0) return true;
    }
    return false;
}

struct RunResult {
    int exit_code = -1;
    bool timed_out = false;
    std::string out;
    std::string err;
};

// sh -c `command` in its own process group, both streams captured, the whole
// group SIGKILLed on deadline.
RunResult run_shell(const std::string& command, int timeout_s) {
    RunResult result;
    int out_pipe[2];
    int err_pipe[2];
    if (pipe(out_pipe) != 0 || pipe(err_pipe) != 0)
        throw IoError(std::string("pipe: ") + std::strerror(errno));

    pid_t pid = fork();
    if (pid < 0) throw IoError(std::string("fork: ") + std::strerror(errno));
    if (pid == 0) {
        setpgid(0, 0);
        dup2(out_pipe[1], STDOUT_FILENO);
        dup2(err_pipe[1], STDERR_FILENO);
        close(out_pipe[0]);
        close(out_pipe[1]);
        close(err_pipe[0]);
        close(err_pipe[1]);
        execl("/bin/sh", "sh", "-c", command.c_str(), static_cast<char*>(nullptr));
        _exit(127);
    }
    setpgid(pid, pid);  // also from the parent, to close the startup race
    close(out_pipe[1]);
    close(err_pipe[1]);
    fcntl(out_pipe[0], F_SETFL, O_NONBLOCK);
    fcntl(err_pipe[0], F_SETFL, O_NONBLOCK);

    auto deadline = std::chrono::steady_clock::now() + std::chrono::seconds(timeout_s);
    std::chrono::steady_clock::time_point killed_at;
    bool out_open = true;
    bool err_open = true;
    char buffer[4096];
    while (out_open || err_open) {
        auto now = std::chrono::steady_clock::now();
        auto remaining = std::chrono::duration_cast<std::chrono::milliseconds>(deadline - now);
        if (remaining.count() <= 0 && !result.timed_out) {
            result.timed_out = true;
            killed_at = now;
            kill(-pid, SIGKILL);
        }
        // Give a killed group 2s to release the pipes (a reparented grandchild
        // could hold them), then stop reading.
        if (result.timed_out && now - killed_at > std::chrono::seconds(2)) break;
        struct pollfd fds[2];
        int n = 0;
        if (out_open) fds[n++] = {out_pipe[0], POLLIN, 0};
        if (err_open) fds[n++] = {err_pipe[0], POLLIN, 0};
        int wait_ms = result.timed_out ? 100 : static_cast<int>(std::min<long long>(
                                                  remaining.count(), 200));
        poll(fds, static_cast<nfds_t>(n), std::max(wait_ms, 1));
        for (int i = 0; i < n; ++i) {
            if (!(fds[i].revents & (POLLIN | POLLHUP))) continue;
            ssize_t got;
            while ((got = read(fds[i].fd, buffer, sizeof buffer)) > 0) {
                if (fds[i].fd == out_pipe[0])
                    result.out.append(buffer, static_cast<std::size_t>(got));
                else
                    result.err.append(buffer, static_cast<std::size_t>(got));
            }
            if (got == 0) {
                if (fds[i].fd == out_pipe[0]) out_open = false;
                else err_open = false;
            }
        }
    }
    close(out_pipe[0]);
    close(err_pipe[0]);

    int status = 0;
    waitpid(pid, &status, 0);
    if (result.timed_out)
        result.exit_code = -1;
    else if (WIFEXITED(status))
        result.exit_code = WEXITSTATUS(status);
    else if (WIFSIGNALED(status))
        result.exit_code = 128 + WTERMSIG(status);
    return result;
}

// Lexicographically-first generated .v/.sv under workdir, excluding the input.
std::optional<fs::path> find_artifact(const fs::path& workdir, const fs::path& input) {
    std::optional<fs::path> best;
    std::error_code ec;
    for (auto it = fs::recursive_directory_iterator(workdir, ec);
         !ec && it != fs::recursive_directory_iterator(); it.increment(ec)) {
        if (!it->is_regular_file(ec)) continue;
        const fs::path& p = it->path();
        std::string ext = p.extension().string();
        if (ext != ".v" && ext != ".sv") continue;
        if (fs::equivalent(p, input, ec)) continue;
        if (!best || p.string() < best->string()) best = p;
    }
    return best;
}

}  // namespace

CompileOutcome compile(const CodeCandidate& candidate, const HdlProfile& profile,
                       const fs::path& workdir) {
    CompileOutcome outcome;
    try {
        fs::create_directories(workdir);
        fs::path source = workdir / ("design." + profile.file_extension);
        write_file(source, candidate.code);
        std::string command = render_compile_command(profile.compile_command, source, workdir);

        if (!executable_on_path(first_command_word(command))) {
            outcome.status = CompileStatus::tool_missing;
            outcome.exit_code = 127;
            outcome.diagnostic = "compiler not found: " + first_command_word(command);
            return outcome;
        }

        RunResult run = run_shell(command, profile.compile_timeout_s);
        outcome.exit_code = run.exit_code;
        if (run.timed_out) {
            outcome.status = CompileStatus::timeout;
            outcome.diagnostic = run.err + run.out;
            if (trim(outcome.diagnostic).empty())
                outcome.diagnostic = "no output before the time limit";
            return outcome;
        }
        if (run.exit_code == 126 || run.exit_code == 127) {
            outcome.status = CompileStatus::tool_missing;
            outcome.diagnostic = run.err + run.out;
            if (trim(outcome.diagnostic).empty())
                outcome.diagnostic = "compiler not found: " + first_command_word(command);
            return outcome;
        }
        if (run.exit_code == 0) {
            outcome.status = CompileStatus::success;
            bool source_is_verilog =
                profile.file_extension == "v" || profile.file_extension == "sv";
            if (!source_is_verilog) outcome.artifact_path = find_artifact(workdir, source);
            return outcome;
        }
        outcome.status = CompileStatus::failure;
        outcome.diagnostic = run.err + run.out;
        if (trim(outcome.diagnostic).empty())
            outcome.diagnostic =
                "compiler exited with status " + std::to_string(run.exit_code) +
                " and produced no output";
        return outcome;
    } catch (const std::exception& e) {
        // Totality: infrastructure trouble surfaces as a failure outcome.
        outcome.status = CompileStatus::failure;
        outcome.exit_code = -1;
        outcome.diagnostic = std::string("compile driver error: ") + e.what();
        return outcome;
    }
}

CompileOutcome run_tool_command(const std::string& command, int timeout_s) {
    CompileOutcome outcome;
    try {
        if (!executable_on_path(first_command_word(command))) {
            outcome.status = CompileStatus::tool_missing;
            outcome.exit_code = 127;
            outcome.diagnostic = "tool not found: " + first_command_word(command);
            return outcome;
        }
        RunResult run = run_shell(command, timeout_s);
        outcome.exit_code = run.exit_code;
        outcome.diagnostic = run.err + run.out;
        if (run.timed_out) {
            outcome.status = CompileStatus::timeout;
        } else if (run.exit_code == 126 || run.exit_code == 127) {
            outcome.status = CompileStatus::tool_missing;
        } else if (run.exit_code == 0) {
            outcome.status = CompileStatus::success;
        } else {
            outcome.status = CompileStatus::failure;
        }
        return outcome;
    } catch (const std::exception& e) {
        outcome.status = CompileStatus::failure;
        outcome.exit_code = -1;
        outcome.diagnostic = std::string("tool runner error: ") + e.what();
        return outcome;
    }
}

std::optional<ErrorFix> match_fix(const std::string& diagnostic, const HdlProfile& profile) {
    for (const ErrorFix& fix : profile.error_fixes) {
        if (fix.is_regex) {
            try {
                if (std::regex_search(diagnostic, std::regex(fix.pattern))) return fix;
            } catch (const std::regex_error&) {
                continue;  // validated at load time; a bad pattern just never matches
            }
        } else if (diagnostic.find(fix.pattern) != std::string::npos) {
            return fix;
        }
    }
    return std::nullopt;
}

}  // namespace hdlagent
