#pragma once
// Command-line surface: gen / bench / profiles / normalize / summarize.

#include "hdlagent/backend.hpp"
#include "hdlagent/profile.hpp"

#include <atomic>
#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

namespace hdlagent {

struct CliConfig {
    std::string profile = "verilog";    // bundled name or path to a profile JSON file
    std::string backend_kind = "mock";  // http | replay | mock
    std::string endpoint;
    std::string model;
    double temperature = 0.7;
    int max_output_tokens = 4096;
    int max_iterations = 8;
    std::string stage = "fixes";
    std::vector<int> ks = {1};
    int parallelism = 1;
    std::string outdir = "hdlagent_out";
    std::string cassette;      // replay source
    std::string record_path;   // cassette to append live interactions to
    std::string mock_script;   // scripted responses (JSON) for --backend mock
    std::string lec_command;   // {golden} / {candidate} template
    std::string synth_command; // {file} template whose output carries a gate count
};

// Builds the backend the config describes. Throws ValidationError when a
// required piece is missing: replay needs a cassette, http needs endpoint and
// model. The API key is read from HDLAGENT_API_KEY, never from flags.
std::shared_ptr<LlmBackend> make_backend(const CliConfig& config);

// Bundled profile by name, otherwise a profile file by path.
HdlProfile resolve_profile(const std::string& name_or_path);

// "1,5,10" -> {1, 5, 10}; every entry must be a positive integer.
std::vector<int> parse_k_spec(const std::string& spec);

// Cooperative cancellation checked between benchmark tasks; main() wires it
// to SIGINT so an interrupted run still flushes a partial report.
std::atomic<bool>& cancel_flag();

// Subcommand entry points. Exit codes: 0 success, 1 run-level failure,
// 2 configuration error. cmd_gen's stdout is exactly the final code (logs go
// to err), so it is pipeline-safe.
int cmd_gen(const std::string& question, const CliConfig& config, std::ostream& out,
            std::ostream& err);
int cmd_bench(const std::string& suite_dir, const CliConfig& config, std::ostream& out,
              std::ostream& err);
int cmd_profiles(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int cmd_normalize(const std::string& file, const std::string& convention,
                  const std::string& golden_file, std::ostream& out, std::ostream& err);
int cmd_summarize(const std::string& manual_file, const std::string& hdl,
                  const std::string& style, const CliConfig& config, std::ostream& out,
                  std::ostream& err);

// Parses argv-style arguments (program name excluded) and dispatches.
int run_cli(std::vector<std::string> args, std::ostream& out, std::ostream& err);

}  // namespace hdlagent
