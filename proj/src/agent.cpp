#include "hdlagent/agent.hpp"

#include "hdlagent/util.hpp"

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <string>

namespace hdlagent {

namespace fs = std::filesystem;
using nlohmann::json;

std::string final_status_to_string(FinalStatus status) {
    switch (status) {
        case FinalStatus::passed_compile: return "passed_compile";
        case FinalStatus::exhausted: return "exhausted";
        case FinalStatus::extraction_dead: return "extraction_dead";
        case FinalStatus::backend_dead: return "backend_dead";
    }
    return "exhausted";
}

namespace {

fs::path make_temp_dir() {
    std::string pattern = (fs::temp_directory_path() / "hdlagent-XXXXXX").string();
    std::vector<char> buf(pattern.begin(), pattern.end());
    buf.push_back('\0');
    if (!mkdtemp(buf.data())) throw IoError("mkdtemp failed for " + pattern);
    return fs::path(buf.data());
}

}  // namespace

AgentRunRecord run_agent(const std::string& question, const HdlProfile& profile,
                         LlmBackend& backend, AblationStage stage,
                         const AgentOptions& options) {
    if (options.max_iterations < 1)
        throw ValidationError("max_iterations", "must be >= 1");
    auto started = std::chrono::steady_clock::now();

    AgentRunRecord record;
    record.question = question;
    record.profile_name = profile.name;
    record.stage = stage;

    bool own_workdir = options.workdir.empty();
    fs::path workroot = own_workdir ? make_temp_dir() : options.workdir;
    fs::create_directories(workroot);

    std::optional<CodeCandidate> last_candidate;
    std::string last_diagnostic;
    bool iterate = stage >= AblationStage::compile;
    bool decided = false;

    for (int i = 1; i <= options.max_iterations; ++i) {
        bool is_repair = last_candidate.has_value() && !last_diagnostic.empty();
        std::optional<ErrorFix> fix;
        if (is_repair && stage == AblationStage::fixes)
            fix = match_fix(last_diagnostic, profile);
        PromptBundle bundle =
            is_repair ? build_repair_query(profile, question, *last_candidate, last_diagnostic,
                                           fix, stage)
                      : build_initial_query(profile, question, stage);

        ChatRequest request;
        request.system_text = bundle.system_text;
        request.user_text = bundle.user_text;
        request.model = options.params.model;
        request.temperature = options.params.temperature;
        request.max_output_tokens = options.params.max_output_tokens;

        CompletionResult completion;
        try {
            completion = backend.complete(request);
        } catch (const BackendError&) {
            record.final_status = FinalStatus::backend_dead;
            decided = true;
            break;
        }

        IterationRecord iter;
        iter.index = i;
        iter.prompt_digest = request_digest(request);
        iter.raw_response_digest = sha256_hex(completion.text);
        if (is_repair && fix) iter.fix_applied = fix->pattern;
        record.raw_texts[iter.prompt_digest] = bundle.user_text;
        record.raw_texts[iter.raw_response_digest] = completion.text;
        record.ledger.add(is_repair ? "repair" : "initial", completion.prompt_tokens,
                          completion.completion_tokens);

        try {
            iter.candidate = extract_code(completion.text, profile, i);
        } catch (const NoCodeFound&) {
            // Consumed iteration; the next prompt reuses the last valid
            // candidate, or retries the initial query if none exists yet.
        }

        if (iter.candidate) {
            CompileOutcome outcome =
                compile(*iter.candidate, profile, workroot / ("iter_" + std::to_string(i)));
            iter.outcome = outcome;
            last_candidate = iter.candidate;
            if (outcome.status == CompileStatus::success) {
                record.final_status = FinalStatus::passed_compile;
                record.final_code = iter.candidate->code;
                record.iterations.push_back(std::move(iter));
                decided = true;
                break;
            }
            if (outcome.status == CompileStatus::tool_missing) {
                // Retrying cannot help; stop without consuming more budget.
                record.final_status = FinalStatus::exhausted;
                record.iterations.push_back(std::move(iter));
                decided = true;
                break;
            }
            last_diagnostic = outcome.status == CompileStatus::timeout ? kTimeoutDiagnostic
                                                                       : outcome.diagnostic;
        }
        record.iterations.push_back(std::move(iter));

        if (!iterate) break;  // base/description/few_shot stop after one attempt
    }

    if (!decided) {
        bool any_candidate = false;
        for (const IterationRecord& iter : record.iterations)
            if (iter.candidate) any_candidate = true;
        record.final_status =
            any_candidate ? FinalStatus::exhausted : FinalStatus::extraction_dead;
    }

    if (own_workdir) {
        std::error_code ec;
        fs::remove_all(workroot, ec);
    }

    record.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                                       started)
                             .count();
    return record;
}

std::vector<AgentRunRecord> run_top_k(const std::string& question, const HdlProfile& profile,
                                      LlmBackend& backend, AblationStage stage, int k,
                                      const AgentOptions& options) {
    if (k < 1) throw ValidationError("k", "must be >= 1");
    std::vector<AgentRunRecord> records;
    records.reserve(static_cast<std::size_t>(k));
    for (int attempt = 1; attempt <= k; ++attempt) {
        AgentOptions per_attempt = options;
        if (!options.workdir.empty())
            per_attempt.workdir = options.workdir / ("attempt_" + std::to_string(attempt));
        records.push_back(run_agent(question, profile, backend, stage, per_attempt));
    }
    return records;
}

bool pass_at_k(const std::vector<AgentRunRecord>& records, int k) {
    int limit = std::min<int>(k, static_cast<int>(records.size()));
    for (int i = 0; i < limit; ++i)
        if (records[static_cast<std::size_t>(i)].final_status == FinalStatus::passed_compile)
            return true;
    return false;
}

nlohmann::json run_record_to_json(const AgentRunRecord& record) {
    json j;
    j["question"] = record.question;
    j["profile_name"] = record.profile_name;
    j["stage"] = stage_to_string(record.stage);
    j["final_status"] = final_status_to_string(record.final_status);
    j["final_code"] = record.final_code ? json(*record.final_code) : json(nullptr);
    j["wall_time_s"] = record.wall_time_s;

    json iterations = json::array();
    for (const IterationRecord& iter : record.iterations) {
        json ji;
        ji["index"] = iter.index;
        ji["prompt_digest"] = iter.prompt_digest;
        ji["raw_response_digest"] = iter.raw_response_digest;
        if (iter.candidate) {
            ji["candidate"] = {
                {"code", iter.candidate->code},
                {"language", iter.candidate->language},
                {"source_iteration", iter.candidate->source_iteration},
                {"extraction_rule", extraction_rule_to_string(iter.candidate->extraction_rule)},
            };
        } else {
            ji["candidate"] = nullptr;
        }
        if (iter.outcome) {
            ji["outcome"] = {
                {"status", compile_status_to_string(iter.outcome->status)},
                {"diagnostic", iter.outcome->diagnostic},
                {"exit_code", iter.outcome->exit_code},
                {"artifact_path", iter.outcome->artifact_path
                                      ? json(iter.outcome->artifact_path->string())
                                      : json(nullptr)},
            };
        } else {
            ji["outcome"] = nullptr;
        }
        ji["fix_applied"] = iter.fix_applied ? json(*iter.fix_applied) : json(nullptr);
        iterations.push_back(std::move(ji));
    }
    j["iterations"] = std::move(iterations);

    json calls = json::array();
    for (const LedgerEntry& entry : record.ledger.per_call())
        calls.push_back({{"purpose", entry.purpose},
                         {"prompt_tokens", entry.prompt_tokens},
                         {"completion_tokens", entry.completion_tokens}});
    j["ledger"] = {{"per_call", std::move(calls)},
                   {"total_prompt_tokens", record.ledger.total_prompt_tokens()},
                   {"total_completion_tokens", record.ledger.total_completion_tokens()},
                   {"total_tokens", record.ledger.total_tokens()}};
    return j;
}

void persist_run(const AgentRunRecord& record, const fs::path& outdir,
                 const std::string& test_name, int attempt) {
    fs::path dir = outdir / "runs" / test_name;
    fs::create_directories(dir);
    write_file(dir / (std::to_string(attempt) + ".json"), run_record_to_json(record).dump(2) + "\n");
    for (const auto& [digest, text] : record.raw_texts)
        write_file(dir / (digest + ".txt"), text);
}

}  // namespace hdlagent
