#pragma once
// The repair loop: initial query -> extract -> compile -> repair queries,
// bounded by an iteration budget, plus independent top@k attempts and run
// persistence.

#include "hdlagent/backend.hpp"
#include "hdlagent/compile.hpp"
#include "hdlagent/context.hpp"
#include "hdlagent/extract.hpp"
#include "hdlagent/profile.hpp"

#include <nlohmann/json.hpp>

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace hdlagent {

enum class FinalStatus { passed_compile, exhausted, extraction_dead, backend_dead };

std::string final_status_to_string(FinalStatus status);

// What the repair loop feeds back when the compiler hit its time limit —
// honest grounding instead of a fabricated error message.
inline constexpr const char* kTimeoutDiagnostic =
    "The compiler did not terminate within the time limit.";

struct IterationRecord {
    int index = 1;  // 1-based
    std::string prompt_digest;
    std::string raw_response_digest;
    std::optional<CodeCandidate> candidate;  // absent iff extraction failed
    std::optional<CompileOutcome> outcome;   // absent iff candidate absent
    std::optional<std::string> fix_applied;  // pattern of the fix embedded in this prompt
};

struct AgentRunRecord {
    std::string question;
    std::string profile_name;
    AblationStage stage = AblationStage::fixes;
    std::vector<IterationRecord> iterations;
    FinalStatus final_status = FinalStatus::exhausted;
    std::optional<std::string> final_code;  // set only on passed_compile
    TokenLedger ledger;
    double wall_time_s = 0.0;
    // Raw prompt/response texts keyed by digest, persisted next to the record.
    std::map<std::string, std::string> raw_texts;
};

struct AgentOptions {
    int max_iterations = 8;
    RequestParams params;            // model/temperature/max tokens for every call
    std::filesystem::path workdir;   // empty: a fresh temp dir, removed afterwards
};

// One agent run. Iteration 1 is the initial query; later iterations are
// repair queries carrying only the latest candidate and diagnostic (history
// is flushed). Stages below `compile` stop after the single initial attempt.
// tool_missing and backend errors abort the run instead of consuming budget.
AgentRunRecord run_agent(const std::string& question, const HdlProfile& profile,
                         LlmBackend& backend, AblationStage stage,
                         const AgentOptions& options = {});

// k fully independent runs, returned in attempt order.
std::vector<AgentRunRecord> run_top_k(const std::string& question, const HdlProfile& profile,
                                      LlmBackend& backend, AblationStage stage, int k,
                                      const AgentOptions& options = {});

// True when at least one of the first k records passed compile.
bool pass_at_k(const std::vector<AgentRunRecord>& records, int k);

nlohmann::json run_record_to_json(const AgentRunRecord& record);

// Writes {outdir}/runs/{test}/{attempt}.json plus one .txt per raw text,
// keyed by digest.
void persist_run(const AgentRunRecord& record, const std::filesystem::path& outdir,
                 const std::string& test_name, int attempt);

}  // namespace hdlagent
