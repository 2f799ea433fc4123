#pragma once
// Benchmark harness: loads test suites, fans (test, attempt) pairs out to a
// worker pool, scores compile/normalize/equivalence results, and renders
// pass@k / LoC-bucket / token / QoR reports.

#include "hdlagent/agent.hpp"
#include "hdlagent/backend.hpp"
#include "hdlagent/profile.hpp"

#include <atomic>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace hdlagent {

enum class TestCategory { combinational, pipelined };

struct BenchTest {
    std::string name;
    std::string question;
    std::string golden_verilog;
    TestCategory category = TestCategory::combinational;
    int golden_loc = 0;  // non-blank, non-comment-only lines of the golden
    std::filesystem::path golden_path;
};

// Non-blank lines that are not comment-only.
int count_loc(const std::string& verilog);

// Bucket labels for golden LoC: [1,25) "<25", [25,50) "25-50",
// [50,75) "50-75", [75,inf) ">75".
std::string bucket_label(int loc);
std::map<std::string, std::vector<BenchTest>> bucket_by_loc(const std::vector<BenchTest>& tests);

// {suite}/{test}/question.txt + golden.v (+ optional meta.json with
// {"category": "comb"|"pipe"}), returned sorted by name.
std::vector<BenchTest> load_suite(const std::filesystem::path& path);

// candidate/best gate-count ratio; a candidate at or below the best counts as
// optimal (1.0) — the store update is the caller's job.
double qor_ratio(long candidate_gates, long best_gates);

// Total cell count from a synthesis report's statistics section (the last
// "Number of cells:" line, which carries the hierarchy total).
long parse_gate_count(const std::string& synthesis_report);

// Best-known gate counts per test, one JSON file per suite, updated under an
// exclusive file lock so concurrent suite runs stay consistent.
class QorStore {
public:
    explicit QorStore(std::filesystem::path path);

    // Applies the best-update rule and returns the candidate's ratio.
    double record(const std::string& test, long candidate_gates);

    std::optional<long> best(const std::string& test) const;

private:
    std::filesystem::path path_;
};

struct AttemptResult {
    std::string test;
    int attempt = 1;
    std::string status;  // pass | compile-pass | fail | skipped
    int iterations = 0;
    long tokens = 0;
    std::string bucket;
    std::optional<double> qor;
    bool passing = false;                   // counted toward pass@k
    std::filesystem::path normalized_path;  // written normalized Verilog, when any
};

struct BenchReport {
    std::vector<AttemptResult> per_test;  // sorted by (test, attempt)
    std::map<int, int> pass_at_k;         // requested k -> passing test count
    std::map<std::string, std::pair<int, int>> buckets;  // label -> (passed, total)
    long tokens_total = 0;
    double efficiency = 0.0;  // failure rate x total tokens
    std::map<std::string, double> qor;
    std::string pass_criterion;  // "lec" or "compile+normalize"
    int tests_total = 0;
    int tests_skipped = 0;
};

struct BenchConfig {
    AblationStage stage = AblationStage::fixes;
    std::vector<int> ks = {1};  // attempts executed = max k
    int parallelism = 1;
    int max_iterations = 8;
    RequestParams params;
    std::filesystem::path outdir;  // runs/, work/, report.* live here
    std::string lec_command;       // optional; {golden} and {candidate} placeholders
    std::string synth_command;     // optional; {file} placeholder, enables QoR
    std::filesystem::path suite_dir;  // home of the QoR best-known store
    const std::atomic<bool>* cancel = nullptr;  // set -> stop starting new attempts
};

BenchReport run_bench(const std::vector<BenchTest>& suite, const HdlProfile& profile,
                      LlmBackend& backend, const BenchConfig& config);

enum class ReportFormat { json, csv, markdown };

std::string render_report(const BenchReport& report, ReportFormat format);

}  // namespace hdlagent
