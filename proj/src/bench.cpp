#include "hdlagent/bench.hpp"

#include "hdlagent/compile.hpp"
#include "hdlagent/util.hpp"
#include "hdlagent/verilog_io.hpp"

#include <nlohmann/json.hpp>

#include <fcntl.h>
#include <sys/file.h>
#include <unistd.h>

#include <algorithm>
#include <cctype>
#include <mutex>
#include <sstream>
#include <thread>

namespace hdlagent {

namespace fs = std::filesystem;
using nlohmann::json;

int count_loc(const std::string& verilog) {
    std::string blanked = blank_verilog_comments(verilog);
    int count = 0;
    for (const std::string& line : split_lines(blanked))
        if (!trim(line).empty()) ++count;
    return count;
}

std::string bucket_label(int loc) {
    if (loc < 25) return "<25";
    if (loc < 50) return "25-50";
    if (loc < 75) return "50-75";
    return ">75";
}

std::map<std::string, std::vector<BenchTest>> bucket_by_loc(const std::vector<BenchTest>& tests) {
    std::map<std::string, std::vector<BenchTest>> buckets;
    for (const BenchTest& test : tests) buckets[bucket_label(test.golden_loc)].push_back(test);
    return buckets;
}

std::vector<BenchTest> load_suite(const fs::path& path) {
    if (!fs::is_directory(path)) throw IoError("suite directory not found: " + path.string());
    std::vector<BenchTest> tests;
    for (const auto& entry : fs::directory_iterator(path)) {
        if (!entry.is_directory()) continue;
        std::string name = entry.path().filename().string();
        if (name.empty() || name[0] == '.') continue;

        BenchTest test;
        test.name = name;
        fs::path question_path = entry.path() / "question.txt";
        fs::path golden_path = entry.path() / "golden.v";
        if (!fs::is_regular_file(question_path))
            throw MalformedTest(entry.path().string() + ": missing question.txt");
        if (!fs::is_regular_file(golden_path))
            throw MalformedTest(entry.path().string() + ": missing golden.v");
        test.question = read_file(question_path);
        test.golden_verilog = read_file(golden_path);
        test.golden_path = golden_path;
        if (trim(test.question).empty())
            throw MalformedTest(entry.path().string() + ": question.txt is empty");

        fs::path meta_path = entry.path() / "meta.json";
        if (fs::is_regular_file(meta_path)) {
            json meta;
            try {
                meta = json::parse(read_file(meta_path));
            } catch (const json::parse_error& e) {
                throw MalformedTest(entry.path().string() + ": meta.json: " + e.what());
            }
            if (meta.contains("category")) {
                std::string category = meta["category"].is_string()
                                           ? meta["category"].get<std::string>()
                                           : std::string();
                if (category == "comb")
                    test.category = TestCategory::combinational;
                else if (category == "pipe")
                    test.category = TestCategory::pipelined;
                else
                    throw MalformedTest(entry.path().string() +
                                        ": meta.json category must be \"comb\" or \"pipe\"");
            }
        }

        try {
            parse_interface(test.golden_verilog);
        } catch (const Error& e) {
            throw MalformedTest(entry.path().string() + ": golden.v does not parse: " + e.what());
        }
        test.golden_loc = count_loc(test.golden_verilog);
        if (test.golden_loc < 1)
            throw MalformedTest(entry.path().string() + ": golden.v has no code lines");
        tests.push_back(std::move(test));
    }
    std::sort(tests.begin(), tests.end(),
              [](const BenchTest& a, const BenchTest& b) { return a.name < b.name; });
    return tests;
}

double qor_ratio(long candidate_gates, long best_gates) {
    if (candidate_gates <= 0)
        throw InvalidGateCount("candidate gate count must be positive, got " +
                               std::to_string(candidate_gates));
    if (best_gates <= 0)
        throw InvalidGateCount("best gate count must be positive, got " +
                               std::to_string(best_gates));
    if (candidate_gates <= best_gates) return 1.0;
    return static_cast<double>(candidate_gates) / static_cast<double>(best_gates);
}

long parse_gate_count(const std::string& synthesis_report) {
    static const std::string marker = "Number of cells:";
    std::size_t pos = synthesis_report.rfind(marker);
    if (pos == std::string::npos)
        throw ParseError("no \"" + marker + "\" line in the synthesis report");
    std::size_t i = pos + marker.size();
    while (i < synthesis_report.size() &&
           std::isspace(static_cast<unsigned char>(synthesis_report[i])) &&
           synthesis_report[i] != '\n')
        ++i;
    std::size_t start = i;
    while (i < synthesis_report.size() &&
           std::isdigit(static_cast<unsigned char>(synthesis_report[i])))
        ++i;
    if (i == start) throw ParseError("cell-count line carries no number");
    return std::stol(synthesis_report.substr(start, i - start));
}

QorStore::QorStore(fs::path path) : path_(std::move(path)) {}

double QorStore::record(const std::string& test, long candidate_gates) {
    if (candidate_gates <= 0)
        throw InvalidGateCount("gate count must be positive, got " +
                               std::to_string(candidate_gates));
    int fd = ::open(path_.string().c_str(), O_RDWR | O_CREAT, 0644);
    if (fd < 0) throw IoError("cannot open qor store: " + path_.string());
    ::flock(fd, LOCK_EX);

    std::string content;
    char buf[4096];
    ssize_t n;
    while ((n = ::read(fd, buf, sizeof buf)) > 0) content.append(buf, static_cast<std::size_t>(n));

    json j = json::object();
    if (!trim(content).empty()) {
        j = json::parse(content, nullptr, false);
        if (j.is_discarded() || !j.is_object()) j = json::object();
    }
    std::optional<long> stored;
    if (j.contains(test) && j[test].is_number()) stored = j[test].get<long>();

    long best = stored ? std::min(*stored, candidate_gates) : candidate_gates;
    bool update = !stored || candidate_gates < *stored;
    double ratio = qor_ratio(candidate_gates, best);
    if (update) {
        j[test] = best;
        std::string out = j.dump(2) + "\n";
        if (::ftruncate(fd, 0) == 0 && ::lseek(fd, 0, SEEK_SET) == 0) {
            ssize_t written = ::write(fd, out.data(), out.size());
            (void)written;
        }
    }
    ::flock(fd, LOCK_UN);
    ::close(fd);
    return ratio;
}

std::optional<long> QorStore::best(const std::string& test) const {
    int fd = ::open(path_.string().c_str(), O_RDONLY);
    if (fd < 0) return std::nullopt;
    ::flock(fd, LOCK_SH);
    std::string content;
    char buf[4096];
    ssize_t n;
    while ((n = ::read(fd, buf, sizeof buf)) > 0) content.append(buf, static_cast<std::size_t>(n));
    ::flock(fd, LOCK_UN);
    ::close(fd);
    json j = json::parse(content, nullptr, false);
    if (j.is_discarded() || !j.is_object() || !j.contains(test) || !j[test].is_number())
        return std::nullopt;
    return j[test].get<long>();
}

namespace {

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

// One (test, attempt) execution: agent run, persistence, normalization, and
// the optional equivalence check.
AttemptResult run_attempt(const BenchTest& test, int attempt, const HdlProfile& profile,
                          LlmBackend& backend, const BenchConfig& config) {
    AttemptResult res;
    res.test = test.name;
    res.attempt = attempt;
    res.bucket = bucket_label(test.golden_loc);

    AgentOptions options;
    options.max_iterations = config.max_iterations;
    options.params = config.params;
    fs::path work = config.outdir / "work" / test.name / ("attempt_" + std::to_string(attempt));
    options.workdir = work;

    AgentRunRecord record = run_agent(test.question, profile, backend, config.stage, options);
    persist_run(record, config.outdir, test.name, attempt);
    res.iterations = static_cast<int>(record.iterations.size());
    res.tokens = record.ledger.total_tokens();

    if (record.final_status != FinalStatus::passed_compile) {
        res.status = "fail";
        return res;
    }
    try {
        ModuleInterface golden = parse_interface(test.golden_verilog);
        std::string candidate_verilog;
        const IterationRecord& last = record.iterations.back();
        if (last.outcome && last.outcome->artifact_path)
            candidate_verilog = read_file(*last.outcome->artifact_path);
        else
            candidate_verilog = record.final_code.value_or("");
        std::string normalized = normalize(candidate_verilog, profile.io_convention, golden);

        fs::create_directories(work);
        fs::path normalized_path = work / "normalized.v";
        write_file(normalized_path, normalized);
        res.normalized_path = normalized_path;

        if (!config.lec_command.empty()) {
            fs::path golden_path = test.golden_path;
            if (golden_path.empty()) {
                golden_path = work / "golden.v";
                write_file(golden_path, test.golden_verilog);
            }
            std::string command = replace_all(config.lec_command, "{golden}",
                                              golden_path.string());
            command = replace_all(command, "{candidate}", normalized_path.string());
            CompileOutcome check = run_tool_command(command, profile.compile_timeout_s);
            res.passing = check.status == CompileStatus::success;
            res.status = res.passing ? "pass" : "fail";
        } else {
            res.passing = true;
            res.status = "compile-pass";
        }
    } catch (const Error&) {
        res.status = "fail";
    }
    return res;
}

}  // namespace

BenchReport run_bench(const std::vector<BenchTest>& suite, const HdlProfile& profile,
                      LlmBackend& backend, const BenchConfig& config) {
    if (suite.empty()) throw ValidationError("suite", "must contain at least one test");
    if (config.ks.empty()) throw ValidationError("k", "at least one k value is required");
    for (int k : config.ks)
        if (k < 1) throw ValidationError("k", "k values must be >= 1");
    if (config.parallelism < 1) throw ValidationError("parallelism", "must be >= 1");

    int max_k = *std::max_element(config.ks.begin(), config.ks.end());
    fs::create_directories(config.outdir);

    bool dslx_profile = lower(profile.name) == "dslx";
    std::vector<bool> skipped(suite.size(), false);
    std::vector<std::pair<std::size_t, int>> tasks;
    for (std::size_t ti = 0; ti < suite.size(); ++ti) {
        if (dslx_profile && suite[ti].category == TestCategory::pipelined) {
            skipped[ti] = true;  // unsupported pipelining: skipped, not failed
            continue;
        }
        for (int attempt = 1; attempt <= max_k; ++attempt) tasks.emplace_back(ti, attempt);
    }

    std::vector<std::vector<std::optional<AttemptResult>>> results(suite.size());
    for (auto& row : results) row.resize(static_cast<std::size_t>(max_k));

    std::atomic<std::size_t> next{0};
    std::mutex mutex;
    std::exception_ptr fatal;
    auto worker = [&] {
        while (true) {
            if (config.cancel && config.cancel->load()) break;
            std::size_t idx = next.fetch_add(1);
            if (idx >= tasks.size()) break;
            auto [ti, attempt] = tasks[idx];
            try {
                AttemptResult res = run_attempt(suite[ti], attempt, profile, backend, config);
                std::lock_guard<std::mutex> lock(mutex);
                results[ti][static_cast<std::size_t>(attempt - 1)] = std::move(res);
            } catch (...) {
                std::lock_guard<std::mutex> lock(mutex);
                if (!fatal) fatal = std::current_exception();
            }
        }
    };
    int nthreads = std::max(1, std::min<int>(config.parallelism,
                                             static_cast<int>(tasks.size())));
    if (nthreads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(nthreads));
        for (int i = 0; i < nthreads; ++i) pool.emplace_back(worker);
        for (std::thread& t : pool) t.join();
    }
    if (fatal) std::rethrow_exception(fatal);

    BenchReport report;
    report.pass_criterion = config.lec_command.empty() ? "compile+normalize" : "lec";
    report.tests_total = static_cast<int>(suite.size());

    if (!config.synth_command.empty()) {
        QorStore store((config.suite_dir.empty() ? config.outdir : config.suite_dir) /
                       ".qor_best.json");
        for (std::size_t ti = 0; ti < suite.size(); ++ti) {
            if (skipped[ti]) continue;
            for (auto& slot : results[ti]) {
                if (!slot || !slot->passing || slot->normalized_path.empty()) continue;
                std::string command =
                    replace_all(config.synth_command, "{file}", slot->normalized_path.string());
                CompileOutcome synth = run_tool_command(command, 300);
                if (synth.status != CompileStatus::success) break;
                try {
                    long gates = parse_gate_count(synth.diagnostic);
                    double ratio = store.record(suite[ti].name, gates);
                    report.qor[suite[ti].name] = ratio;
                    slot->qor = ratio;
                } catch (const Error&) {
                }
                break;  // first passing attempt only
            }
        }
    }

    for (std::size_t ti = 0; ti < suite.size(); ++ti) {
        if (skipped[ti]) {
            ++report.tests_skipped;
            AttemptResult res;
            res.test = suite[ti].name;
            res.attempt = 1;
            res.status = "skipped";
            res.bucket = bucket_label(suite[ti].golden_loc);
            report.per_test.push_back(std::move(res));
            continue;
        }
        for (const auto& slot : results[ti]) {
            if (!slot) continue;  // cancelled before this attempt started
            report.tokens_total += slot->tokens;
            report.per_test.push_back(*slot);
        }
    }

    auto passed_within = [&](std::size_t ti, int k) {
        for (int a = 0; a < k && a < max_k; ++a) {
            const auto& slot = results[ti][static_cast<std::size_t>(a)];
            if (slot && slot->passing) return true;
        }
        return false;
    };

    for (int k : config.ks) {
        int count = 0;
        for (std::size_t ti = 0; ti < suite.size(); ++ti)
            if (!skipped[ti] && passed_within(ti, k)) ++count;
        report.pass_at_k[k] = count;
    }

    int scored = 0;
    int passed_at_max = 0;
    for (std::size_t ti = 0; ti < suite.size(); ++ti) {
        bool passed = !skipped[ti] && passed_within(ti, max_k);
        auto& bucket = report.buckets[bucket_label(suite[ti].golden_loc)];
        ++bucket.second;
        if (passed) ++bucket.first;
        if (!skipped[ti]) {
            ++scored;
            if (passed) ++passed_at_max;
        }
    }
    double failure_rate =
        scored == 0 ? 0.0 : 1.0 - static_cast<double>(passed_at_max) / scored;
    report.efficiency = failure_rate * static_cast<double>(report.tokens_total);

    return report;
}

namespace {

std::string double_repr(double value) {
    return json(value).dump();  // shortest round-trip form, deterministic
}

std::string render_json(const BenchReport& report) {
    json j;
    j["pass_criterion"] = report.pass_criterion;
    j["tests_total"] = report.tests_total;
    j["tests_skipped"] = report.tests_skipped;
    json pk = json::object();
    for (const auto& [k, count] : report.pass_at_k) pk[std::to_string(k)] = count;
    j["pass_at_k"] = std::move(pk);
    json buckets = json::object();
    for (const auto& [label, counts] : report.buckets)
        buckets[label] = {{"passed", counts.first}, {"total", counts.second}};
    j["buckets"] = std::move(buckets);
    j["tokens_total"] = report.tokens_total;
    j["efficiency"] = report.efficiency;
    j["qor"] = report.qor.empty() ? json::object() : json(report.qor);
    json rows = json::array();
    for (const AttemptResult& row : report.per_test) {
        rows.push_back({{"test", row.test},
                        {"attempt", row.attempt},
                        {"status", row.status},
                        {"iterations", row.iterations},
                        {"tokens", row.tokens},
                        {"bucket", row.bucket},
                        {"qor", row.qor ? json(*row.qor) : json(nullptr)}});
    }
    j["per_test"] = std::move(rows);
    return j.dump(2) + "\n";
}

std::string render_csv(const BenchReport& report) {
    std::ostringstream out;
    out << "test,attempt,status,iterations,tokens,bucket,qor\n";
    for (const AttemptResult& row : report.per_test) {
        out << row.test << "," << row.attempt << "," << row.status << "," << row.iterations
            << "," << row.tokens << "," << row.bucket << ","
            << (row.qor ? double_repr(*row.qor) : "") << "\n";
    }
    return out.str();
}

std::string render_markdown(const BenchReport& report) {
    std::ostringstream out;
    out << "# Benchmark report\n\n";
    out << "Pass criterion: " << report.pass_criterion << "\n\n";
    out << "Tests: " << report.tests_total << " (skipped: " << report.tests_skipped << ")\n\n";
    out << "| k | passing tests |\n|---|---|\n";
    for (const auto& [k, count] : report.pass_at_k)
        out << "| " << k << " | " << count << " |\n";
    out << "\n| LoC bucket | passed | total |\n|---|---|---|\n";
    for (const auto& [label, counts] : report.buckets)
        out << "| " << label << " | " << counts.first << " | " << counts.second << " |\n";
    out << "\n| test | attempt | status | iterations | tokens | bucket | qor |\n";
    out << "|---|---|---|---|---|---|---|\n";
    for (const AttemptResult& row : report.per_test) {
        out << "| " << row.test << " | " << row.attempt << " | " << row.status << " | "
            << row.iterations << " | " << row.tokens << " | " << row.bucket << " | "
            << (row.qor ? double_repr(*row.qor) : "-") << " |\n";
    }
    out << "\nTokens total: " << report.tokens_total << "\n";
    out << "Efficiency (failure rate x tokens): " << double_repr(report.efficiency) << "\n";
    return out.str();
}

}  // namespace

std::string render_report(const BenchReport& report, ReportFormat format) {
    switch (format) {
        case ReportFormat::json: return render_json(report);
        case ReportFormat::csv: return render_csv(report);
        case ReportFormat::markdown: return render_markdown(report);
    }
    return render_json(report);
}

}  // namespace hdlagent
