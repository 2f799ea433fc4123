#include "hdlagent/cli.hpp"

#include "hdlagent/agent.hpp"
#include "hdlagent/bench.hpp"
#include "hdlagent/context.hpp"
#include "hdlagent/errors.hpp"
#include "hdlagent/util.hpp"
#include "hdlagent/verilog_io.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <ostream>

namespace fs = std::filesystem;
using nlohmann::json;

namespace hdlagent {

namespace {

std::atomic<bool> g_cancel{false};

std::vector<ScriptedResponse> load_mock_script(const fs::path& path) {
  json doc;
  try {
    doc = json::parse(read_file(path));
  } catch (const json::parse_error& e) {
    throw ValidationError("mock-script", std::string("malformed script JSON: ") + e.what());
  }
  std::vector<ScriptedResponse> script;
  auto push = [&](const json& item) {
    ScriptedResponse r;
    if (item.is_string()) {
      r.text = item.get<std::string>();
    } else if (item.is_object() && item.contains("text") && item["text"].is_string()) {
      r.text = item["text"].get<std::string>();
      if (item.contains("prompt_tokens") && item["prompt_tokens"].is_number_integer())
        r.prompt_tokens = item["prompt_tokens"].get<long>();
      if (item.contains("completion_tokens") && item["completion_tokens"].is_number_integer())
        r.completion_tokens = item["completion_tokens"].get<long>();
    } else {
      throw ValidationError("mock-script",
                            "each scripted response must be a string or an object with a "
                            "\"text\" field");
    }
    script.push_back(std::move(r));
  };
  if (doc.is_array()) {
    for (const auto& item : doc) push(item);
  } else {
    push(doc);
  }
  if (script.empty()) throw ValidationError("mock-script", "script holds no responses");
  return script;
}

RequestParams params_from(const CliConfig& cfg) {
  RequestParams params;
  params.model = cfg.model;
  params.temperature = cfg.temperature;
  params.max_output_tokens = cfg.max_output_tokens;
  return params;
}

int config_error(std::ostream& err, const std::string& message) {
  err << "error: " << message << "\n";
  return 2;
}

}  // namespace

std::atomic<bool>& cancel_flag() { return g_cancel; }

std::shared_ptr<LlmBackend> make_backend(const CliConfig& cfg) {
  std::shared_ptr<LlmBackend> backend;
  if (cfg.backend_kind == "mock") {
    if (cfg.mock_script.empty())
      backend = std::make_shared<EchoBackend>();
    else
      backend = std::make_shared<ScriptedBackend>(load_mock_script(cfg.mock_script));
  } else if (cfg.backend_kind == "replay") {
    if (cfg.cassette.empty())
      throw ValidationError("cassette", "--backend replay requires --cassette");
    backend = std::make_shared<ReplayBackend>(cfg.cassette);
  } else if (cfg.backend_kind == "http") {
    if (cfg.endpoint.empty()) throw ValidationError("endpoint", "--backend http requires --endpoint");
    if (cfg.model.empty()) throw ValidationError("model", "--backend http requires --model");
    HttpBackendConfig hc;
    hc.endpoint = cfg.endpoint;
    if (const char* key = std::getenv("HDLAGENT_API_KEY")) hc.api_key = key;
    backend = std::make_shared<HttpBackend>(hc);
  } else {
    throw ValidationError("backend", "unknown backend kind: " + cfg.backend_kind +
                                         " (expected http, replay, or mock)");
  }
  if (!cfg.record_path.empty()) backend = std::make_shared<RecordingBackend>(backend, cfg.record_path);
  return backend;
}

HdlProfile resolve_profile(const std::string& name_or_path) {
  if (is_bundled_profile(name_or_path)) return load_bundled_profile(name_or_path);
  return load_profile(name_or_path);
}

std::vector<int> parse_k_spec(const std::string& spec) {
  std::vector<int> ks;
  std::string token;
  auto flush = [&]() {
    std::string t = trim(token);
    token.clear();
    if (t.empty()) throw ValidationError("k", "empty entry in k list: " + spec);
    std::size_t used = 0;
    int value = 0;
    try {
      value = std::stoi(t, &used);
    } catch (const std::exception&) {
      throw ValidationError("k", "not an integer: " + t);
    }
    if (used != t.size()) throw ValidationError("k", "not an integer: " + t);
    if (value < 1) throw ValidationError("k", "k must be >= 1, got " + t);
    ks.push_back(value);
  };
  for (char c : spec) {
    if (c == ',')
      flush();
    else
      token.push_back(c);
  }
  flush();
  return ks;
}

int cmd_gen(const std::string& question, const CliConfig& cfg, std::ostream& out,
            std::ostream& err) {
  AgentRunRecord record;
  try {
    HdlProfile profile = resolve_profile(cfg.profile);
    AblationStage stage = stage_from_string(cfg.stage);
    auto backend = make_backend(cfg);
    AgentOptions options;
    options.max_iterations = cfg.max_iterations;
    options.params = params_from(cfg);
    record = run_agent(question, profile, *backend, stage, options);
  } catch (const EmptyQuestion& e) {
    return config_error(err, e.what());
  } catch (const ValidationError& e) {
    return config_error(err, e.what());
  } catch (const ParseError& e) {
    return config_error(err, e.what());
  } catch (const IoError& e) {
    return config_error(err, e.what());
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }

  if (!cfg.outdir.empty()) {
    try {
      persist_run(record, cfg.outdir, "gen", 1);
      err << "run record: " << (fs::path(cfg.outdir) / "runs" / "gen" / "1.json").string() << "\n";
    } catch (const Error& e) {
      err << "warning: could not persist run record: " << e.what() << "\n";
    }
  }
  err << "status: " << final_status_to_string(record.final_status) << " after "
      << record.iterations.size()
      << " iteration(s), " << record.ledger.total_tokens() << " tokens\n";

  if (record.final_status == FinalStatus::passed_compile && record.final_code) {
    out << *record.final_code << "\n";
    return 0;
  }
  for (auto it = record.iterations.rbegin(); it != record.iterations.rend(); ++it) {
    if (it->outcome) {
      err << "last diagnostic:\n" << it->outcome->diagnostic << "\n";
      break;
    }
  }
  return 1;
}

int cmd_bench(const std::string& suite_dir, const CliConfig& cfg, std::ostream& out,
              std::ostream& err) {
  BenchReport report;
  std::string outdir = cfg.outdir.empty() ? std::string("hdlagent_out") : cfg.outdir;
  try {
    HdlProfile profile = resolve_profile(cfg.profile);
    AblationStage stage = stage_from_string(cfg.stage);
    auto backend = make_backend(cfg);
    std::vector<BenchTest> suite = load_suite(suite_dir);

    BenchConfig bc;
    bc.stage = stage;
    bc.ks = cfg.ks;
    bc.parallelism = cfg.parallelism;
    bc.max_iterations = cfg.max_iterations;
    bc.params = params_from(cfg);
    bc.outdir = outdir;
    bc.lec_command = cfg.lec_command;
    bc.synth_command = cfg.synth_command;
    bc.suite_dir = suite_dir;
    bc.cancel = &cancel_flag();
    report = run_bench(suite, profile, *backend, bc);
  } catch (const MalformedTest& e) {
    return config_error(err, e.what());
  } catch (const ValidationError& e) {
    return config_error(err, e.what());
  } catch (const ParseError& e) {
    return config_error(err, e.what());
  } catch (const IoError& e) {
    return config_error(err, e.what());
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }

  try {
    fs::create_directories(outdir);
    write_file(fs::path(outdir) / "report.json", render_report(report, ReportFormat::json));
    write_file(fs::path(outdir) / "report.csv", render_report(report, ReportFormat::csv));
    write_file(fs::path(outdir) / "report.md", render_report(report, ReportFormat::markdown));
  } catch (const Error& e) {
    err << "error: could not write reports: " << e.what() << "\n";
    return 1;
  }
  out << render_report(report, ReportFormat::markdown);
  err << "reports written to " << outdir << "\n";
  if (cancel_flag().load()) {
    err << "interrupted: partial report flushed\n";
    return 130;
  }
  return 0;
}

int cmd_profiles(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  if (args.empty())
    return config_error(err, "profiles needs an action: list | validate [path] | show NAME");
  const std::string& action = args[0];

  if (action == "list") {
    if (args.size() != 1) return config_error(err, "profiles list takes no further arguments");
    for (const auto& name : bundled_profile_names()) out << name << "\n";
    return 0;
  }

  if (action == "validate") {
    if (args.size() > 2)
      return config_error(err, "profiles validate takes at most one path");
    if (args.size() == 2) {
      try {
        HdlProfile profile = load_profile(args[1]);
        out << profile.name << ": ok\n";
        return 0;
      } catch (const IoError& e) {
        return config_error(err, e.what());
      } catch (const Error& e) {
        err << "invalid profile: " << e.what() << "\n";
        return 1;
      }
    }
    for (const auto& name : bundled_profile_names()) {
      load_bundled_profile(name);
      out << name << ": ok\n";
    }
    return 0;
  }

  if (action == "show") {
    if (args.size() != 2) return config_error(err, "profiles show needs a bundled profile name");
    try {
      out << json::parse(bundled_profile_json(args[1])).dump(2) << "\n";
      return 0;
    } catch (const Error& e) {
      return config_error(err, e.what());
    }
  }

  return config_error(err, "unknown profiles action: " + action);
}

int cmd_normalize(const std::string& file, const std::string& convention,
                  const std::string& golden_file, std::ostream& out, std::ostream& err) {
  std::string text;
  std::string golden_text;
  IoConvention conv;
  ModuleInterface golden;
  try {
    text = read_file(file);
    golden_text = read_file(golden_file);
    conv = io_convention_from_string(convention);
  } catch (const Error& e) {
    return config_error(err, e.what());
  }
  try {
    golden = parse_interface(golden_text);
  } catch (const Error& e) {
    return config_error(err, std::string("golden: ") + e.what());
  }
  try {
    out << normalize(text, conv, golden);
    return 0;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

int cmd_summarize(const std::string& manual_file, const std::string& hdl,
                  const std::string& style_name, const CliConfig& cfg, std::ostream& out,
                  std::ostream& err) {
  std::string manual;
  SummaryStyle style;
  std::shared_ptr<LlmBackend> backend;
  try {
    manual = read_file(manual_file);
    if (style_name == "default" || style_name == "standard")
      style = SummaryStyle::standard;
    else if (style_name == "concise")
      style = SummaryStyle::concise;
    else
      throw ValidationError("style", "unknown style: " + style_name + " (expected default or concise)");
    backend = make_backend(cfg);
  } catch (const Error& e) {
    return config_error(err, e.what());
  }
  try {
    out << summarize_reference(manual, hdl, style, *backend, params_from(cfg)) << "\n";
    return 0;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

int run_cli(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Grounded LLM code generation for low-resource HDLs"};
  app.name("hdlagent");
  app.set_version_flag("--version", "hdlagent 0.1.0");
  app.require_subcommand(1);
  CliConfig cfg;

  auto add_backend_flags = [&cfg](CLI::App* sub) {
    sub->add_option("--profile", cfg.profile, "Bundled profile name or path to a profile JSON")
        ->capture_default_str();
    sub->add_option("--backend", cfg.backend_kind, "Backend kind")
        ->check(CLI::IsMember({"http", "replay", "mock"}))
        ->capture_default_str();
    sub->add_option("--endpoint", cfg.endpoint, "Chat-completions endpoint URL (http backend)");
    sub->add_option("--model", cfg.model, "Model name sent with every request");
    sub->add_option("--temperature", cfg.temperature, "Sampling temperature")
        ->capture_default_str();
    sub->add_option("--max-output-tokens", cfg.max_output_tokens, "Completion token cap")
        ->capture_default_str();
    sub->add_option("--cassette", cfg.cassette, "Cassette file for --backend replay");
    sub->add_option("--record", cfg.record_path, "Append every interaction to this cassette");
    sub->add_option("--mock-script", cfg.mock_script,
                    "JSON scripted responses for --backend mock (array of strings or "
                    "{text, prompt_tokens, completion_tokens} objects)");
  };
  auto add_run_flags = [&cfg](CLI::App* sub) {
    sub->add_option("--max-iterations", cfg.max_iterations, "Backend-call budget per attempt")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    sub->add_option("--stage", cfg.stage, "Ablation stage: base|description|fewshot|compile|fixes")
        ->capture_default_str();
    sub->add_option("--outdir", cfg.outdir, "Directory for run records and reports")
        ->capture_default_str();
  };

  std::string question;
  std::string question_file;
  CLI::App* gen = app.add_subcommand("gen", "Generate code for one problem and print it");
  gen->add_option("question", question, "Problem statement (inline text)");
  gen->add_option("--question-file", question_file, "Read the problem statement from a file");
  add_backend_flags(gen);
  add_run_flags(gen);

  std::string suite_dir;
  std::string k_spec = "1";
  CLI::App* bench = app.add_subcommand("bench", "Run a benchmark suite and write reports");
  bench->add_option("suite", suite_dir, "Suite directory (one subdirectory per test)")->required();
  bench->add_option("--k", k_spec, "Comma-separated attempt counts, e.g. 1,5,10")
      ->capture_default_str();
  bench->add_option("--parallelism", cfg.parallelism, "Worker threads")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  bench->add_option("--lec-command", cfg.lec_command,
                    "Equivalence-check command template with {golden} and {candidate}");
  bench->add_option("--synth-command", cfg.synth_command,
                    "Synthesis command template with {file}; its output carries a gate count");
  add_backend_flags(bench);
  add_run_flags(bench);

  std::vector<std::string> profile_args;
  CLI::App* profiles = app.add_subcommand("profiles", "List, validate, or show HDL profiles");
  profiles->add_option("action", profile_args, "list | validate [path] | show NAME");

  std::string norm_file;
  std::string norm_convention = "verilog_native";
  std::string norm_golden;
  CLI::App* normalize_cmd =
      app.add_subcommand("normalize", "Rewrite a Verilog interface to match a golden design");
  normalize_cmd->add_option("file", norm_file, "Verilog file to normalize")->required();
  normalize_cmd
      ->add_option("--convention", norm_convention,
                   "verilog_native | chisel_io_prefixed | dslx_single_out | pyrtl_named")
      ->capture_default_str();
  normalize_cmd->add_option("--golden", norm_golden, "Golden Verilog file with the target interface")
      ->required();

  std::string manual_file;
  std::string hdl_name;
  std::string style = "default";
  CLI::App* summarize_cmd =
      app.add_subcommand("summarize", "Condense an HDL reference manual through the backend");
  summarize_cmd->add_option("manual", manual_file, "Reference manual text file")->required();
  summarize_cmd->add_option("--hdl", hdl_name, "HDL name used in the prompt")->required();
  summarize_cmd->add_option("--style", style, "default | concise")->capture_default_str();
  add_backend_flags(summarize_cmd);

  try {
    std::reverse(args.begin(), args.end());  // CLI11's vector overload wants reversed argv
    app.parse(args);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return 2;
  }

  if (gen->parsed()) {
    if (!question_file.empty()) {
      try {
        question = read_file(question_file);
      } catch (const Error& e) {
        return config_error(err, e.what());
      }
    }
    if (trim(question).empty())
      return config_error(err, "gen needs a question (positional text or --question-file)");
    return cmd_gen(question, cfg, out, err);
  }
  if (bench->parsed()) {
    try {
      cfg.ks = parse_k_spec(k_spec);
    } catch (const Error& e) {
      return config_error(err, e.what());
    }
    return cmd_bench(suite_dir, cfg, out, err);
  }
  if (profiles->parsed()) return cmd_profiles(profile_args, out, err);
  if (normalize_cmd->parsed()) return cmd_normalize(norm_file, norm_convention, norm_golden, out, err);
  if (summarize_cmd->parsed())
    return cmd_summarize(manual_file, hdl_name, style, cfg, out, err);

  return config_error(err, "no command given");
}

}  // namespace hdlagent
