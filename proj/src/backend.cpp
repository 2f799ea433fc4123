#include "hdlagent/backend.hpp"

#include "hdlagent/util.hpp"

#include <nlohmann/json.hpp>

#include <fstream>

namespace hdlagent {

using nlohmann::json;

long estimate_tokens(std::size_t characters) {
    return static_cast<long>(ceil_div(characters, 4));
}

std::string request_digest(const ChatRequest& request) {
    // Canonical JSON with sorted keys so digests are stable across writers.
    json j;
    j["model"] = request.model;
    j["system"] = request.system_text ? json(*request.system_text) : json(nullptr);
    j["temperature"] = request.temperature;
    j["user"] = request.user_text;
    return sha256_hex(j.dump());
}

CompletionResult LlmBackend::complete(const ChatRequest& request) {
    if (request.user_text.empty())
        throw ValidationError("user_text", "must be non-empty");
    if (request.temperature < 0.0)
        throw ValidationError("temperature", "must be >= 0");
    if (request.max_output_tokens < 1)
        throw ValidationError("max_output_tokens", "must be >= 1");
    return do_complete(request);
}

ScriptedBackend::ScriptedBackend(std::vector<ScriptedResponse> script, bool loop)
    : script_(std::move(script)), loop_(loop) {}

int ScriptedBackend::calls_made() const {
    std::lock_guard<std::mutex> lock(mutex_);
    return static_cast<int>(next_);
}

CompletionResult ScriptedBackend::do_complete(const ChatRequest& request) {
    ScriptedResponse response;
    {
        std::lock_guard<std::mutex> lock(mutex_);
        if (script_.empty() || (!loop_ && next_ >= script_.size()))
            throw BackendError(BackendError::Kind::malformed_response,
                               "scripted backend ran out of responses after " +
                                   std::to_string(next_) + " calls");
        response = script_[loop_ ? next_ % script_.size() : next_];
        ++next_;
    }
    CompletionResult result;
    result.text = response.text;
    bool have_usage = response.prompt_tokens && response.completion_tokens;
    if (have_usage) {
        result.prompt_tokens = *response.prompt_tokens;
        result.completion_tokens = *response.completion_tokens;
        result.tokens_estimated = false;
    } else {
        std::size_t prompt_chars = request.user_text.size();
        if (request.system_text) prompt_chars += request.system_text->size();
        result.prompt_tokens = estimate_tokens(prompt_chars);
        result.completion_tokens = estimate_tokens(result.text.size());
        result.tokens_estimated = true;
    }
    return result;
}

CompletionResult EchoBackend::do_complete(const ChatRequest& request) {
    CompletionResult result;
    result.text = request.user_text;
    std::size_t prompt_chars = request.user_text.size();
    if (request.system_text) prompt_chars += request.system_text->size();
    result.prompt_tokens = estimate_tokens(prompt_chars);
    result.completion_tokens = estimate_tokens(result.text.size());
    result.tokens_estimated = true;
    return result;
}

ReplayBackend::ReplayBackend(const std::filesystem::path& cassette) {
    std::ifstream in(cassette);
    if (!in) throw IoError("cannot open cassette: " + cassette.string());
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        json j;
        try {
            j = json::parse(line);
        } catch (const json::parse_error& e) {
            throw ParseError(cassette.string() + ":" + std::to_string(line_no) + ": " + e.what());
        }
        if (!j.contains("digest") || !j["digest"].is_string())
            throw ParseError(cassette.string() + ":" + std::to_string(line_no) +
                             ": missing digest");
        CompletionResult result;
        result.text = j.value("text", std::string());
        result.prompt_tokens = j.value("prompt_tokens", 0L);
        result.completion_tokens = j.value("completion_tokens", 0L);
        result.tokens_estimated = false;
        // Later lines win so a re-recorded cassette overrides stale entries.
        entries_[j["digest"].get<std::string>()] = std::move(result);
    }
}

CompletionResult ReplayBackend::do_complete(const ChatRequest& request) {
    auto it = entries_.find(request_digest(request));
    if (it == entries_.end())
        throw BackendError(BackendError::Kind::malformed_response,
                           "no cassette entry for request digest " + request_digest(request));
    return it->second;
}

void record_interaction(const std::filesystem::path& cassette, const ChatRequest& request,
                        const CompletionResult& result) {
    json j;
    j["digest"] = request_digest(request);
    j["model"] = request.model;
    j["request_user_sha"] = sha256_hex(request.user_text);
    j["text"] = result.text;
    j["prompt_tokens"] = result.prompt_tokens;
    j["completion_tokens"] = result.completion_tokens;
    append_line_locked(cassette, j.dump());
}

RecordingBackend::RecordingBackend(std::shared_ptr<LlmBackend> inner,
                                   std::filesystem::path cassette)
    : inner_(std::move(inner)), cassette_(std::move(cassette)) {
    if (!inner_) throw ValidationError("inner", "recording backend needs an inner backend");
}

std::string RecordingBackend::kind() const { return inner_->kind(); }

CompletionResult RecordingBackend::do_complete(const ChatRequest& request) {
    CompletionResult result = inner_->complete(request);
    record_interaction(cassette_, request, result);
    return result;
}

void TokenLedger::add(std::string purpose, long prompt_tokens, long completion_tokens) {
    entries_.push_back({std::move(purpose), prompt_tokens, completion_tokens});
}

long TokenLedger::total_prompt_tokens() const {
    long total = 0;
    for (const auto& e : entries_) total += e.prompt_tokens;
    return total;
}

long TokenLedger::total_completion_tokens() const {
    long total = 0;
    for (const auto& e : entries_) total += e.completion_tokens;
    return total;
}

}  // namespace hdlagent
