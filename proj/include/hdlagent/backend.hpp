#pragma once
// Stateless chat-completion backends: HTTP (OpenAI-compatible wire shape),
// cassette replay, and scripted/echo mocks for offline tests. Every call
// carries its complete context; no backend keeps chat history.

#include "hdlagent/errors.hpp"

#include <chrono>
#include <filesystem>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace hdlagent {

struct ChatRequest {
    std::optional<std::string> system_text;
    std::string user_text;
    std::string model;
    double temperature = 0.7;
    int max_output_tokens = 4096;
};

struct CompletionResult {
    std::string text;
    long prompt_tokens = 0;
    long completion_tokens = 0;
    bool tokens_estimated = false;  // true iff the provider reported no usage

    bool operator==(const CompletionResult&) const = default;
};

// ceil(chars / 4), the approximation used whenever a provider omits usage.
long estimate_tokens(std::size_t characters);

// Key for cassette lookup: digest of (model, system_text, user_text, temperature).
std::string request_digest(const ChatRequest& request);

class LlmBackend {
public:
    virtual ~LlmBackend() = default;

    // Validates the request invariants, then dispatches.
    CompletionResult complete(const ChatRequest& request);

    virtual std::string kind() const = 0;

protected:
    virtual CompletionResult do_complete(const ChatRequest& request) = 0;
};

struct ScriptedResponse {
    std::string text;
    std::optional<long> prompt_tokens;
    std::optional<long> completion_tokens;
};

// Returns scripted responses in call order. With `loop` the script wraps
// around instead of running dry.
class ScriptedBackend : public LlmBackend {
public:
    explicit ScriptedBackend(std::vector<ScriptedResponse> script, bool loop = false);

    std::string kind() const override { return "mock"; }
    int calls_made() const;

protected:
    CompletionResult do_complete(const ChatRequest& request) override;

private:
    std::vector<ScriptedResponse> script_;
    bool loop_;
    mutable std::mutex mutex_;
    std::size_t next_ = 0;
};

// Returns the request's user text as the completion. Handy for verifying
// rendered prompts end to end.
class EchoBackend : public LlmBackend {
public:
    std::string kind() const override { return "mock"; }

protected:
    CompletionResult do_complete(const ChatRequest& request) override;
};

// Serves recorded interactions from a cassette; a request whose digest is
// absent is an error, so offline runs can never silently hit the network.
class ReplayBackend : public LlmBackend {
public:
    explicit ReplayBackend(const std::filesystem::path& cassette);

    std::string kind() const override { return "replay"; }
    std::size_t size() const { return entries_.size(); }

protected:
    CompletionResult do_complete(const ChatRequest& request) override;

private:
    std::unordered_map<std::string, CompletionResult> entries_;
};

// "https://host:1234/v1/chat/completions" -> {"https://host:1234", "/v1/chat/completions"}.
// A URL without a path defaults to the OpenAI-compatible chat route.
struct EndpointParts {
    std::string base;
    std::string path;
};
EndpointParts parse_endpoint(const std::string& url);

struct HttpBackendConfig {
    std::string endpoint;   // full URL of the chat-completions route
    std::string api_key;    // sent as a bearer token when non-empty
    int max_retries = 3;    // extra attempts after the first, on transient errors
    std::vector<std::chrono::milliseconds> backoff = {
        std::chrono::milliseconds(1000),
        std::chrono::milliseconds(2000),
        std::chrono::milliseconds(4000),
    };
    std::function<void(std::chrono::milliseconds)> sleep_fn;  // test hook; default sleeps
};

class HttpBackend : public LlmBackend {
public:
    explicit HttpBackend(HttpBackendConfig config);

    std::string kind() const override { return "http"; }

protected:
    CompletionResult do_complete(const ChatRequest& request) override;

private:
    CompletionResult attempt_once(const ChatRequest& request);
    HttpBackendConfig config_;
};

// Appends one cassette line for the interaction. Safe across processes and
// worker threads (flock-guarded append).
void record_interaction(const std::filesystem::path& cassette, const ChatRequest& request,
                        const CompletionResult& result);

// Delegates to an inner backend and records every interaction.
class RecordingBackend : public LlmBackend {
public:
    RecordingBackend(std::shared_ptr<LlmBackend> inner, std::filesystem::path cassette);

    std::string kind() const override;

protected:
    CompletionResult do_complete(const ChatRequest& request) override;

private:
    std::shared_ptr<LlmBackend> inner_;
    std::filesystem::path cassette_;
};

// Append-only per-run token accounting.
struct LedgerEntry {
    std::string purpose;  // "initial" or "repair" (or "summarize")
    long prompt_tokens = 0;
    long completion_tokens = 0;
};

class TokenLedger {
public:
    void add(std::string purpose, long prompt_tokens, long completion_tokens);
    const std::vector<LedgerEntry>& per_call() const { return entries_; }
    long total_prompt_tokens() const;
    long total_completion_tokens() const;
    long total_tokens() const { return total_prompt_tokens() + total_completion_tokens(); }

private:
    std::vector<LedgerEntry> entries_;
};

}  // namespace hdlagent
