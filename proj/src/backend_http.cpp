// The only translation unit that includes httplib (and thus OpenSSL headers).
#include "hdlagent/backend.hpp"

#include "hdlagent/util.hpp"

#include <httplib.h>
#include <nlohmann/json.hpp>

#include <thread>

namespace hdlagent {

using nlohmann::json;

EndpointParts parse_endpoint(const std::string& url) {
    auto scheme_end = url.find("://");
    if (scheme_end == std::string::npos)
        throw ValidationError("endpoint", "expected scheme://host[:port][/path], got '" + url + "'");
    std::string scheme = url.substr(0, scheme_end);
    if (scheme != "http" && scheme != "https")
        throw ValidationError("endpoint", "unsupported scheme '" + scheme + "'");
    auto path_start = url.find('/', scheme_end + 3);
    EndpointParts parts;
    if (path_start == std::string::npos) {
        parts.base = url;
        parts.path = "/v1/chat/completions";
    } else {
        parts.base = url.substr(0, path_start);
        parts.path = url.substr(path_start);
    }
    if (parts.base.size() == scheme_end + 3)
        throw ValidationError("endpoint", "missing host in '" + url + "'");
    return parts;
}

namespace {

// Retryable failure; anything else escapes as BackendError straight away.
struct Transient {
    BackendError::Kind kind;
    std::string message;
};

}  // namespace

HttpBackend::HttpBackend(HttpBackendConfig config) : config_(std::move(config)) {
    parse_endpoint(config_.endpoint);  // fail fast on a bad URL
    if (config_.max_retries < 0)
        throw ValidationError("max_retries", "must be >= 0");
}

CompletionResult HttpBackend::attempt_once(const ChatRequest& request) {
    if (request.model.empty())
        throw ValidationError("model", "the HTTP backend needs a model name");
    EndpointParts parts = parse_endpoint(config_.endpoint);
    httplib::Client client(parts.base);
    client.set_connection_timeout(30, 0);
    client.set_read_timeout(300, 0);
    httplib::Headers headers;
    if (!config_.api_key.empty())
        headers.emplace("Authorization", "Bearer " + config_.api_key);

    json body;
    body["model"] = request.model;
    json messages = json::array();
    if (request.system_text)
        messages.push_back({{"role", "system"}, {"content", *request.system_text}});
    messages.push_back({{"role", "user"}, {"content", request.user_text}});
    body["messages"] = std::move(messages);
    body["temperature"] = request.temperature;
    body["max_tokens"] = request.max_output_tokens;

    auto res = client.Post(parts.path, headers, body.dump(), "application/json");
    if (!res)
        throw Transient{BackendError::Kind::network,
                        "request to " + config_.endpoint + " failed: " + to_string(res.error())};
    if (res->status == 429)
        throw Transient{BackendError::Kind::rate_limited,
                        "rate limited by " + parts.base + " (429)"};
    if (res->status >= 500)
        throw Transient{BackendError::Kind::http_status,
                        "server error " + std::to_string(res->status) + " from " + parts.base};
    if (res->status != 200)
        throw BackendError(BackendError::Kind::http_status,
                           "HTTP " + std::to_string(res->status) + " from " + parts.base + ": " +
                               res->body.substr(0, 512));

    json reply;
    try {
        reply = json::parse(res->body);
    } catch (const json::parse_error& e) {
        throw BackendError(BackendError::Kind::malformed_response,
                           std::string("response is not JSON: ") + e.what());
    }
    if (!reply.contains("choices") || !reply["choices"].is_array() || reply["choices"].empty())
        throw BackendError(BackendError::Kind::malformed_response, "response has no choices");
    const json& first = reply["choices"][0];
    if (!first.contains("message") || !first["message"].contains("content") ||
        !first["message"]["content"].is_string())
        throw BackendError(BackendError::Kind::malformed_response,
                           "choices[0].message.content missing or not a string");

    CompletionResult result;
    result.text = first["message"]["content"].get<std::string>();
    bool have_usage = reply.contains("usage") && reply["usage"].is_object() &&
                      reply["usage"].value("prompt_tokens", -1) >= 0 &&
                      reply["usage"].value("completion_tokens", -1) >= 0;
    if (have_usage) {
        result.prompt_tokens = reply["usage"]["prompt_tokens"].get<long>();
        result.completion_tokens = reply["usage"]["completion_tokens"].get<long>();
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

CompletionResult HttpBackend::do_complete(const ChatRequest& request) {
    int attempts = config_.max_retries + 1;
    for (int i = 0; i < attempts; ++i) {
        try {
            return attempt_once(request);
        } catch (const Transient& t) {
            if (i + 1 >= attempts)
                throw BackendError(t.kind, t.message + " (after " + std::to_string(attempts) +
                                               " attempts)");
            std::chrono::milliseconds delay =
                config_.backoff.empty()
                    ? std::chrono::milliseconds(1000)
                    : config_.backoff[std::min<std::size_t>(i, config_.backoff.size() - 1)];
            if (config_.sleep_fn)
                config_.sleep_fn(delay);
            else
                std::this_thread::sleep_for(delay);
        }
    }
    throw BackendError(BackendError::Kind::network, "unreachable retry state");
}

}  // namespace hdlagent
