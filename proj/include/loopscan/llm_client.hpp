#pragma once

#include <cstdint>
#include <deque>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <string>
#include <vector>

namespace loopscan {

struct ModelEndpoint {
    std::string base_url = "http://127.0.0.1:8080";
    std::string model_name = "llama3.2-3b";
    double temperature = 0.0;
    int max_tokens = 1024;
    int timeout_ms = 30000;  // >= 1000
    int retries = 2;
};

struct ChatExchange {
    std::string system_text;
    std::string user_text;
    std::string raw_response;  // byte-exact completion text
    std::int64_t latency_ms = 0;
    std::string model_name;
    std::string timestamp;  // UTC, ISO 8601
};

struct LlmClientError : std::runtime_error {
    bool transient;
    explicit LlmClientError(const std::string& msg, bool is_transient = false)
        : std::runtime_error(msg), transient(is_transient) {}
};

struct ReplayMissError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

class ChatBackend {
public:
    virtual ~ChatBackend() = default;
    // Returns the raw completion text. Throws LlmClientError on failure.
    virtual std::string send(const std::string& system_text, const std::string& user_text) = 0;
};

// Talks to a local chat-completions server:
// POST <base_url>/v1/chat/completions with a system+user message pair.
class HttpChatBackend : public ChatBackend {
public:
    explicit HttpChatBackend(ModelEndpoint endpoint);
    std::string send(const std::string& system_text, const std::string& user_text) override;

private:
    ModelEndpoint endpoint_;
};

// Scripted backend for offline tests: either a queue of canned outcomes or a
// responder function over the prompt pair.
class ScriptedChatBackend : public ChatBackend {
public:
    ScriptedChatBackend() = default;
    explicit ScriptedChatBackend(
        std::function<std::string(const std::string&, const std::string&)> responder)
        : responder_(std::move(responder)) {}

    void enqueue_response(std::string text);
    void enqueue_transient_failure(std::string message);

    std::string send(const std::string& system_text, const std::string& user_text) override;

    int calls_seen() const { return calls_seen_; }

private:
    struct Scripted {
        bool is_failure = false;
        std::string payload;
    };
    std::function<std::string(const std::string&, const std::string&)> responder_;
    std::deque<Scripted> queue_;
    int calls_seen_ = 0;
};

// Answers by exact (system_text, user_text) match against a recorded run log;
// repeated identical prompts replay in recorded order.
class ReplayChatBackend : public ChatBackend {
public:
    explicit ReplayChatBackend(const std::filesystem::path& run_log);
    std::string send(const std::string& system_text, const std::string& user_text) override;

private:
    std::map<std::pair<std::string, std::string>, std::deque<std::string>> responses_;
};

// One completion stream per client; at most one request in flight.
class ChatClient {
public:
    ChatClient(ModelEndpoint endpoint, std::shared_ptr<ChatBackend> backend);

    // Issues one request, retrying transient failures with exponential backoff.
    ChatExchange complete(const std::string& system_text, const std::string& user_text);

    const ModelEndpoint& endpoint() const { return endpoint_; }

private:
    ModelEndpoint endpoint_;
    std::shared_ptr<ChatBackend> backend_;
    std::mutex in_flight_;
};

// Append-only JSONL run log, one exchange per line.
void record_run(const std::vector<ChatExchange>& exchanges, const std::filesystem::path& path);
std::vector<ChatExchange> load_run(const std::filesystem::path& path);

std::string utc_timestamp_now();

}  // namespace loopscan
