#include "loopscan/llm_client.hpp"

#include <chrono>
#include <ctime>
#include <fstream>
#include <thread>

#include <httplib.h>
#include <json.hpp>

namespace loopscan {

namespace {

using nlohmann::json;

constexpr int kBackoffBaseMs = 200;

// "http://host:1234/prefix" -> ("http://host:1234", "/prefix")
std::pair<std::string, std::string> split_base_url(const std::string& base_url) {
    std::string url = base_url;
    while (!url.empty() && url.back() == '/') url.pop_back();
    size_t scheme = url.find("://");
    size_t path_start = scheme == std::string::npos ? url.find('/') : url.find('/', scheme + 3);
    if (path_start == std::string::npos) return {url, ""};
    return {url.substr(0, path_start), url.substr(path_start)};
}

}  // namespace

std::string utc_timestamp_now() {
    auto now = std::chrono::system_clock::now();
    std::time_t t = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

HttpChatBackend::HttpChatBackend(ModelEndpoint endpoint) : endpoint_(std::move(endpoint)) {
    if (endpoint_.timeout_ms < 1000) {
        throw LlmClientError("timeout_ms must be at least 1000");
    }
}

std::string HttpChatBackend::send(const std::string& system_text, const std::string& user_text) {
    auto [host, prefix] = split_base_url(endpoint_.base_url);
    httplib::Client client(host);
    client.set_connection_timeout(endpoint_.timeout_ms / 1000, (endpoint_.timeout_ms % 1000) * 1000);
    client.set_read_timeout(endpoint_.timeout_ms / 1000, (endpoint_.timeout_ms % 1000) * 1000);

    json body;
    body["model"] = endpoint_.model_name;
    body["messages"] = json::array({
        json{{"role", "system"}, {"content", system_text}},
        json{{"role", "user"}, {"content", user_text}},
    });
    body["temperature"] = endpoint_.temperature;
    body["max_tokens"] = endpoint_.max_tokens;

    auto res = client.Post(prefix + "/v1/chat/completions", body.dump(), "application/json");
    if (!res) {
        throw LlmClientError("connection to " + endpoint_.base_url +
                                 " failed: " + httplib::to_string(res.error()),
                             /*is_transient=*/true);
    }
    if (res->status != 200) {
        std::string excerpt = res->body.substr(0, 200);
        throw LlmClientError("HTTP " + std::to_string(res->status) + " from " +
                                 endpoint_.base_url + ": " + excerpt,
                             /*is_transient=*/res->status >= 500);
    }
    json reply;
    try {
        reply = json::parse(res->body);
    } catch (const json::exception& e) {
        throw LlmClientError("response body is not JSON: " + std::string(e.what()));
    }
    if (!reply.contains("choices") || !reply["choices"].is_array() || reply["choices"].empty() ||
        !reply["choices"][0].contains("message") ||
        !reply["choices"][0]["message"].contains("content") ||
        !reply["choices"][0]["message"]["content"].is_string()) {
        throw LlmClientError("response lacks choices[0].message.content");
    }
    return reply["choices"][0]["message"]["content"].get<std::string>();
}

void ScriptedChatBackend::enqueue_response(std::string text) {
    queue_.push_back({false, std::move(text)});
}

void ScriptedChatBackend::enqueue_transient_failure(std::string message) {
    queue_.push_back({true, std::move(message)});
}

std::string ScriptedChatBackend::send(const std::string& system_text, const std::string& user_text) {
    ++calls_seen_;
    if (!queue_.empty()) {
        Scripted next = std::move(queue_.front());
        queue_.pop_front();
        if (next.is_failure) throw LlmClientError(next.payload, /*is_transient=*/true);
        return next.payload;
    }
    if (responder_) return responder_(system_text, user_text);
    throw LlmClientError("scripted backend has no response queued");
}

ReplayChatBackend::ReplayChatBackend(const std::filesystem::path& run_log) {
    for (const ChatExchange& exchange : load_run(run_log)) {
        responses_[{exchange.system_text, exchange.user_text}].push_back(exchange.raw_response);
    }
}

std::string ReplayChatBackend::send(const std::string& system_text, const std::string& user_text) {
    auto it = responses_.find({system_text, user_text});
    if (it == responses_.end() || it->second.empty()) {
        throw ReplayMissError(
            "no recorded response for this prompt pair; the corpus or prompts drifted since the "
            "run was recorded");
    }
    std::string raw = std::move(it->second.front());
    it->second.pop_front();
    return raw;
}

ChatClient::ChatClient(ModelEndpoint endpoint, std::shared_ptr<ChatBackend> backend)
    : endpoint_(std::move(endpoint)), backend_(std::move(backend)) {}

ChatExchange ChatClient::complete(const std::string& system_text, const std::string& user_text) {
    std::lock_guard<std::mutex> guard(in_flight_);
    int attempts = endpoint_.retries + 1;
    for (int attempt = 0; attempt < attempts; ++attempt) {
        auto started = std::chrono::steady_clock::now();
        try {
            std::string raw = backend_->send(system_text, user_text);
            auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
                               std::chrono::steady_clock::now() - started)
                               .count();
            ChatExchange exchange;
            exchange.system_text = system_text;
            exchange.user_text = user_text;
            exchange.raw_response = std::move(raw);
            exchange.latency_ms = elapsed;
            exchange.model_name = endpoint_.model_name;
            exchange.timestamp = utc_timestamp_now();
            return exchange;
        } catch (const LlmClientError& e) {
            bool last = attempt + 1 >= attempts;
            if (!e.transient || last) throw;
            std::this_thread::sleep_for(std::chrono::milliseconds(kBackoffBaseMs << attempt));
        }
    }
    throw LlmClientError("retries exhausted");  // unreachable
}

void record_run(const std::vector<ChatExchange>& exchanges, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::app);
    if (!out) throw LlmClientError("cannot open run log for append: " + path.string());
    for (const ChatExchange& exchange : exchanges) {
        json line;
        line["system_text"] = exchange.system_text;
        line["user_text"] = exchange.user_text;
        line["raw_response"] = exchange.raw_response;
        line["latency_ms"] = exchange.latency_ms;
        line["model_name"] = exchange.model_name;
        line["timestamp"] = exchange.timestamp;
        out << line.dump() << "\n";
    }
}

std::vector<ChatExchange> load_run(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw LlmClientError("run log not found: " + path.string());
    std::vector<ChatExchange> exchanges;
    std::string line;
    size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        json parsed;
        try {
            parsed = json::parse(line);
        } catch (const json::exception& e) {
            throw LlmClientError("run log line " + std::to_string(line_no) +
                                 " is not valid JSON: " + e.what());
        }
        ChatExchange exchange;
        exchange.system_text = parsed.value("system_text", "");
        exchange.user_text = parsed.value("user_text", "");
        exchange.raw_response = parsed.value("raw_response", "");
        exchange.latency_ms = parsed.value("latency_ms", 0);
        exchange.model_name = parsed.value("model_name", "");
        exchange.timestamp = parsed.value("timestamp", "");
        exchanges.push_back(std::move(exchange));
    }
    return exchanges;
}

}  // namespace loopscan
