#include "bora/llm/chat_client.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <thread>

#define CPPHTTPLIB_OPENSSL_SUPPORT
#include <httplib.h>
#include <json.hpp>

namespace bora::llm {

namespace fs = std::filesystem;
using nlohmann::json;
using nlohmann::ordered_json;

// ---------------------------------------------------------------------------
// HttpChatClient

HttpChatClient::HttpChatClient(HttpClientConfig config) : config_(std::move(config)) {
    if (config_.api_key.empty())
        throw TransportError("http chat client: API key is empty");
}

ChatResponse HttpChatClient::send(std::span<const ChatMessage> messages, double temperature,
                                  int max_tokens) {
    ordered_json body;
    body["model"] = config_.model;
    body["messages"] = ordered_json::array();
    for (const auto& m : messages)
        body["messages"].push_back({{"role", m.role}, {"content", m.content}});
    body["temperature"] = temperature;
    body["max_tokens"] = max_tokens;
    const std::string payload = body.dump();

    std::string last_error;
    double backoff = config_.backoff_initial_seconds;
    for (int attempt = 0; attempt <= config_.transport_retries; ++attempt) {
        if (attempt > 0) {
            std::this_thread::sleep_for(std::chrono::duration<double>(backoff));
            backoff *= 2.0;
        }
        httplib::Client client(config_.base_url);
        client.set_connection_timeout(config_.timeout_seconds, 0);
        client.set_read_timeout(config_.timeout_seconds, 0);
        client.set_bearer_token_auth(config_.api_key);

        auto res = client.Post("/v1/chat/completions", payload, "application/json");
        if (!res) {
            last_error = "connection failure: " + httplib::to_string(res.error());
            continue;
        }
        if (res->status == 429 || res->status >= 500) {
            last_error = "status " + std::to_string(res->status);
            continue;
        }
        if (res->status != 200)
            throw TransportError("chat completion failed with status " +
                                 std::to_string(res->status) + ": " + res->body);
        try {
            json j = json::parse(res->body);
            ChatResponse out;
            out.content = j.at("choices").at(0).at("message").at("content").get<std::string>();
            if (j.contains("usage")) {
                out.usage.prompt_tokens = j["usage"].value("prompt_tokens", 0);
                out.usage.completion_tokens = j["usage"].value("completion_tokens", 0);
            }
            return out;
        } catch (const std::exception& e) {
            throw TransportError(std::string("malformed chat completion response: ") + e.what());
        }
    }
    throw TransportError("chat completion failed after " +
                         std::to_string(config_.transport_retries + 1) + " attempts: " +
                         last_error);
}

// ---------------------------------------------------------------------------
// Fixture files

namespace {
std::string fixture_name(int index) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "response_%05d.json", index);
    return buf;
}
}  // namespace

void write_fixture(const std::string& dir, int index, std::span<const ChatMessage> messages,
                   double temperature, int max_tokens, const ChatResponse& response) {
    ordered_json j;
    j["request"]["messages"] = ordered_json::array();
    for (const auto& m : messages)
        j["request"]["messages"].push_back({{"role", m.role}, {"content", m.content}});
    j["request"]["temperature"] = temperature;
    j["request"]["max_tokens"] = max_tokens;
    j["response"]["content"] = response.content;
    j["response"]["prompt_tokens"] = response.usage.prompt_tokens;
    j["response"]["completion_tokens"] = response.usage.completion_tokens;

    fs::create_directories(dir);
    const fs::path path = fs::path(dir) / fixture_name(index);
    std::ofstream out(path);
    if (!out) throw TransportError("cannot write fixture " + path.string());
    out << j.dump(2) << '\n';
}

void write_fixture_manifest(const std::string& dir, int count, bool complete) {
    fs::create_directories(dir);
    ordered_json j;
    j["count"] = count;
    j["complete"] = complete;
    std::ofstream out(fs::path(dir) / "manifest.json");
    out << j.dump(2) << '\n';
}

// ---------------------------------------------------------------------------
// ReplayChatClient

ReplayChatClient::ReplayChatClient(const std::string& fixture_dir) {
    if (!fs::is_directory(fixture_dir))
        throw TransportError("replay client: fixture directory not found: " + fixture_dir);
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(fixture_dir)) {
        const std::string name = entry.path().filename().string();
        if (name.rfind("response_", 0) == 0 && entry.path().extension() == ".json")
            files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
    for (const auto& path : files) {
        std::ifstream in(path);
        json j = json::parse(in);
        ChatResponse r;
        r.content = j.at("response").at("content").get<std::string>();
        r.usage.prompt_tokens = j["response"].value("prompt_tokens", 0);
        r.usage.completion_tokens = j["response"].value("completion_tokens", 0);
        responses_.push_back(std::move(r));
    }
    const fs::path manifest = fs::path(fixture_dir) / "manifest.json";
    if (fs::exists(manifest)) {
        std::ifstream in(manifest);
        json j = json::parse(in);
        complete_ = j.value("complete", true);
    }
}

ChatResponse ReplayChatClient::send(std::span<const ChatMessage>, double, int) {
    if (responses_.empty()) throw TransportError("replay client: fixtures exhausted");
    ChatResponse r = std::move(responses_.front());
    responses_.pop_front();
    return r;
}

// ---------------------------------------------------------------------------
// RecordingChatClient

RecordingChatClient::RecordingChatClient(std::unique_ptr<ChatClient> inner, std::string fixture_dir)
    : inner_(std::move(inner)), dir_(std::move(fixture_dir)) {
    fs::create_directories(dir_);
}

RecordingChatClient::~RecordingChatClient() {
    if (!finalized_) write_manifest(false);
}

ChatResponse RecordingChatClient::send(std::span<const ChatMessage> messages, double temperature,
                                       int max_tokens) {
    ChatResponse response = inner_->send(messages, temperature, max_tokens);
    write_fixture(dir_, count_++, messages, temperature, max_tokens, response);
    return response;
}

void RecordingChatClient::finalize() {
    write_manifest(true);
    finalized_ = true;
}

void RecordingChatClient::write_manifest(bool complete) const {
    write_fixture_manifest(dir_, count_, complete);
}

// ---------------------------------------------------------------------------
// QueueChatClient

void QueueChatClient::push(std::string content, std::int64_t prompt_tokens,
                           std::int64_t completion_tokens) {
    queue_.push_back(ChatResponse{std::move(content), {prompt_tokens, completion_tokens}});
}

ChatResponse QueueChatClient::send(std::span<const ChatMessage>, double, int) {
    ++calls_;
    if (queue_.empty()) throw TransportError("queue client: script exhausted");
    ChatResponse r = std::move(queue_.front());
    queue_.pop_front();
    return r;
}

}  // namespace bora::llm
