#pragma once

#include <cstdint>
#include <deque>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace bora::llm {

struct ChatMessage {
    std::string role;  // system | user | assistant
    std::string content;
};

struct ChatUsage {
    std::int64_t prompt_tokens = 0;
    std::int64_t completion_tokens = 0;

    ChatUsage& operator+=(const ChatUsage& o) {
        prompt_tokens += o.prompt_tokens;
        completion_tokens += o.completion_tokens;
        return *this;
    }
};

struct ChatResponse {
    std::string content;
    ChatUsage usage;
};

struct TransportError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// One in-flight conversation turn. Implementations are used from a single
// run at a time; the engine issues calls strictly sequentially.
class ChatClient {
public:
    virtual ~ChatClient() = default;
    virtual ChatResponse send(std::span<const ChatMessage> messages, double temperature,
                              int max_tokens) = 0;
};

struct HttpClientConfig {
    std::string base_url = "https://api.openai.com";
    std::string model = "gpt-4o-mini";
    std::string api_key;
    int timeout_seconds = 120;
    int transport_retries = 3;
    double backoff_initial_seconds = 1.0;  // doubled per retry
};

// OpenAI-compatible chat-completions endpoint.
class HttpChatClient : public ChatClient {
public:
    explicit HttpChatClient(HttpClientConfig config);
    ChatResponse send(std::span<const ChatMessage> messages, double temperature,
                      int max_tokens) override;

private:
    HttpClientConfig config_;
};

// Replays recorded responses from a fixture directory in FIFO order.
// Identical message sequences therefore always yield identical responses.
class ReplayChatClient : public ChatClient {
public:
    explicit ReplayChatClient(const std::string& fixture_dir);
    ChatResponse send(std::span<const ChatMessage> messages, double temperature,
                      int max_tokens) override;

    std::size_t remaining() const { return responses_.size(); }
    bool complete() const { return complete_; }

private:
    std::deque<ChatResponse> responses_;
    bool complete_ = true;
};

// Wraps a live client and persists each exchange as a replay fixture.
// finalize() marks the recording complete; a destructor without finalize
// leaves the manifest flagged incomplete (aborted run).
class RecordingChatClient : public ChatClient {
public:
    RecordingChatClient(std::unique_ptr<ChatClient> inner, std::string fixture_dir);
    ~RecordingChatClient() override;
    ChatResponse send(std::span<const ChatMessage> messages, double temperature,
                      int max_tokens) override;
    void finalize();

private:
    void write_manifest(bool complete) const;
    std::unique_ptr<ChatClient> inner_;
    std::string dir_;
    int count_ = 0;
    bool finalized_ = false;
};

// In-memory scripted client; raises TransportError when the script runs dry.
class QueueChatClient : public ChatClient {
public:
    void push(std::string content, std::int64_t prompt_tokens = 0,
              std::int64_t completion_tokens = 0);
    ChatResponse send(std::span<const ChatMessage> messages, double temperature,
                      int max_tokens) override;
    std::size_t calls() const { return calls_; }

private:
    std::deque<ChatResponse> queue_;
    std::size_t calls_ = 0;
};

// Writes one replay fixture file (used by the recorder and by test setups).
void write_fixture(const std::string& dir, int index, std::span<const ChatMessage> messages,
                   double temperature, int max_tokens, const ChatResponse& response);
void write_fixture_manifest(const std::string& dir, int count, bool complete);

}  // namespace bora::llm
