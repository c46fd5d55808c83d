#pragma once

#include <condition_variable>
#include <cstdint>
#include <memory>
#include <mutex>
#include <string>
#include <utility>
#include <vector>

#include "persim/types.hpp"

namespace persim {

struct ChatRequest {
    std::string system_text;
    std::string user_text;
    double temperature = 0.7;
    int max_tokens = 4096;
    std::string tag;  // opaque correlation id; the mock provider interprets it

    void validate() const;  // temperature in [0,2]
};

struct ChatResponse {
    std::string text;
    std::string provider;
    long long latency_ms = 0;
    int attempt = 1;  // 1 = first try succeeded
};

struct AuthError : ProviderError {
    using ProviderError::ProviderError;
};
struct RetriesExhausted : ProviderError {
    using ProviderError::ProviderError;
};
struct MalformedReply : ProviderError {
    using ProviderError::ProviderError;
};

class Gateway {
public:
    virtual ~Gateway() = default;
    virtual ChatResponse complete(const ChatRequest& request) = 0;
    virtual std::string name() const = 0;
};

// Counting semaphore bounding in-flight provider calls.
class Semaphore {
public:
    explicit Semaphore(int count) : count_(count) {}
    void acquire();
    void release();

private:
    std::mutex m_;
    std::condition_variable cv_;
    int count_;
};

struct HttpResult {
    int status = 0;  // <= 0 means transport-level failure
    std::string body;
    std::string error;  // transport failure detail
};

class HttpTransport {
public:
    virtual ~HttpTransport() = default;
    virtual HttpResult post_json(const std::string& path, const std::string& body,
                                 const std::vector<std::pair<std::string, std::string>>& headers) = 0;
};

// cpp-httplib transport against a base URL (http:// or https://).
std::unique_ptr<HttpTransport> make_httplib_transport(const std::string& base_url,
                                                      int timeout_s);

struct HttpGatewayConfig {
    std::string base_url;                      // e.g. https://api.example.com
    std::string path = "/v1/chat/completions";
    std::string api_key;
    std::string model;
    int timeout_s = 120;
    int max_retries = 3;   // total attempts = max_retries + 1
    int concurrency = 4;   // max in-flight requests
    int backoff_base_ms = 500;  // doubles per retry; 0 disables sleeping
};

// JSON chat-completion client in the common "messages" shape; see
// docs/wire_protocol.md for the exact bytes. Retries 408/429/5xx and
// transport failures with exponential backoff; 401/403 fail immediately.
class HttpGateway : public Gateway {
public:
    HttpGateway(HttpGatewayConfig config, std::unique_ptr<HttpTransport> transport);

    ChatResponse complete(const ChatRequest& request) override;
    std::string name() const override { return "http:" + config_.model; }

    static std::string request_body(const HttpGatewayConfig& config, const ChatRequest& request);
    static std::string parse_reply(const std::string& body);  // throws MalformedReply

private:
    HttpGatewayConfig config_;
    std::unique_ptr<HttpTransport> transport_;
    Semaphore slots_;
};

}  // namespace persim
