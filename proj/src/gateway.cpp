#include "persim/gateway.hpp"

#include <chrono>
#include <thread>

#include <httplib.h>
#include <json.hpp>

namespace persim {

void ChatRequest::validate() const {
    if (temperature < 0.0 || temperature > 2.0)
        throw ValidationError("temperature " + std::to_string(temperature) + " outside [0,2]");
    if (max_tokens <= 0) throw ValidationError("max_tokens must be positive");
}

void Semaphore::acquire() {
    std::unique_lock lk(m_);
    cv_.wait(lk, [&] { return count_ > 0; });
    --count_;
}

void Semaphore::release() {
    {
        std::lock_guard lk(m_);
        ++count_;
    }
    cv_.notify_one();
}

namespace {

class HttplibTransport : public HttpTransport {
public:
    HttplibTransport(std::string base_url, int timeout_s)
        : base_url_(std::move(base_url)), timeout_s_(timeout_s) {}

    HttpResult post_json(const std::string& path, const std::string& body,
                         const std::vector<std::pair<std::string, std::string>>& headers) override {
        httplib::Client cli(base_url_);
        cli.set_connection_timeout(timeout_s_, 0);
        cli.set_read_timeout(timeout_s_, 0);
        cli.set_write_timeout(timeout_s_, 0);
        httplib::Headers h;
        for (const auto& [k, v] : headers) h.emplace(k, v);
        auto res = cli.Post(path, h, body, "application/json");
        if (!res) return {0, "", httplib::to_string(res.error())};
        return {res->status, res->body, ""};
    }

private:
    std::string base_url_;
    int timeout_s_;
};

bool retryable_status(int status) {
    if (status <= 0) return true;  // connect/read failure
    if (status == 408 || status == 429) return true;
    return status >= 500;
}

}  // namespace

std::unique_ptr<HttpTransport> make_httplib_transport(const std::string& base_url,
                                                      int timeout_s) {
    return std::make_unique<HttplibTransport>(base_url, timeout_s);
}

HttpGateway::HttpGateway(HttpGatewayConfig config, std::unique_ptr<HttpTransport> transport)
    : config_(std::move(config)),
      transport_(std::move(transport)),
      slots_(config_.concurrency > 0 ? config_.concurrency : 1) {}

std::string HttpGateway::request_body(const HttpGatewayConfig& config,
                                      const ChatRequest& request) {
    nlohmann::json j{
        {"model", config.model},
        {"temperature", request.temperature},
        {"max_tokens", request.max_tokens},
        {"messages",
         {{{"role", "system"}, {"content", request.system_text}},
          {{"role", "user"}, {"content", request.user_text}}}},
    };
    return j.dump();
}

std::string HttpGateway::parse_reply(const std::string& body) {
    try {
        auto j = nlohmann::json::parse(body);
        return j.at("choices").at(0).at("message").at("content").get<std::string>();
    } catch (const nlohmann::json::exception& e) {
        throw MalformedReply(std::string("malformed provider reply: ") + e.what());
    }
}

ChatResponse HttpGateway::complete(const ChatRequest& request) {
    request.validate();
    // The serialized body is built once; retries resend identical bytes.
    const std::string body = request_body(config_, request);
    std::vector<std::pair<std::string, std::string>> headers;
    if (!config_.api_key.empty())
        headers.emplace_back("Authorization", "Bearer " + config_.api_key);

    slots_.acquire();
    struct Release {
        Semaphore& s;
        ~Release() { s.release(); }
    } release{slots_};

    std::string last_error;
    for (int attempt = 1; attempt <= config_.max_retries + 1; ++attempt) {
        auto t0 = std::chrono::steady_clock::now();
        HttpResult res = transport_->post_json(config_.path, body, headers);
        auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                      std::chrono::steady_clock::now() - t0)
                      .count();
        if (res.status == 200) {
            ChatResponse out;
            out.text = parse_reply(res.body);
            out.provider = name();
            out.latency_ms = ms;
            out.attempt = attempt;
            return out;
        }
        if (res.status == 401 || res.status == 403)
            throw AuthError("authentication failed (HTTP " + std::to_string(res.status) +
                            ") for tag " + request.tag);
        if (!retryable_status(res.status))
            throw ProviderError("provider error HTTP " + std::to_string(res.status) +
                                " for tag " + request.tag + ": " + res.body);
        last_error = res.status <= 0 ? ("transport: " + res.error)
                                     : ("HTTP " + std::to_string(res.status));
        if (attempt <= config_.max_retries && config_.backoff_base_ms > 0) {
            auto delay = std::chrono::milliseconds(config_.backoff_base_ms) * (1LL << (attempt - 1));
            std::this_thread::sleep_for(delay);
        }
    }
    throw RetriesExhausted("gave up after " + std::to_string(config_.max_retries + 1) +
                           " attempts for tag " + request.tag + " (last: " + last_error + ")");
}

}  // namespace persim
