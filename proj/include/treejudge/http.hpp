/// @file http.hpp
/// @brief Chat-completions and embeddings clients over an OpenAI-style wire
/// protocol, with call recording and offline replay.

#pragma once

#include <chrono>
#include <cstdint>
#include <functional>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "treejudge/chat.hpp"
#include "treejudge/embedding.hpp"

namespace treejudge {

struct HttpRequest {
    std::string base_url;
    std::string path;
    std::string body;
    std::string bearer_token;  // never recorded
    int timeout_ms = 60000;
};

struct HttpResponse {
    int status = 0;
    std::string body;
};

/// Raised by transports when no HTTP response was obtained at all.
class TransportFailure : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class Transport {
public:
    virtual ~Transport() = default;
    virtual HttpResponse post(const HttpRequest& request) = 0;
    /// False for replay transports: no credentials, no backoff sleeps.
    virtual bool live() const { return true; }
};

/// cpp-httplib backed transport. Supports http:// and https:// base URLs.
class HttplibTransport final : public Transport {
public:
    HttpResponse post(const HttpRequest& request) override;
};

/// Hex FNV-1a of the endpoint and body; the bearer token is excluded.
std::string request_hash(const HttpRequest& request);

struct ReplayEntry {
    std::uint64_t ordinal = 0;
    std::string request_hash;
    HttpResponse response;
};

/// Append-only JSON-lines record of every HTTP exchange in a session. One
/// store is shared by all roles so ordinals follow global call order.
class ReplayStore {
public:
    enum class Mode { Record, Replay };

    /// Record mode truncates `path`; replay mode loads it. Throws IoFailure.
    ReplayStore(std::string path, Mode mode);

    Mode mode() const noexcept { return mode_; }
    void append(const std::string& hash, const HttpResponse& response);
    /// Next recorded entry; throws BackendError(ReplayMismatch) when the hash
    /// differs or the record is exhausted.
    HttpResponse next(const std::string& hash, const std::string& endpoint);
    std::size_t size() const;

private:
    std::string path_;
    Mode mode_;
    mutable std::mutex mu_;
    std::vector<ReplayEntry> entries_;
    std::uint64_t cursor_ = 0;
};

class RecordingTransport final : public Transport {
public:
    RecordingTransport(std::shared_ptr<Transport> inner, std::shared_ptr<ReplayStore> store)
        : inner_(std::move(inner)), store_(std::move(store)) {}
    HttpResponse post(const HttpRequest& request) override;

private:
    std::shared_ptr<Transport> inner_;
    std::shared_ptr<ReplayStore> store_;
};

class ReplayTransport final : public Transport {
public:
    explicit ReplayTransport(std::shared_ptr<ReplayStore> store) : store_(std::move(store)) {}
    HttpResponse post(const HttpRequest& request) override;
    bool live() const override { return false; }

private:
    std::shared_ptr<ReplayStore> store_;
};

struct HttpEndpoint {
    std::string base_url;
    std::string model;
    std::string path = "/v1/chat/completions";
    std::string api_key_env = "EVAL_API_KEY";
    int timeout_ms = 60000;
    int backoff_ms = 500;
    int retry_limit = 3;

    std::string identity() const { return base_url + "#" + model; }
};

/// Shared retry loop: transient failures (no response, 408, 429, 5xx) are
/// retried `retry_limit` times with exponential backoff; exhaustion surfaces
/// as BackendError(Timeout). Other statuses fail immediately.
class HttpClient {
public:
    using Sleeper = std::function<void(std::chrono::milliseconds)>;

    HttpClient(HttpEndpoint endpoint, std::shared_ptr<Transport> transport, Sleeper sleeper = {});

    /// POSTs `body` and returns the 200 response body.
    std::string post_json(const std::string& body);
    const HttpEndpoint& endpoint() const noexcept { return endpoint_; }

private:
    std::string token() const;

    HttpEndpoint endpoint_;
    std::shared_ptr<Transport> transport_;
    Sleeper sleeper_;
};

class HttpChatBackend final : public ChatBackend {
public:
    HttpChatBackend(HttpEndpoint endpoint, std::shared_ptr<Transport> transport, HttpClient::Sleeper sleeper = {})
        : client_(std::move(endpoint), std::move(transport), std::move(sleeper)) {}

    std::string complete(std::span<const Message> messages, const CompletionOptions& options) override;
    std::string name() const override { return client_.endpoint().identity(); }

private:
    HttpClient client_;
};

class HttpEmbedder final : public Embedder {
public:
    HttpEmbedder(HttpEndpoint endpoint, std::shared_ptr<Transport> transport, HttpClient::Sleeper sleeper = {})
        : client_(std::move(endpoint), std::move(transport), std::move(sleeper)) {}

    Vector embed(const std::string& text) override;
    std::size_t dimension() const override;

private:
    HttpClient client_;
    mutable std::mutex mu_;
    std::size_t dimension_ = 0;
};

}  // namespace treejudge
