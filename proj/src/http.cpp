#include "treejudge/http.hpp"

#include <cstdlib>
#include <fstream>
#include <thread>

#define CPPHTTPLIB_OPENSSL_SUPPORT
#include <httplib.h>
#include <fmt/format.h>
#include <nlohmann/json.hpp>
#include <spdlog/spdlog.h>

#include "treejudge/errors.hpp"
#include "treejudge/seed.hpp"

namespace treejudge {

using json = nlohmann::json;

HttpResponse HttplibTransport::post(const HttpRequest& request) {
    httplib::Client client(request.base_url);
    const auto timeout = std::chrono::milliseconds(request.timeout_ms);
    client.set_connection_timeout(timeout);
    client.set_read_timeout(timeout);
    client.set_write_timeout(timeout);
    httplib::Headers headers;
    if (!request.bearer_token.empty()) headers.emplace("Authorization", "Bearer " + request.bearer_token);
    auto result = client.Post(request.path, headers, request.body, "application/json");
    if (!result) throw TransportFailure(httplib::to_string(result.error()));
    return HttpResponse{result->status, result->body};
}

std::string request_hash(const HttpRequest& request) {
    return fmt::format("{:016x}", fnv1a(request.base_url + "\n" + request.path + "\n" + request.body));
}

ReplayStore::ReplayStore(std::string path, Mode mode) : path_(std::move(path)), mode_(mode) {
    if (mode_ == Mode::Record) {
        std::ofstream out(path_, std::ios::trunc);
        if (!out) throw IoFailure("cannot create replay record " + path_);
        return;
    }
    std::ifstream in(path_);
    if (!in) throw IoFailure("cannot open replay record " + path_);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        auto doc = json::parse(line, nullptr, false);
        if (doc.is_discarded() || !doc.contains("ordinal") || !doc.contains("request_hash") || !doc.contains("status") ||
            !doc.contains("body"))
            throw IoFailure("malformed replay entry in " + path_ + " at line " + std::to_string(entries_.size() + 1));
        entries_.push_back(ReplayEntry{doc["ordinal"].get<std::uint64_t>(), doc["request_hash"].get<std::string>(),
                                       HttpResponse{doc["status"].get<int>(), doc["body"].get<std::string>()}});
    }
}

void ReplayStore::append(const std::string& hash, const HttpResponse& response) {
    std::lock_guard lock(mu_);
    const json entry{{"ordinal", cursor_}, {"request_hash", hash}, {"status", response.status}, {"body", response.body}};
    std::ofstream out(path_, std::ios::app);
    if (!out) throw IoFailure("cannot append to replay record " + path_);
    out << entry.dump() << '\n';
    entries_.push_back(ReplayEntry{cursor_, hash, response});
    ++cursor_;
}

HttpResponse ReplayStore::next(const std::string& hash, const std::string& endpoint) {
    std::lock_guard lock(mu_);
    if (cursor_ >= entries_.size())
        throw BackendError(BackendError::Kind::ReplayMismatch, endpoint,
                           "replay record exhausted at call " + std::to_string(cursor_));
    const auto& entry = entries_[cursor_];
    if (entry.request_hash != hash)
        throw BackendError(BackendError::Kind::ReplayMismatch, endpoint,
                           fmt::format("call {} expected request {} but got {}", cursor_, entry.request_hash, hash));
    ++cursor_;
    return entry.response;
}

std::size_t ReplayStore::size() const {
    std::lock_guard lock(mu_);
    return entries_.size();
}

HttpResponse RecordingTransport::post(const HttpRequest& request) {
    HttpResponse response;
    try {
        response = inner_->post(request);
    } catch (const TransportFailure& e) {
        // status 0 marks "no response" so replay reproduces the retry path.
        store_->append(request_hash(request), HttpResponse{0, e.what()});
        throw;
    }
    store_->append(request_hash(request), response);
    return response;
}

HttpResponse ReplayTransport::post(const HttpRequest& request) {
    auto response = store_->next(request_hash(request), request.base_url + request.path);
    if (response.status == 0) throw TransportFailure(response.body);
    return response;
}

HttpClient::HttpClient(HttpEndpoint endpoint, std::shared_ptr<Transport> transport, Sleeper sleeper)
    : endpoint_(std::move(endpoint)), transport_(std::move(transport)), sleeper_(std::move(sleeper)) {
    if (!sleeper_) sleeper_ = [](std::chrono::milliseconds d) { std::this_thread::sleep_for(d); };
}

std::string HttpClient::token() const {
    if (!transport_->live() || endpoint_.api_key_env.empty()) return {};
    const char* value = std::getenv(endpoint_.api_key_env.c_str());
    if (value == nullptr || *value == '\0')
        throw BackendError(BackendError::Kind::AuthMissing, endpoint_.identity(),
                           "environment variable " + endpoint_.api_key_env + " is not set");
    return value;
}

namespace {

bool transient(int status) { return status == 408 || status == 429 || status >= 500; }

}  // namespace

std::string HttpClient::post_json(const std::string& body) {
    const HttpRequest request{endpoint_.base_url, endpoint_.path, body, token(), endpoint_.timeout_ms};
    std::string last_error;
    for (int attempt = 0; attempt <= endpoint_.retry_limit; ++attempt) {
        if (attempt > 0 && transport_->live() && endpoint_.backoff_ms > 0) {
            sleeper_(std::chrono::milliseconds(static_cast<long long>(endpoint_.backoff_ms) << (attempt - 1)));
        }
        try {
            const HttpResponse response = transport_->post(request);
            if (response.status == 200) return response.body;
            if (!transient(response.status))
                throw BackendError(BackendError::Kind::HttpStatus, endpoint_.identity(),
                                   "status " + std::to_string(response.status), response.status);
            last_error = "status " + std::to_string(response.status);
        } catch (const TransportFailure& e) {
            last_error = e.what();
        }
        spdlog::warn("{}: attempt {} failed ({})", endpoint_.identity(), attempt + 1, last_error);
    }
    throw BackendError(BackendError::Kind::Timeout, endpoint_.identity(),
                       fmt::format("gave up after {} attempts, last error: {}", endpoint_.retry_limit + 1, last_error));
}

std::string HttpChatBackend::complete(std::span<const Message> messages, const CompletionOptions& options) {
    json msgs = json::array();
    for (const auto& m : messages) msgs.push_back({{"role", to_string(m.role)}, {"content", m.content}});
    const json request{{"model", client_.endpoint().model}, {"messages", msgs}, {"temperature", options.temperature}};
    const std::string raw = client_.post_json(request.dump());

    const auto doc = json::parse(raw, nullptr, false);
    if (doc.is_discarded() || !doc.is_object() || !doc.contains("choices") || !doc["choices"].is_array() ||
        doc["choices"].empty())
        throw BackendError(BackendError::Kind::MalformedResponse, name(), "missing choices");
    const auto& choice = doc["choices"][0];
    if (!choice.contains("message") || !choice["message"].is_object() || !choice["message"].contains("content") ||
        !choice["message"]["content"].is_string())
        throw BackendError(BackendError::Kind::MalformedResponse, name(), "missing choices[0].message.content");
    return choice["message"]["content"].get<std::string>();
}

Vector HttpEmbedder::embed(const std::string& text) {
    const json request{{"model", client_.endpoint().model}, {"input", text}};
    const std::string raw = client_.post_json(request.dump());
    const auto doc = json::parse(raw, nullptr, false);
    const auto identity = client_.endpoint().identity();
    if (doc.is_discarded() || !doc.is_object() || !doc.contains("data") || !doc["data"].is_array() || doc["data"].empty() ||
        !doc["data"][0].is_object() || !doc["data"][0].contains("embedding") || !doc["data"][0]["embedding"].is_array())
        throw BackendError(BackendError::Kind::MalformedResponse, identity, "missing data[0].embedding");
    Vector v;
    for (const auto& x : doc["data"][0]["embedding"]) {
        if (!x.is_number()) throw BackendError(BackendError::Kind::MalformedResponse, identity, "non-numeric embedding");
        v.push_back(x.get<double>());
    }
    if (v.empty()) throw BackendError(BackendError::Kind::MalformedResponse, identity, "empty embedding");
    std::lock_guard lock(mu_);
    if (dimension_ == 0) dimension_ = v.size();
    if (v.size() != dimension_)
        throw DimensionMismatch(fmt::format("{} returned dimension {} after {}", identity, v.size(), dimension_));
    normalize(v);
    return v;
}

std::size_t HttpEmbedder::dimension() const {
    std::lock_guard lock(mu_);
    return dimension_;
}

}  // namespace treejudge
