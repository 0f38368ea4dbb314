#include "treejudge/backend_factory.hpp"

#include "treejudge/errors.hpp"
#include "treejudge/scripted.hpp"
#include "treejudge/synthetic.hpp"

namespace treejudge {

EndpointSpec parse_endpoint_spec(const std::string& raw, const std::string& field) {
    const std::string spec = trim(raw);
    EndpointSpec out;
    if (spec == "synthetic" || spec.starts_with("synthetic:")) {
        out.kind = EndpointSpec::Kind::Synthetic;
        if (spec.size() > 10) out.argument = spec.substr(10);
        return out;
    }
    if (spec == "mock") {
        out.kind = EndpointSpec::Kind::Mock;
        return out;
    }
    if (spec.starts_with("mock:")) {
        out.kind = EndpointSpec::Kind::Mock;
        out.argument = spec.substr(5);
        if (out.argument.empty()) throw ConfigError(ConfigError::Kind::OutOfRange, field, "mock: needs a script path");
        return out;
    }
    if (spec.starts_with("http:") || spec.starts_with("https:")) {
        std::string rest = spec;
        if (!spec.starts_with("http://") && !spec.starts_with("https://")) rest = spec.substr(5);
        const auto hash = rest.rfind('#');
        if (hash == std::string::npos || hash == 0 || hash + 1 == rest.size())
            throw ConfigError(ConfigError::Kind::OutOfRange, field, "expected http:<base-url>#<model>, got '" + spec + "'");
        out.kind = EndpointSpec::Kind::Http;
        out.base_url = rest.substr(0, hash);
        out.model = rest.substr(hash + 1);
        return out;
    }
    throw ConfigError(ConfigError::Kind::OutOfRange, field, "unrecognized endpoint spec '" + spec + "'");
}

BackendFactory::BackendFactory(const EvalConfig& config, std::shared_ptr<Transport> transport,
                               HttpClient::Sleeper sleeper)
    : config_(config), base_(std::move(transport)), sleeper_(std::move(sleeper)) {}

std::shared_ptr<Transport> BackendFactory::transport() {
    if (wrapped_) return wrapped_;
    const auto& b = config_.backends;
    switch (b.replay_mode) {
        case ReplayMode::Replay:
            store_ = std::make_shared<ReplayStore>(b.replay_path, ReplayStore::Mode::Replay);
            wrapped_ = std::make_shared<ReplayTransport>(store_);
            break;
        case ReplayMode::Record:
            store_ = std::make_shared<ReplayStore>(b.replay_path, ReplayStore::Mode::Record);
            wrapped_ = std::make_shared<RecordingTransport>(base_ ? base_ : std::make_shared<HttplibTransport>(), store_);
            break;
        case ReplayMode::Off:
            wrapped_ = base_ ? base_ : std::make_shared<HttplibTransport>();
            break;
    }
    return wrapped_;
}

HttpEndpoint BackendFactory::endpoint(const EndpointSpec& s, const std::string& path) const {
    HttpEndpoint e;
    e.base_url = s.base_url;
    e.model = s.model;
    e.path = path;
    e.api_key_env = config_.backends.api_key_env;
    e.timeout_ms = config_.backends.timeout_ms;
    e.backoff_ms = config_.backends.backoff_ms;
    e.retry_limit = config_.retry_limit;
    return e;
}

std::unique_ptr<ChatBackend> BackendFactory::chat(const std::string& spec, BackendRole role) {
    const auto s = parse_endpoint_spec(spec);
    switch (s.kind) {
        case EndpointSpec::Kind::Http:
            return std::make_unique<HttpChatBackend>(endpoint(s, config_.backends.chat_path), transport(), sleeper_);
        case EndpointSpec::Kind::Mock:
            if (s.argument.empty())
                throw ConfigError(ConfigError::Kind::OutOfRange, "endpoint", "chat roles need mock:<script-path>");
            return std::make_unique<ScriptedBackend>(ScriptedBackend::from_file(s.argument));
        case EndpointSpec::Kind::Synthetic:
            switch (role) {
                case BackendRole::Model:
                    return std::make_unique<SyntheticAgent>(trim(spec),
                                                            s.argument.empty() ? SkillTable{} : SkillTable::parse(s.argument));
                case BackendRole::Examiner: return std::make_unique<SyntheticExaminer>();
                case BackendRole::Judge: return std::make_unique<OracleJudge>(config_.tie_band);
                case BackendRole::Ner: return std::make_unique<SyntheticNer>();
            }
    }
    throw ConfigError(ConfigError::Kind::OutOfRange, "endpoint", "unsupported spec '" + spec + "'");
}

std::unique_ptr<Embedder> BackendFactory::embedder(const std::string& spec) {
    const auto s = parse_endpoint_spec(spec, "backends.embedder");
    std::shared_ptr<Embedder> inner;
    switch (s.kind) {
        case EndpointSpec::Kind::Http:
            inner = std::make_shared<HttpEmbedder>(endpoint(s, config_.backends.embeddings_path), transport(), sleeper_);
            break;
        case EndpointSpec::Kind::Mock:
            if (!s.argument.empty())
                throw ConfigError(ConfigError::Kind::OutOfRange, "backends.embedder", "embedder takes plain 'mock'");
            inner = std::make_shared<MockEmbedder>();
            break;
        case EndpointSpec::Kind::Synthetic:
            throw ConfigError(ConfigError::Kind::OutOfRange, "backends.embedder", "no synthetic embedder; use 'mock'");
    }
    return std::make_unique<CachedEmbedder>(std::move(inner));
}

SessionBackends make_session_backends(BackendFactory& factory, const std::string& model_a, const std::string& model_b,
                                      const EvalConfig& config) {
    SessionBackends out;
    out.model_a = factory.chat(model_a, BackendRole::Model);
    out.model_b = factory.chat(model_b, BackendRole::Model);
    out.examiner = factory.chat(config.backends.examiner, BackendRole::Examiner);
    out.judge = factory.chat(config.backends.judge, BackendRole::Judge);
    out.ner = factory.chat(config.backends.ner, BackendRole::Ner);
    out.embedder = factory.embedder(config.backends.embedder);
    return out;
}

}  // namespace treejudge
