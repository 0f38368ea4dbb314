/// @file backend_factory.hpp
/// @brief Builds providers from endpoint specs.
///
/// Spec grammar:
///   http:<base-url>#<model>     OpenAI-style endpoint (`http://...#m` also accepted)
///   mock:<script-path>          scripted responses
///   synthetic[:<skill|path>]    simulated agent, or the simulated examiner,
///                               judge or extraction role
///   mock                        hashed n-gram embedder (embedder role only)

#pragma once

#include <memory>
#include <string>

#include "treejudge/chat.hpp"
#include "treejudge/config.hpp"
#include "treejudge/controller.hpp"
#include "treejudge/embedding.hpp"
#include "treejudge/http.hpp"

namespace treejudge {

enum class BackendRole { Model, Examiner, Judge, Ner };

struct EndpointSpec {
    enum class Kind { Http, Mock, Synthetic };
    Kind kind = Kind::Synthetic;
    std::string base_url;  // Http
    std::string model;     // Http
    std::string argument;  // Mock script path or Synthetic skill spec
};

/// Throws ConfigError(OutOfRange) naming `field` on malformed specs.
EndpointSpec parse_endpoint_spec(const std::string& spec, const std::string& field = "endpoint");

class BackendFactory {
public:
    /// `transport` overrides the network layer; replay settings from
    /// `config.backends` wrap whichever transport is used.
    explicit BackendFactory(const EvalConfig& config, std::shared_ptr<Transport> transport = nullptr,
                            HttpClient::Sleeper sleeper = {});

    std::unique_ptr<ChatBackend> chat(const std::string& spec, BackendRole role);
    /// Always wrapped in a CachedEmbedder.
    std::unique_ptr<Embedder> embedder(const std::string& spec);

    std::shared_ptr<ReplayStore> replay_store() const { return store_; }

private:
    std::shared_ptr<Transport> transport();
    HttpEndpoint endpoint(const EndpointSpec& s, const std::string& path) const;

    const EvalConfig& config_;
    std::shared_ptr<Transport> base_;
    std::shared_ptr<Transport> wrapped_;
    std::shared_ptr<ReplayStore> store_;
    HttpClient::Sleeper sleeper_;
};

/// Owns every provider of one pair session.
struct SessionBackends {
    std::unique_ptr<ChatBackend> model_a;
    std::unique_ptr<ChatBackend> model_b;
    std::unique_ptr<ChatBackend> examiner;
    std::unique_ptr<ChatBackend> judge;
    std::unique_ptr<ChatBackend> ner;
    std::unique_ptr<Embedder> embedder;

    Backends view() const { return Backends{*model_a, *model_b, *examiner, *judge, *ner, *embedder}; }
};

SessionBackends make_session_backends(BackendFactory& factory, const std::string& model_a,
                                      const std::string& model_b, const EvalConfig& config);

}  // namespace treejudge
