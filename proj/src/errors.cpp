#include "treejudge/errors.hpp"

#include <utility>

namespace treejudge {

ConfigError::ConfigError(Kind kind, std::string field, const std::string& detail)
    : Error(std::string(to_string(kind)) + "(" + field + "): " + detail),
      kind_(kind),
      field_(std::move(field)) {}

BackendError::BackendError(Kind kind, std::string endpoint, const std::string& detail, int status)
    : Error(std::string(to_string(kind)) + " [" + endpoint + "]: " + detail),
      kind_(kind),
      endpoint_(std::move(endpoint)),
      status_(status) {}

ParseError::ParseError(Kind kind, const std::string& detail)
    : Error(std::string(to_string(kind)) + ": " + detail), kind_(kind) {}

MetricsError::MetricsError(Kind kind, const std::string& detail) : Error(detail), kind_(kind) {}

SchemaViolation::SchemaViolation(std::string path, const std::string& detail)
    : Error("SchemaViolation at " + path + ": " + detail), path_(std::move(path)) {}

const char* to_string(ConfigError::Kind kind) noexcept {
    switch (kind) {
        case ConfigError::Kind::MissingField: return "MissingField";
        case ConfigError::Kind::OutOfRange: return "OutOfRange";
        case ConfigError::Kind::EmptyTopicList: return "EmptyTopicList";
        case ConfigError::Kind::TypeMismatch: return "TypeMismatch";
        case ConfigError::Kind::UnknownField: return "UnknownField";
    }
    return "ConfigError";
}

const char* to_string(BackendError::Kind kind) noexcept {
    switch (kind) {
        case BackendError::Kind::Timeout: return "Timeout";
        case BackendError::Kind::HttpStatus: return "HttpStatus";
        case BackendError::Kind::MalformedResponse: return "MalformedResponse";
        case BackendError::Kind::AuthMissing: return "AuthMissing";
        case BackendError::Kind::ReplayMismatch: return "ReplayMismatch";
        case BackendError::Kind::Unavailable: return "Unavailable";
    }
    return "BackendError";
}

const char* to_string(ParseError::Kind kind) noexcept {
    switch (kind) {
        case ParseError::Kind::NoJsonFound: return "NoJsonFound";
        case ParseError::Kind::MissingQuestionField: return "MissingQuestionField";
        case ParseError::Kind::EmptyQuestion: return "EmptyQuestion";
        case ParseError::Kind::UnrecognizedValue: return "UnrecognizedValue";
        case ParseError::Kind::NoListFound: return "NoListFound";
    }
    return "ParseError";
}

}  // namespace treejudge
