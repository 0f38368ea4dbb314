/// @file errors.hpp
/// @brief Exception hierarchy shared by every treejudge module.

#pragma once

#include <stdexcept>
#include <string>

namespace treejudge {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Rejected configuration document. `field()` names the offending key path.
class ConfigError : public Error {
public:
    enum class Kind { MissingField, OutOfRange, EmptyTopicList, TypeMismatch, UnknownField };

    ConfigError(Kind kind, std::string field, const std::string& detail);

    Kind kind() const noexcept { return kind_; }
    const std::string& field() const noexcept { return field_; }

private:
    Kind kind_;
    std::string field_;
};

/// Failures raised by chat or embedding providers.
class BackendError : public Error {
public:
    enum class Kind { Timeout, HttpStatus, MalformedResponse, AuthMissing, ReplayMismatch, Unavailable };

    BackendError(Kind kind, std::string endpoint, const std::string& detail, int status = 0);

    Kind kind() const noexcept { return kind_; }
    const std::string& endpoint() const noexcept { return endpoint_; }
    int status() const noexcept { return status_; }

private:
    Kind kind_;
    std::string endpoint_;
    int status_;
};

class DimensionMismatch : public Error {
public:
    using Error::Error;
};

/// Structured output could not be recovered from a model reply.
class ParseError : public Error {
public:
    enum class Kind { NoJsonFound, MissingQuestionField, EmptyQuestion, UnrecognizedValue, NoListFound };

    ParseError(Kind kind, const std::string& detail);

    Kind kind() const noexcept { return kind_; }

private:
    Kind kind_;
};

class ExaminerFailed : public Error {
public:
    using Error::Error;
};

class AllCandidatesFailed : public ExaminerFailed {
public:
    using ExaminerFailed::ExaminerFailed;
};

class AggregationError : public Error {
public:
    using Error::Error;
};

class MetricsError : public Error {
public:
    enum class Kind { LengthMismatch, TooShort, EmptyInput };

    MetricsError(Kind kind, const std::string& detail);

    Kind kind() const noexcept { return kind_; }

private:
    Kind kind_;
};

/// Session file failed validation; `path()` is a JSON pointer to the first bad node.
class SchemaViolation : public Error {
public:
    SchemaViolation(std::string path, const std::string& detail);

    const std::string& path() const noexcept { return path_; }

private:
    std::string path_;
};

class IoFailure : public Error {
public:
    using Error::Error;
};

class TopicMismatch : public Error {
public:
    using Error::Error;
};

const char* to_string(ConfigError::Kind kind) noexcept;
const char* to_string(BackendError::Kind kind) noexcept;
const char* to_string(ParseError::Kind kind) noexcept;

}  // namespace treejudge
