/// @file chat.hpp
/// @brief Chat completion interface shared by real, scripted and synthetic providers.

#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace treejudge {

enum class Role { System, User, Assistant };

const char* to_string(Role r) noexcept;

struct Message {
    Role role = Role::User;
    std::string content;

    bool operator==(const Message&) const = default;
};

using Messages = std::vector<Message>;

struct CompletionOptions {
    double temperature = 1.0;
    /// Derived from the call's identity. Deterministic providers must use it as
    /// their only source of randomness; remote providers ignore it.
    std::uint64_t seed = 0;
};

/// A model viewed as a black-box text function. Implementations must tolerate
/// concurrent calls.
class ChatBackend {
public:
    virtual ~ChatBackend() = default;
    virtual std::string complete(std::span<const Message> messages, const CompletionOptions& options) = 0;
    virtual std::string name() const = 0;
};

/// Wraps a callable; handy for fixtures and tests.
class FunctionBackend final : public ChatBackend {
public:
    using Fn = std::function<std::string(std::span<const Message>, const CompletionOptions&)>;

    FunctionBackend(std::string name, Fn fn) : name_(std::move(name)), fn_(std::move(fn)) {}

    std::string complete(std::span<const Message> messages, const CompletionOptions& options) override {
        return fn_(messages, options);
    }
    std::string name() const override { return name_; }

private:
    std::string name_;
    Fn fn_;
};

/// Concatenated content of all user messages.
std::string user_text(std::span<const Message> messages);

}  // namespace treejudge
