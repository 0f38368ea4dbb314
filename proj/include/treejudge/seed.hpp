/// @file seed.hpp
/// @brief Deterministic hashing and sub-seed derivation.
///
/// Sub-seeds are pure functions of a parent seed and a call identity, so mock
/// and synthetic backends produce the same output no matter in which order (or
/// on which thread) calls happen.

#pragma once

#include <cstdint>
#include <initializer_list>
#include <string_view>

namespace treejudge {

/// 64-bit FNV-1a.
std::uint64_t fnv1a(std::string_view data, std::uint64_t basis = 0xcbf29ce484222325ULL) noexcept;

/// SplitMix64 finalizer.
std::uint64_t mix64(std::uint64_t x) noexcept;

/// Folds a list of identity components into `parent`.
std::uint64_t derive_seed(std::uint64_t parent, std::initializer_list<std::uint64_t> parts) noexcept;

/// Same, with a textual role tag as the first component.
std::uint64_t derive_seed(std::uint64_t parent, std::string_view role,
                          std::initializer_list<std::uint64_t> parts = {}) noexcept;

/// Maps a seed to a uniform double in [0, 1).
double unit_interval(std::uint64_t seed) noexcept;

}  // namespace treejudge
