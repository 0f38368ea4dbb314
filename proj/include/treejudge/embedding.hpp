/// @file embedding.hpp
/// @brief Text embedders and the cosine similarity primitive.

#pragma once

#include <cstddef>
#include <memory>
#include <mutex>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

namespace treejudge {

using Vector = std::vector<double>;

/// Maps text to a unit-L2 vector of fixed dimension. Must be a pure function
/// of the text so results can be cached.
class Embedder {
public:
    virtual ~Embedder() = default;
    virtual Vector embed(const std::string& text) = 0;
    virtual std::size_t dimension() const = 0;
};

/// Dot product of two unit vectors. Throws DimensionMismatch.
double cosine_similarity(std::span<const double> u, std::span<const double> v);

/// Scales `v` to unit L2 norm in place; a zero vector is left untouched.
void normalize(Vector& v);

/// Feature-hashed character 3-grams. Text is lower-cased and framed with
/// boundary markers so one- and two-character labels still produce grams.
class MockEmbedder final : public Embedder {
public:
    static constexpr std::size_t kDimension = 64;

    Vector embed(const std::string& text) override;
    std::size_t dimension() const override { return kDimension; }
};

/// Memoizing decorator; internally synchronized.
class CachedEmbedder final : public Embedder {
public:
    explicit CachedEmbedder(std::shared_ptr<Embedder> inner) : inner_(std::move(inner)) {}

    Vector embed(const std::string& text) override;
    std::size_t dimension() const override { return inner_->dimension(); }
    std::size_t cache_size() const;

private:
    std::shared_ptr<Embedder> inner_;
    mutable std::mutex mu_;
    std::unordered_map<std::string, Vector> cache_;
};

}  // namespace treejudge
