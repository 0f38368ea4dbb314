#include "treejudge/embedding.hpp"

#include <cmath>
#include <numeric>

#include "treejudge/chat.hpp"
#include "treejudge/errors.hpp"
#include "treejudge/seed.hpp"
#include "treejudge/types.hpp"

namespace treejudge {

const char* to_string(Role r) noexcept {
    switch (r) {
        case Role::System: return "system";
        case Role::User: return "user";
        case Role::Assistant: return "assistant";
    }
    return "user";
}

std::string user_text(std::span<const Message> messages) {
    std::string out;
    for (const auto& m : messages) {
        if (m.role != Role::User) continue;
        if (!out.empty()) out += '\n';
        out += m.content;
    }
    return out;
}

double cosine_similarity(std::span<const double> u, std::span<const double> v) {
    if (u.size() != v.size())
        throw DimensionMismatch("cosine_similarity: dimensions " + std::to_string(u.size()) + " and " +
                                std::to_string(v.size()));
    return std::inner_product(u.begin(), u.end(), v.begin(), 0.0);
}

void normalize(Vector& v) {
    const double norm = std::sqrt(std::inner_product(v.begin(), v.end(), v.begin(), 0.0));
    if (norm == 0.0) return;
    for (auto& x : v) x /= norm;
}

Vector MockEmbedder::embed(const std::string& text) {
    Vector v(kDimension, 0.0);
    if (text.empty()) {
        v[0] = 1.0;
        return v;
    }
    const std::string framed = "^" + to_lower(text) + "$";
    for (std::size_t i = 0; i + 3 <= framed.size(); ++i) {
        v[fnv1a(std::string_view(framed).substr(i, 3)) % kDimension] += 1.0;
    }
    normalize(v);
    return v;
}

Vector CachedEmbedder::embed(const std::string& text) {
    {
        std::lock_guard lock(mu_);
        if (auto it = cache_.find(text); it != cache_.end()) return it->second;
    }
    Vector v = inner_->embed(text);
    std::lock_guard lock(mu_);
    return cache_.emplace(text, std::move(v)).first->second;
}

std::size_t CachedEmbedder::cache_size() const {
    std::lock_guard lock(mu_);
    return cache_.size();
}

}  // namespace treejudge
