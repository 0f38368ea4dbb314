#include "treejudge/seed.hpp"

namespace treejudge {

std::uint64_t fnv1a(std::string_view data, std::uint64_t basis) noexcept {
    std::uint64_t h = basis;
    for (unsigned char c : data) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::uint64_t mix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t parent, std::initializer_list<std::uint64_t> parts) noexcept {
    std::uint64_t h = mix64(parent);
    for (auto p : parts) h = mix64(h ^ mix64(p));
    return h;
}

std::uint64_t derive_seed(std::uint64_t parent, std::string_view role,
                          std::initializer_list<std::uint64_t> parts) noexcept {
    std::uint64_t h = mix64(parent ^ fnv1a(role));
    for (auto p : parts) h = mix64(h ^ mix64(p));
    return h;
}

double unit_interval(std::uint64_t seed) noexcept {
    return static_cast<double>(mix64(seed) >> 11) * 0x1.0p-53;
}

}  // namespace treejudge
