#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace refl {

/// Derives an independent sub-seed from a master seed and a role tag
/// (e.g. "de", "mcmc/chain0"), so every stochastic stage gets its own
/// stream while staying reproducible from a single --seed.
inline std::uint64_t derive_seed(std::uint64_t master, std::string_view role) {
    // FNV-1a over the tag, then a splitmix64 finalizer mixing in the master.
    std::uint64_t h = 1469598103934665603ull;
    for (char c : role) {
        h ^= static_cast<unsigned char>(c);
        h *= 1099511628211ull;
    }
    std::uint64_t z = master + 0x9e3779b97f4a7c15ull + h;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

using Rng = std::mt19937_64;

}  // namespace refl
