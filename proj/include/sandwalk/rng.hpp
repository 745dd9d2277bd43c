#pragma once

#include <cstdint>

namespace sandwalk {

/// Counter-based splittable generator (splitmix64 mixing function).
/// Streams derived via mix_seed are independent of execution order, so
/// parallel trials reproduce bit-identically.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    // Uniform double in [0, 1).
    double next_unit() { return (next() >> 11) * 0x1.0p-53; }

private:
    std::uint64_t state_;
};

inline std::uint64_t mix_seed(std::uint64_t master, std::uint64_t stream) {
    SplitMix64 g(master ^ (0xd1342543de82ef95ull * (stream + 1)));
    g.next();
    return g.next();
}

}  // namespace sandwalk
