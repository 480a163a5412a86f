#pragma once

#include <cstdint>
#include <random>
#include <span>

namespace bcsecrecy {

/// Purpose tags for derived random substreams.
enum class StreamTag : std::uint64_t {
    CloudWords = 1,
    SatelliteWords = 2,
    V1Words = 3,
    V2Words = 4,
    Encoder = 5,
    Channel = 6,
    Trial = 7,
    Messages = 8,
};

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Seed of the independent substream (seed, tag, index).
inline std::uint64_t derive_seed(std::uint64_t seed, StreamTag tag, std::uint64_t index = 0) {
    return splitmix64(splitmix64(splitmix64(seed) ^ static_cast<std::uint64_t>(tag)) + index);
}

/// mt19937_64 with hand-written uniform/categorical draws, so results do not
/// depend on the standard library's distribution implementations.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    /// Uniform integer in [0, n), unbiased by rejection.
    std::uint64_t index(std::uint64_t n) {
        if (n <= 1) return 0;
        const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n);
        std::uint64_t r;
        do {
            r = engine_();
        } while (r >= limit);
        return r % n;
    }

    /// Inverse-CDF draw from a probability vector.
    std::size_t categorical(std::span<const double> p) {
        const double u = uniform();
        double acc = 0.0;
        std::size_t last = 0;
        for (std::size_t i = 0; i < p.size(); ++i) {
            if (p[i] <= 0.0) continue;
            acc += p[i];
            last = i;
            if (u < acc) return i;
        }
        return last;
    }

private:
    std::mt19937_64 engine_;
};

}  // namespace bcsecrecy
