#pragma once

#include <cmath>
#include <cstdint>

namespace longsync {

// SplitMix64: the fixed PRNG behind every seeded operation in the library.
// Output is bit-identical across platforms, which keeps generated syncwords,
// payloads and channel realizations reproducible from their 64-bit seeds.
class SplitMix64 {
public:
    explicit SplitMix64(uint64_t seed) : state_(seed) {}

    uint64_t next() {
        uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    // Top bit of the next output.
    bool next_bit() { return (next() >> 63) != 0; }

    // Uniform double in [0, 1).
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

private:
    uint64_t state_;
};

// Derive an independent child seed from a master seed and stream indices.
inline uint64_t derive_seed(uint64_t master, uint64_t a, uint64_t b = 0) {
    SplitMix64 g(master ^ (a * 0x9e3779b97f4a7c15ull) ^ (b * 0xbf58476d1ce4e5b9ull));
    g.next();
    return g.next();
}

// Box-Muller standard normal pairs from a SplitMix64 stream.
class GaussianGen {
public:
    explicit GaussianGen(uint64_t seed) : rng_(seed) {}

    double next() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = rng_.uniform();
        double u2 = rng_.uniform();
        while (u1 <= 0.0) u1 = rng_.uniform();
        double r = std::sqrt(-2.0 * std::log(u1));
        double a = 2.0 * M_PI * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

private:
    SplitMix64 rng_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

}  // namespace longsync
