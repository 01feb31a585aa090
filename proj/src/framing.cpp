#include "longsync/framing.hpp"

#include "longsync/rng.hpp"

namespace longsync {

bool FrameConfig::validate() const {
    if (k < 2 || (k % 2) != 0) throw ConfigError("k must be even and >= 2");
    if (n == 0 || (n % 2) != 0) throw ConfigError("n must be even and > 0");
    if (threshold == 0 || threshold > k) throw ConfigError("threshold must satisfy 0 < T <= k");
    if (m < 1) throw ConfigError("m must be >= 1");
    return n < k;
}

Syncword gen_syncword(size_t k, uint64_t seed) {
    if (k < 2 || (k % 2) != 0)
        throw ConfigError("gen_syncword: k must be even and >= 2");
    SplitMix64 rng(seed);
    BitStream bits(k);
    for (size_t i = 0; i < k; ++i) bits.set(i, rng.next_bit());
    return Syncword{std::move(bits), k, seed};
}

GeneratedFrames gen_frames(const FrameConfig& cfg) {
    cfg.validate();
    GeneratedFrames out;
    out.payloads.reserve(cfg.frames);
    SplitMix64 payload_rng(cfg.payload_seed);
    uint64_t sync_seed = cfg.sync_seed;
    Syncword sync = gen_syncword(cfg.k, sync_seed);
    for (size_t f = 0; f < cfg.frames; ++f) {
        if (cfg.refresh_interval > 0 && f > 0 && f % cfg.refresh_interval == 0) {
            sync_seed = derive_seed(sync_seed, f);
            sync = gen_syncword(cfg.k, sync_seed);
        }
        BitStream payload(cfg.n);
        for (size_t i = 0; i < cfg.n; ++i) payload.set(i, payload_rng.next_bit());
        out.stream.append(sync.bits);
        out.stream.append(payload);
        out.payloads.push_back(std::move(payload));
    }
    return out;
}

}  // namespace longsync
