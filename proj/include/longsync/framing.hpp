#pragma once

#include <cstdint>
#include <vector>

#include "longsync/bitstream.hpp"

namespace longsync {

struct Syncword {
    BitStream bits;
    size_t k = 0;
    uint64_t seed = 0;
};

struct FrameConfig {
    size_t n = 4700;       // payload bits per frame
    size_t k = 300;        // syncword bits
    size_t threshold = 210;
    size_t m = 8;          // correlator window positions per block
    size_t frames = 0;
    uint64_t sync_seed = 1;
    uint64_t payload_seed = 2;
    size_t refresh_interval = 0;  // frames per syncword, 0 = never refresh

    // Throws ConfigError on invalid settings. Returns true when n < k
    // (legal but worth a warning: sync overhead exceeds payload).
    bool validate() const;
};

// Deterministic random syncword: bit i is the top bit of the i-th
// SplitMix64 output for the given seed.
Syncword gen_syncword(size_t k, uint64_t seed);

struct GeneratedFrames {
    std::vector<BitStream> payloads;
    BitStream stream;  // syncword ‖ payload per frame, concatenated
};

GeneratedFrames gen_frames(const FrameConfig& cfg);

}  // namespace longsync
