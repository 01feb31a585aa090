#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "longsync/bitstream.hpp"
#include "longsync/framing.hpp"

namespace longsync {

struct DetectionEvent {
    size_t pos = 0;   // bit index of the syncword start
    size_t corr = 0;  // similar-bit count, T <= corr <= k
    int rot = 0;      // phase-rotation variant index, 0..3

    bool operator==(const DetectionEvent&) const = default;
};

struct ScanOptions {
    bool suspend_during_capture = true;  // false = --continuous diagnostics mode
};

// Number of agreeing bit positions between two equal-length bit vectors
// (XNOR-and-sum), computed as k - HammingDistance via packed XOR + popcount.
size_t correlate(const BitStream& window, const BitStream& sync);

// The four bit patterns the receiver would decode for this syncword under
// the four stable Costas lock points (rho * 90 degrees). Variant 0 is the
// syncword itself; variant 2 is its complement.
std::array<BitStream, 4> rotated_variants(const Syncword& sync);

// Sliding-window threshold detection with block-parallel (m positions per
// cycle) comparator-tree semantics: within a cycle the maximum correlation
// over all window positions and rotation variants is compared against T.
// Ties: earliest position within a rotation, lowest rotation index across
// rotations. After a detection, scanning is suspended for the payload
// (n bits past the syncword) unless options disable it.
std::vector<DetectionEvent> scan(const BitStream& stream, const FrameConfig& cfg,
                                 const Syncword& sync,
                                 const ScanOptions& options = {});

struct CapturedFrame {
    DetectionEvent event;
    BitStream payload;  // de-rotated back to the transmitted mapping
};

struct ExtractResult {
    std::vector<CapturedFrame> frames;
    std::vector<DetectionEvent> truncated;  // too close to the stream end
};

ExtractResult extract_payloads(const BitStream& stream,
                               const std::vector<DetectionEvent>& events,
                               const FrameConfig& cfg);

// Behavioral model of the hardware detector: a shift register of the last
// m+k-1 stream bits, m adder trees evaluating consecutive window positions
// per cycle, a comparator tree selecting the maximum.
class ArchState {
public:
    ArchState(const FrameConfig& cfg, const Syncword& sync,
              const ScanOptions& options = {});

    // Feed the next block of stream bits (m per step; the final step of a
    // stream may be shorter). Returns the events emitted this cycle.
    std::vector<DetectionEvent> step(const BitStream& bits);

    size_t bits_consumed() const { return consumed_; }

private:
    size_t k_, m_, n_;
    size_t threshold_;
    bool suspend_;
    std::array<BitStream, 4> variants_;
    std::vector<uint8_t> reg_;  // trailing m+k-1 bits, oldest first
    size_t consumed_ = 0;
    size_t next_eval_ = 0;  // first window position not yet evaluated
};

struct ResourceReport {
    size_t xnor_gates = 0;
    size_t adders = 0;
    size_t comparators = 0;
    size_t register_bits = 0;
    size_t adder_tree_depth = 0;
    size_t comparator_tree_depth = 0;
    size_t bits_per_cycle = 0;
};

ResourceReport arch_resources(size_t k, size_t m);

// Events CSV: header "pos,corr,rot" plus one row per event.
std::string events_csv(const std::vector<DetectionEvent>& events);

}  // namespace longsync
