#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "longsync/bitstream.hpp"

namespace longsync {

using cfloat = std::complex<float>;

// Complex baseband sample sequence.
struct IqStream {
    std::vector<cfloat> samples;
    double sample_rate = 32000.0;
    int sps = 1;  // samples per symbol (1 for symbol-rate streams)
};

struct ModemParams {
    int sps = 4;
    double excess_bw = 0.35;      // RRC roll-off
    int rrc_ntaps = 45;           // odd
    double sync_loop_bw = 0.045;  // normalized, per symbol
    double sync_damping = 1.0;
    double costas_loop_bw = 0.0628;

    void validate() const;
};

// Gray-coded QPSK, unit power:
//   00 -> (+1+i)/sqrt2   01 -> (-1+i)/sqrt2
//   11 -> (-1-i)/sqrt2   10 -> (+1-i)/sqrt2
// Pair order is (b1, b0): the first bit of the pair selects the I sign.
IqStream qpsk_map(const BitStream& bits);
BitStream hard_decide(const IqStream& symbols);

// Apply a rho*90 degree constellation rotation to a bit stream, pairwise.
// rotate_bits(b, rho) is what the receiver decodes when its constellation
// reference is rotated by rho*90 degrees relative to the transmitter.
BitStream rotate_bits(const BitStream& bits, int rho);

// Root-raised-cosine impulse response, unit energy, centered. Singular
// points (t = 0 and |t| = T/(4a)) take their analytic limits.
std::vector<double> rrc_taps(int sps, double excess_bw, int ntaps);

// Transmit filter: zero-stuff by sps, convolve with the RRC, scale by
// sqrt(sps) so the shaped stream has unit mean power.
IqStream pulse_shape(const IqStream& symbols, const ModemParams& params);

// Receive filter: same RRC kernel, no gain scaling.
IqStream matched_filter(const IqStream& rx, const ModemParams& params);

IqStream symbol_sync(const IqStream& rx, const ModemParams& params);
IqStream costas(const IqStream& symbols, const ModemParams& params);

// matched_filter -> symbol_sync -> costas -> hard_decide
BitStream demodulate(const IqStream& rx, const ModemParams& params);

// --- streaming stages (chunked processing, state carried across calls) ---

class FirFilter {
public:
    FirFilter(std::vector<double> taps, double gain = 1.0);
    // Streaming convolution; emits one output per input sample.
    void process(const cfloat* in, size_t n, std::vector<cfloat>& out);
    // Flush the trailing ntaps-1 samples of the full convolution.
    void flush(std::vector<cfloat>& out);

private:
    std::vector<float> taps_;
    std::vector<cfloat> hist_;
    size_t pos_ = 0;
};

// ML timing recovery: cubic (Farrow) interpolation, timing error detector
// e = sgn(Re x)*Re x' + sgn(Im x)*Im x', proportional-integral loop on the
// fractional sampling phase. The period integrator is leaky and clamped to
// +-1% of a symbol so a burst of garbage errors cannot walk the clock
// estimate outside the plausible oscillator tolerance.
class SymbolSynchronizer {
public:
    explicit SymbolSynchronizer(const ModemParams& params);
    void process(const cfloat* in, size_t n, std::vector<cfloat>& out);
    double period_adjustment() const { return period_adj_; }

private:
    double sps_;
    double kp_, ki_;
    double max_adj_;
    double pos_ = 1.0;           // next symbol instant, in samples rel. to buffer
    double period_adj_ = 0.0;    // integrator
    std::vector<cfloat> buf_;    // pending samples (keeps a 3-sample tail)
};

// QPSK (4th-power) Costas loop. Error is amplitude-normalized with a floor
// so the loop neither stalls in fades nor overreacts to strong samples;
// the frequency accumulator is clamped to a small range.
class CostasLoop {
public:
    explicit CostasLoop(const ModemParams& params);
    void process(const cfloat* in, size_t n, std::vector<cfloat>& out);
    double phase() const { return phase_; }
    double freq() const { return freq_; }

private:
    double kp_, ki_;
    double phase_ = 0.0;
    double freq_ = 0.0;
};

// One-pole running power normalizer in front of the timing loop.
class Agc {
public:
    explicit Agc(double target_power = 1.0, double rate = 1e-4)
        : target_(target_power), rate_(rate) {}
    void process(const cfloat* in, size_t n, std::vector<cfloat>& out);

private:
    double target_;
    double rate_;
    double power_ = -1.0;  // primed from the first chunk
};

}  // namespace longsync
