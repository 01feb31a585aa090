#pragma once

#include <cstdint>
#include <vector>

#include "longsync/modem.hpp"
#include "longsync/rng.hpp"

namespace longsync {

struct ChannelParams {
    double noise_voltage = 0.0;   // complex noise amplitude (std dev)
    int n_sinusoids = 16;
    double doppler_norm = 1e-3;   // f_D * T_sample
    double freq_offset_norm = 0.0;
    double timing_ratio = 1.0;
    bool fading_enabled = false;
    uint64_t seed = 0;

    void validate() const;
};

// --- one-shot operations ---

IqStream awgn(const IqStream& x, double noise_voltage, uint64_t seed);
IqStream rayleigh_fade(const IqStream& x, const ChannelParams& params);
IqStream freq_offset(const IqStream& x, double freq_offset_norm);
IqStream timing_offset(const IqStream& x, double timing_ratio);

// 10*log10(mean |x|^2 / noise_voltage^2); +inf sentinel for zero noise.
double snr_from_noise_voltage(const IqStream& x, double noise_voltage);

// Full impairment chain in declared order:
// fading -> frequency offset -> timing offset -> AWGN.
IqStream apply_channel(const IqStream& x, const ChannelParams& params);

// --- streaming stages ---

// Jakes-style sum of sinusoids, no line-of-sight component. Arrival angles
// are stratified over the circle with a random common rotation and each
// sinusoid carries an independent random phase, so E|h|^2 = 1 and the
// autocorrelation follows J0(2 pi f_D tau). Phasors advance by recurrence.
class FadingChannel {
public:
    FadingChannel(int n_sinusoids, double doppler_norm, uint64_t seed);
    void process(const cfloat* in, size_t n, std::vector<cfloat>& out);
    // Channel gain at an absolute sample index (closed form, for statistics).
    std::complex<double> gain_at(uint64_t t) const;

private:
    std::vector<std::complex<double>> phasors_;
    std::vector<std::complex<double>> rotations_;
    std::vector<double> omegas_;
    std::vector<double> phis_;
    double norm_;
    uint64_t t_ = 0;
};

class FreqOffsetStage {
public:
    explicit FreqOffsetStage(double freq_offset_norm) : step_(freq_offset_norm) {}
    void process(const cfloat* in, size_t n, std::vector<cfloat>& out);

private:
    double step_;
    uint64_t t_ = 0;
};

// Cubic resampler modelling a receiver clock running at `ratio` times the
// transmitter clock.
class TimingOffsetStage {
public:
    explicit TimingOffsetStage(double ratio);
    void process(const cfloat* in, size_t n, std::vector<cfloat>& out);

private:
    double ratio_;
    double pos_ = 1.0;
    std::vector<cfloat> buf_;
};

class AwgnStage {
public:
    AwgnStage(double noise_voltage, uint64_t seed);
    void process(const cfloat* in, size_t n, std::vector<cfloat>& out);

private:
    GaussianGen gauss_;
    double sigma_dim_;  // per-dimension std dev = noise_voltage / sqrt(2)
};

}  // namespace longsync
