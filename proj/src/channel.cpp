#include "longsync/channel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace longsync {

void ChannelParams::validate() const {
    if (noise_voltage < 0.0) throw ConfigError("noise_voltage must be >= 0");
    if (n_sinusoids < 1) throw ConfigError("n_sinusoids must be >= 1");
    if (!(doppler_norm >= 0.0 && doppler_norm < 0.5)) throw ConfigError("doppler_norm outside [0, 0.5)");
    if (!(timing_ratio >= 0.99 && timing_ratio <= 1.01)) throw ConfigError("timing_ratio outside [0.99, 1.01]");
}

// --- FadingChannel ---

FadingChannel::FadingChannel(int n_sinusoids, double doppler_norm, uint64_t seed) {
    SplitMix64 rng(seed);
    const int N = n_sinusoids;
    double common_rot = 2.0 * M_PI * rng.uniform();
    omegas_.resize(N);
    phis_.resize(N);
    phasors_.resize(N);
    rotations_.resize(N);
    for (int q = 0; q < N; ++q) {
        double alpha = (2.0 * M_PI * (q + 0.5) + common_rot) / N;
        omegas_[q] = 2.0 * M_PI * doppler_norm * std::cos(alpha);
        phis_[q] = 2.0 * M_PI * rng.uniform();
        phasors_[q] = std::polar(1.0, phis_[q]);
        rotations_[q] = std::polar(1.0, omegas_[q]);
    }
    norm_ = 1.0 / std::sqrt(static_cast<double>(N));
}

std::complex<double> FadingChannel::gain_at(uint64_t t) const {
    std::complex<double> h(0.0, 0.0);
    for (size_t q = 0; q < omegas_.size(); ++q)
        h += std::polar(1.0, omegas_[q] * static_cast<double>(t) + phis_[q]);
    return h * norm_;
}

void FadingChannel::process(const cfloat* in, size_t n, std::vector<cfloat>& out) {
    out.reserve(out.size() + n);
    const size_t N = phasors_.size();
    for (size_t i = 0; i < n; ++i) {
        std::complex<double> h(0.0, 0.0);
        for (size_t q = 0; q < N; ++q) h += phasors_[q];
        h *= norm_;
        out.push_back(in[i] * cfloat(static_cast<float>(h.real()),
                                     static_cast<float>(h.imag())));
        for (size_t q = 0; q < N; ++q) phasors_[q] *= rotations_[q];
        if ((++t_ & 0xfff) == 0) {
            // keep recurrence drift in check
            for (size_t q = 0; q < N; ++q)
                phasors_[q] /= std::abs(phasors_[q]);
        }
    }
}

// --- FreqOffsetStage ---

void FreqOffsetStage::process(const cfloat* in, size_t n, std::vector<cfloat>& out) {
    out.reserve(out.size() + n);
    for (size_t i = 0; i < n; ++i) {
        double ph = 2.0 * M_PI * step_ * static_cast<double>(t_++);
        ph = std::remainder(ph, 2.0 * M_PI);
        out.push_back(in[i] * cfloat(static_cast<float>(std::cos(ph)),
                                     static_cast<float>(std::sin(ph))));
    }
}

// --- TimingOffsetStage ---

TimingOffsetStage::TimingOffsetStage(double ratio) : ratio_(ratio) {
    if (!(ratio >= 0.99 && ratio <= 1.01)) throw ConfigError("timing_ratio outside [0.99, 1.01]");
}

void TimingOffsetStage::process(const cfloat* in, size_t n, std::vector<cfloat>& out) {
    buf_.insert(buf_.end(), in, in + n);
    while (pos_ + 2.0 < static_cast<double>(buf_.size())) {
        size_t i = static_cast<size_t>(pos_);
        float f = static_cast<float>(pos_ - static_cast<double>(i));
        cfloat ym1 = buf_[i - 1], y0 = buf_[i], y1 = buf_[i + 1], y2 = buf_[i + 2];
        cfloat c0 = y0;
        cfloat c1 = 0.5f * (y1 - ym1);
        cfloat c2 = ym1 - 2.5f * y0 + 2.0f * y1 - 0.5f * y2;
        cfloat c3 = 0.5f * (y2 - ym1) + 1.5f * (y0 - y1);
        out.push_back(((c3 * f + c2) * f + c1) * f + c0);
        pos_ += ratio_;
    }
    size_t keep_from = pos_ >= 1.0 ? static_cast<size_t>(pos_) - 1 : 0;
    keep_from = std::min(keep_from, buf_.size());
    if (keep_from > 0) {
        buf_.erase(buf_.begin(), buf_.begin() + static_cast<ptrdiff_t>(keep_from));
        pos_ -= static_cast<double>(keep_from);
    }
}

// --- AwgnStage ---

AwgnStage::AwgnStage(double noise_voltage, uint64_t seed)
    : gauss_(seed), sigma_dim_(noise_voltage / std::sqrt(2.0)) {
    if (noise_voltage < 0.0) throw ConfigError("noise_voltage must be >= 0");
}

void AwgnStage::process(const cfloat* in, size_t n, std::vector<cfloat>& out) {
    out.reserve(out.size() + n);
    if (sigma_dim_ == 0.0) {
        out.insert(out.end(), in, in + n);
        return;
    }
    for (size_t i = 0; i < n; ++i) {
        float nr = static_cast<float>(sigma_dim_ * gauss_.next());
        float ni = static_cast<float>(sigma_dim_ * gauss_.next());
        out.push_back(in[i] + cfloat(nr, ni));
    }
}

// --- one-shot wrappers ---

namespace {
IqStream like(const IqStream& x) {
    IqStream out;
    out.sample_rate = x.sample_rate;
    out.sps = x.sps;
    return out;
}
}  // namespace

IqStream awgn(const IqStream& x, double noise_voltage, uint64_t seed) {
    AwgnStage stage(noise_voltage, seed);
    IqStream out = like(x);
    stage.process(x.samples.data(), x.samples.size(), out.samples);
    return out;
}

IqStream rayleigh_fade(const IqStream& x, const ChannelParams& params) {
    params.validate();
    FadingChannel stage(params.n_sinusoids, params.doppler_norm, params.seed);
    IqStream out = like(x);
    stage.process(x.samples.data(), x.samples.size(), out.samples);
    return out;
}

IqStream freq_offset(const IqStream& x, double freq_offset_norm) {
    FreqOffsetStage stage(freq_offset_norm);
    IqStream out = like(x);
    stage.process(x.samples.data(), x.samples.size(), out.samples);
    return out;
}

IqStream timing_offset(const IqStream& x, double timing_ratio) {
    TimingOffsetStage stage(timing_ratio);
    IqStream out = like(x);
    stage.process(x.samples.data(), x.samples.size(), out.samples);
    return out;
}

double snr_from_noise_voltage(const IqStream& x, double noise_voltage) {
    if (noise_voltage <= 0.0) return std::numeric_limits<double>::infinity();
    double p = 0.0;
    for (const auto& s : x.samples) p += std::norm(s);
    if (!x.samples.empty()) p /= static_cast<double>(x.samples.size());
    return 10.0 * std::log10(p / (noise_voltage * noise_voltage));
}

IqStream apply_channel(const IqStream& x, const ChannelParams& params) {
    params.validate();
    IqStream cur = x;
    if (params.fading_enabled)
        cur = rayleigh_fade(cur, params);
    if (params.freq_offset_norm != 0.0)
        cur = freq_offset(cur, params.freq_offset_norm);
    if (params.timing_ratio != 1.0)
        cur = timing_offset(cur, params.timing_ratio);
    if (params.noise_voltage > 0.0)
        cur = awgn(cur, params.noise_voltage, derive_seed(params.seed, 0x41574e));
    return cur;
}

}  // namespace longsync
