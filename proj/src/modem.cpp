#include "longsync/modem.hpp"

#include <algorithm>
#include <cmath>

namespace longsync {

namespace {

constexpr float kInvSqrt2 = 0.70710678118654752f;

// pair index: (b1 << 1) | b0
const cfloat kConstellation[4] = {
    {+kInvSqrt2, +kInvSqrt2},  // 00
    {-kInvSqrt2, +kInvSqrt2},  // 01
    {+kInvSqrt2, -kInvSqrt2},  // 10
    {-kInvSqrt2, -kInvSqrt2},  // 11
};

inline unsigned decide_pair(cfloat s) {
    // ties (exact zero) decide toward the positive half-plane
    bool i_neg = s.real() < 0.0f;
    bool q_neg = s.imag() < 0.0f;
    // (+,+)->00 (-,+)->01 (-,-)->11 (+,-)->10
    if (!i_neg && !q_neg) return 0b00;
    if (i_neg && !q_neg) return 0b01;
    if (i_neg && q_neg) return 0b11;
    return 0b10;
}

inline unsigned map_pair_index(unsigned b1, unsigned b0) { return (b1 << 1) | b0; }

void loop_gains(double bw, double damping, double& kp, double& ki) {
    double denom = 1.0 + 2.0 * damping * bw + bw * bw;
    kp = 4.0 * damping * bw / denom;
    ki = 4.0 * bw * bw / denom;
}

}  // namespace

void ModemParams::validate() const {
    if (sps < 2) throw ConfigError("sps must be >= 2");
    if (!(excess_bw > 0.0 && excess_bw <= 1.0)) throw ConfigError("excess_bw outside (0, 1]");
    if (rrc_ntaps < 3 || rrc_ntaps % 2 == 0) throw ConfigError("rrc_ntaps must be odd and >= 3");
    if (!(sync_loop_bw > 0.0)) throw ConfigError("sync_loop_bw must be > 0");
    if (!(sync_damping > 0.0)) throw ConfigError("sync_damping must be > 0");
    if (!(costas_loop_bw > 0.0)) throw ConfigError("costas_loop_bw must be > 0");
}

IqStream qpsk_map(const BitStream& bits) {
    if (bits.len() % 2 != 0) throw ConfigError("qpsk_map: odd bit count");
    IqStream out;
    out.sps = 1;
    out.samples.reserve(bits.len() / 2);
    for (size_t i = 0; i < bits.len(); i += 2) {
        unsigned idx = map_pair_index(bits.get(i), bits.get(i + 1));
        out.samples.push_back(kConstellation[idx]);
    }
    return out;
}

BitStream hard_decide(const IqStream& symbols) {
    BitStream bits(2 * symbols.samples.size());
    for (size_t s = 0; s < symbols.samples.size(); ++s) {
        unsigned pair = decide_pair(symbols.samples[s]);
        bits.set(2 * s, (pair >> 1) & 1u);
        bits.set(2 * s + 1, pair & 1u);
    }
    return bits;
}

BitStream rotate_bits(const BitStream& bits, int rho) {
    if (bits.len() % 2 != 0) throw ConfigError("rotate_bits: odd bit count");
    rho = ((rho % 4) + 4) % 4;
    const cfloat rot[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    // derive the pair permutation from the symbol map itself
    unsigned perm[4];
    for (unsigned p = 0; p < 4; ++p)
        perm[p] = decide_pair(kConstellation[p] * rot[rho]);
    BitStream out(bits.len());
    for (size_t i = 0; i < bits.len(); i += 2) {
        unsigned p = map_pair_index(bits.get(i), bits.get(i + 1));
        unsigned q = perm[p];
        out.set(i, (q >> 1) & 1u);
        out.set(i + 1, q & 1u);
    }
    return out;
}

std::vector<double> rrc_taps(int sps, double excess_bw, int ntaps) {
    if (ntaps < 3 || ntaps % 2 == 0) throw ConfigError("rrc_taps: ntaps must be odd and >= 3");
    if (!(excess_bw > 0.0 && excess_bw <= 1.0)) throw ConfigError("rrc_taps: alpha outside (0, 1]");
    const double a = excess_bw;
    std::vector<double> h(ntaps);
    const int c = (ntaps - 1) / 2;
    for (int i = 0; i < ntaps; ++i) {
        double t = static_cast<double>(i - c) / sps;  // in symbol periods
        double v;
        if (std::abs(t) < 1e-10) {
            v = 1.0 + a * (4.0 / M_PI - 1.0);
        } else if (std::abs(std::abs(t) - 1.0 / (4.0 * a)) < 1e-10) {
            v = (a / std::sqrt(2.0)) *
                ((1.0 + 2.0 / M_PI) * std::sin(M_PI / (4.0 * a)) +
                 (1.0 - 2.0 / M_PI) * std::cos(M_PI / (4.0 * a)));
        } else {
            v = (std::sin(M_PI * t * (1.0 - a)) +
                 4.0 * a * t * std::cos(M_PI * t * (1.0 + a))) /
                (M_PI * t * (1.0 - 16.0 * a * a * t * t));
        }
        h[i] = v;
    }
    double energy = 0.0;
    for (double v : h) energy += v * v;
    double norm = 1.0 / std::sqrt(energy);
    for (double& v : h) v *= norm;
    return h;
}

// --- FirFilter ---

FirFilter::FirFilter(std::vector<double> taps, double gain) {
    taps_.reserve(taps.size());
    for (double t : taps) taps_.push_back(static_cast<float>(t * gain));
    hist_.assign(taps_.size() - 1, cfloat(0, 0));
}

void FirFilter::process(const cfloat* in, size_t n, std::vector<cfloat>& out) {
    const size_t nt = taps_.size();
    const size_t h = nt - 1;
    // contiguous delay line: [history | input]
    std::vector<cfloat> line;
    line.reserve(h + n);
    line.insert(line.end(), hist_.begin(), hist_.end());
    line.insert(line.end(), in, in + n);
    out.reserve(out.size() + n);
    for (size_t i = 0; i < n; ++i) {
        const cfloat* x = line.data() + i;
        float re = 0.0f, im = 0.0f;
        for (size_t j = 0; j < nt; ++j) {
            // taps reversed: output = sum taps[j] * x[n - j]
            float tj = taps_[nt - 1 - j];
            re += tj * x[j].real();
            im += tj * x[j].imag();
        }
        out.emplace_back(re, im);
    }
    if (n >= h) {
        hist_.assign(in + n - h, in + n);
    } else {
        hist_.erase(hist_.begin(), hist_.begin() + n);
        hist_.insert(hist_.end(), in, in + n);
    }
}

void FirFilter::flush(std::vector<cfloat>& out) {
    std::vector<cfloat> zeros(taps_.size() - 1, cfloat(0, 0));
    if (!zeros.empty()) process(zeros.data(), zeros.size(), out);
}

IqStream pulse_shape(const IqStream& symbols, const ModemParams& params) {
    params.validate();
    auto taps = rrc_taps(params.sps, params.excess_bw, params.rrc_ntaps);
    FirFilter fir(taps, std::sqrt(static_cast<double>(params.sps)));
    IqStream out;
    out.sps = params.sps;
    out.sample_rate = symbols.sample_rate * params.sps;
    std::vector<cfloat> up(symbols.samples.size() * params.sps, cfloat(0, 0));
    for (size_t i = 0; i < symbols.samples.size(); ++i)
        up[i * params.sps] = symbols.samples[i];
    fir.process(up.data(), up.size(), out.samples);
    fir.flush(out.samples);  // full convolution: len*sps + ntaps - 1
    return out;
}

IqStream matched_filter(const IqStream& rx, const ModemParams& params) {
    params.validate();
    auto taps = rrc_taps(params.sps, params.excess_bw, params.rrc_ntaps);
    FirFilter fir(taps);
    IqStream out;
    out.sps = rx.sps;
    out.sample_rate = rx.sample_rate;
    fir.process(rx.samples.data(), rx.samples.size(), out.samples);
    fir.flush(out.samples);
    return out;
}

// --- SymbolSynchronizer ---

SymbolSynchronizer::SymbolSynchronizer(const ModemParams& params)
    : sps_(params.sps) {
    params.validate();
    loop_gains(params.sync_loop_bw, params.sync_damping, kp_, ki_);
    max_adj_ = 0.01 * sps_;  // +-1% clock tolerance
}

void SymbolSynchronizer::process(const cfloat* in, size_t n, std::vector<cfloat>& out) {
    buf_.insert(buf_.end(), in, in + n);
    constexpr double kLeak = 1e-4;
    while (pos_ + 2.0 < static_cast<double>(buf_.size())) {
        size_t i = static_cast<size_t>(pos_);
        double f = pos_ - static_cast<double>(i);
        // Farrow cubic over buf_[i-1 .. i+2]
        cfloat ym1 = buf_[i - 1], y0 = buf_[i], y1 = buf_[i + 1], y2 = buf_[i + 2];
        cfloat c0 = y0;
        cfloat c1 = 0.5f * (y1 - ym1);
        cfloat c2 = ym1 - 2.5f * y0 + 2.0f * y1 - 0.5f * y2;
        cfloat c3 = 0.5f * (y2 - ym1) + 1.5f * (y0 - y1);
        float ff = static_cast<float>(f);
        cfloat v = ((c3 * ff + c2) * ff + c1) * ff + c0;
        cfloat dv = (3.0f * c3 * ff + 2.0f * c2) * ff + c1;
        out.push_back(v);
        double e = (v.real() >= 0 ? 1.0 : -1.0) * dv.real() +
                   (v.imag() >= 0 ? 1.0 : -1.0) * dv.imag();
        e = std::clamp(e, -1.0, 1.0);
        period_adj_ = (1.0 - kLeak) * period_adj_ + ki_ * e;
        period_adj_ = std::clamp(period_adj_, -max_adj_, max_adj_);
        pos_ += sps_ + period_adj_ + kp_ * e;
    }
    // drop consumed samples, keep the interpolation tail; pos_ may overshoot
    // the buffer by up to one symbol after the final iteration
    size_t keep_from = pos_ >= 1.0 ? static_cast<size_t>(pos_) - 1 : 0;
    keep_from = std::min(keep_from, buf_.size());
    if (keep_from > 0) {
        buf_.erase(buf_.begin(), buf_.begin() + static_cast<ptrdiff_t>(keep_from));
        pos_ -= static_cast<double>(keep_from);
    }
}

IqStream symbol_sync(const IqStream& rx, const ModemParams& params) {
    if (rx.sps < 2) throw ConfigError("symbol_sync: input must be oversampled (sps >= 2)");
    SymbolSynchronizer sync(params);
    IqStream out;
    out.sps = 1;
    out.sample_rate = rx.sample_rate / params.sps;
    sync.process(rx.samples.data(), rx.samples.size(), out.samples);
    return out;
}

// --- CostasLoop ---

CostasLoop::CostasLoop(const ModemParams& params) {
    params.validate();
    loop_gains(params.costas_loop_bw, 0.707, kp_, ki_);
}

void CostasLoop::process(const cfloat* in, size_t n, std::vector<cfloat>& out) {
    constexpr double kFreqClamp = 0.05;  // rad/symbol
    constexpr double kAmpFloor = 1.0 / 3.0;
    out.reserve(out.size() + n);
    for (size_t s = 0; s < n; ++s) {
        float cp = static_cast<float>(std::cos(phase_));
        float sp = static_cast<float>(std::sin(phase_));
        cfloat v = in[s] * cfloat(cp, -sp);
        out.push_back(v);
        double e = (v.real() >= 0 ? 1.0 : -1.0) * v.imag() -
                   (v.imag() >= 0 ? 1.0 : -1.0) * v.real();
        double amp = std::abs(v);
        e /= std::max(amp, kAmpFloor);
        e = std::clamp(e, -1.0, 1.0);
        freq_ = std::clamp(freq_ + ki_ * e, -kFreqClamp, kFreqClamp);
        phase_ += freq_ + kp_ * e;
        if (phase_ > 2.0 * M_PI) phase_ -= 2.0 * M_PI;
        if (phase_ < -2.0 * M_PI) phase_ += 2.0 * M_PI;
    }
}

IqStream costas(const IqStream& symbols, const ModemParams& params) {
    if (symbols.sps != 1) throw ConfigError("costas: expects a symbol-rate stream (sps = 1)");
    CostasLoop loop(params);
    IqStream out;
    out.sps = 1;
    out.sample_rate = symbols.sample_rate;
    loop.process(symbols.samples.data(), symbols.samples.size(), out.samples);
    return out;
}

// --- Agc ---

void Agc::process(const cfloat* in, size_t n, std::vector<cfloat>& out) {
    if (n == 0) return;
    if (power_ < 0.0) {
        double p = 0.0;
        for (size_t i = 0; i < n; ++i) p += std::norm(in[i]);
        power_ = std::max(p / static_cast<double>(n), 1e-12);
    }
    out.reserve(out.size() + n);
    for (size_t i = 0; i < n; ++i) {
        power_ += rate_ * (std::norm(in[i]) - power_);
        float g = static_cast<float>(std::sqrt(target_ / std::max(power_, 1e-12)));
        out.push_back(in[i] * g);
    }
}

BitStream demodulate(const IqStream& rx, const ModemParams& params) {
    params.validate();
    if (rx.samples.empty()) return BitStream();
    IqStream mf = matched_filter(rx, params);
    Agc agc;
    std::vector<cfloat> lev;
    agc.process(mf.samples.data(), mf.samples.size(), lev);
    mf.samples = std::move(lev);
    IqStream symbols = symbol_sync(mf, params);
    IqStream locked = costas(symbols, params);
    return hard_decide(locked);
}

}  // namespace longsync
