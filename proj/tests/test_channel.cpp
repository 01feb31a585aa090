#include "doctest.h"
#include "longsync/channel.hpp"
#include "longsync/rng.hpp"

#include <algorithm>
#include <cmath>

using namespace longsync;

namespace {

IqStream ones(size_t n) {
    IqStream x;
    x.sps = 1;
    x.samples.assign(n, cfloat(1.0f, 0.0f));
    return x;
}

IqStream tone(size_t n, double w) {
    IqStream x;
    x.sps = 1;
    for (size_t i = 0; i < n; ++i)
        x.samples.push_back(std::polar(1.0f, static_cast<float>(w * static_cast<double>(i))));
    return x;
}

}  // namespace

TEST_CASE("channel parameter validation") {
    ChannelParams p;
    CHECK_NOTHROW(p.validate());
    ChannelParams bad = p;
    bad.noise_voltage = -0.1;
    CHECK_THROWS_AS(bad.validate(), ConfigError);
    bad = p;
    bad.n_sinusoids = 0;
    CHECK_THROWS_AS(bad.validate(), ConfigError);
    bad = p;
    bad.doppler_norm = 0.5;
    CHECK_THROWS_AS(bad.validate(), ConfigError);
    bad = p;
    bad.timing_ratio = 1.02;
    CHECK_THROWS_AS(bad.validate(), ConfigError);
}

TEST_CASE("awgn: zero noise is the identity; statistics match") {
    auto x = ones(50000);
    auto y0 = awgn(x, 0.0, 1);
    REQUIRE(y0.samples.size() == x.samples.size());
    for (size_t i = 0; i < 100; ++i) CHECK(y0.samples[i] == x.samples[i]);

    double nv = 0.8;
    auto y = awgn(x, nv, 2);
    double pr = 0.0, pi = 0.0, mr = 0.0, mi = 0.0;
    for (size_t i = 0; i < y.samples.size(); ++i) {
        double dr = y.samples[i].real() - 1.0;
        double di = y.samples[i].imag();
        mr += dr;
        mi += di;
        pr += dr * dr;
        pi += di * di;
    }
    size_t n = y.samples.size();
    // complex noise power nv^2, split evenly across dimensions, zero mean
    CHECK(pr / n == doctest::Approx(nv * nv / 2).epsilon(0.03));
    CHECK(pi / n == doctest::Approx(nv * nv / 2).epsilon(0.03));
    CHECK(std::abs(mr / n) < 0.02);
    CHECK(std::abs(mi / n) < 0.02);

    // seeded reproducibility
    auto y2 = awgn(x, nv, 2);
    CHECK(y2.samples[123] == y.samples[123]);
    auto y3 = awgn(x, nv, 3);
    CHECK(y3.samples[123] != y.samples[123]);
    CHECK_THROWS_AS(awgn(x, -1.0, 1), ConfigError);
}

TEST_CASE("snr_from_noise_voltage") {
    auto x = ones(100);
    CHECK(snr_from_noise_voltage(x, 1.0) == doctest::Approx(0.0));
    CHECK(snr_from_noise_voltage(x, 0.5) == doctest::Approx(10.0 * std::log10(4.0)));
    CHECK(std::isinf(snr_from_noise_voltage(x, 0.0)));
    // amplitude 2 -> power 4
    for (auto& s : x.samples) s *= 2.0f;
    CHECK(snr_from_noise_voltage(x, 1.0) == doctest::Approx(10.0 * std::log10(4.0)));
}

TEST_CASE("fading: streaming recurrence matches the closed form") {
    FadingChannel ch(16, 1e-3, 9);
    auto x = ones(6000);
    std::vector<cfloat> out;
    ch.process(x.samples.data(), x.samples.size(), out);
    REQUIRE(out.size() == 6000);
    for (size_t t = 0; t < 6000; t += 37) {
        auto g = ch.gain_at(t);
        CHECK(out[t].real() == doctest::Approx(g.real()).epsilon(2e-4));
        CHECK(out[t].imag() == doctest::Approx(g.imag()).epsilon(2e-4));
    }
}

TEST_CASE("fading: unit mean power over realizations") {
    double acc = 0.0;
    size_t cnt = 0;
    for (uint64_t seed = 0; seed < 200; ++seed) {
        FadingChannel ch(16, 1e-3, seed);
        for (uint64_t t = 0; t < 10; ++t) {
            acc += std::norm(ch.gain_at(t * 70001));
            ++cnt;
        }
    }
    CHECK(acc / cnt == doctest::Approx(1.0).epsilon(0.03));
}

TEST_CASE("fading: envelope is Rayleigh (KS test)") {
    // widely spaced samples across many realizations: ~independent draws
    std::vector<double> env;
    env.reserve(4000);
    for (uint64_t seed = 0; seed < 400; ++seed) {
        FadingChannel ch(16, 1e-3, 1000 + seed);
        for (uint64_t t = 0; t < 10; ++t)
            env.push_back(std::abs(ch.gain_at(t * 100000)));
    }
    std::sort(env.begin(), env.end());
    double d = 0.0;
    size_t n = env.size();
    for (size_t i = 0; i < n; ++i) {
        double cdf = 1.0 - std::exp(-env[i] * env[i]);  // E|h|^2 = 1
        double lo = static_cast<double>(i) / n;
        double hi = static_cast<double>(i + 1) / n;
        d = std::max({d, std::abs(cdf - lo), std::abs(cdf - hi)});
    }
    // alpha = 0.01 critical value 1.628/sqrt(n)
    CHECK(d < 1.628 / std::sqrt(static_cast<double>(n)));
}

TEST_CASE("fading: autocorrelation follows J0(2 pi fD tau)") {
    const double fd = 1e-3;
    for (size_t tau : {0ul, 50ul, 100ul, 200ul, 400ul}) {
        std::complex<double> acc(0.0, 0.0);
        size_t cnt = 0;
        for (uint64_t seed = 0; seed < 150; ++seed) {
            FadingChannel ch(16, fd, 5000 + seed);
            for (uint64_t t0 = 0; t0 < 4; ++t0) {
                uint64_t t = t0 * 137911;
                acc += ch.gain_at(t) * std::conj(ch.gain_at(t + tau));
                ++cnt;
            }
        }
        double rho = acc.real() / static_cast<double>(cnt);
        double ref = std::cyl_bessel_j(0.0, 2.0 * M_PI * fd * static_cast<double>(tau));
        CHECK(rho == doctest::Approx(ref).epsilon(0.05));
    }
}

TEST_CASE("fading: doppler controls decorrelation speed") {
    // same seed, higher doppler -> faster envelope variation
    auto wiggle = [](double fd) {
        FadingChannel ch(16, fd, 77);
        auto x = ones(20000);
        std::vector<cfloat> out;
        ch.process(x.samples.data(), x.samples.size(), out);
        double acc = 0.0;
        for (size_t t = 1; t < out.size(); ++t)
            acc += std::abs(std::abs(out[t]) - std::abs(out[t - 1]));
        return acc;
    };
    CHECK(wiggle(1e-3) > 5.0 * wiggle(1e-5));
}

TEST_CASE("freq offset: rotation rate and additive composition") {
    double f = 3e-4;
    auto y = freq_offset(ones(5000), f);
    // sample t carries phase 2 pi f t
    for (size_t t : {0ul, 1ul, 100ul, 4999ul}) {
        double ph = 2.0 * M_PI * f * static_cast<double>(t);
        CHECK(y.samples[t].real() == doctest::Approx(std::cos(ph)).epsilon(1e-4));
        CHECK(y.samples[t].imag() == doctest::Approx(std::sin(ph)).epsilon(1e-4));
    }
    // applying f1 then f2 equals applying f1 + f2
    auto a = freq_offset(freq_offset(tone(3000, 0.1), 2e-4), 5e-4);
    auto b = freq_offset(tone(3000, 0.1), 7e-4);
    for (size_t t = 0; t < 3000; t += 100) {
        CHECK(a.samples[t].real() == doctest::Approx(b.samples[t].real()).epsilon(1e-4));
        CHECK(a.samples[t].imag() == doctest::Approx(b.samples[t].imag()).epsilon(1e-4));
    }
    // zero offset is the identity
    auto z = freq_offset(tone(100, 0.2), 0.0);
    CHECK(z.samples[57] == tone(100, 0.2).samples[57]);
}

TEST_CASE("timing offset: resampled tone lands on the analytic waveform") {
    double w = 0.3;
    for (double ratio : {0.995, 1.0, 1.0042}) {
        auto y = timing_offset(tone(4000, w), ratio);
        // output j interpolates input position 1 + j*ratio
        REQUIRE(y.samples.size() > 3900);
        for (size_t j = 10; j < y.samples.size(); j += 250) {
            double pos = 1.0 + static_cast<double>(j) * ratio;
            CHECK(y.samples[j].real() == doctest::Approx(std::cos(w * pos)).epsilon(2e-3));
            CHECK(y.samples[j].imag() == doctest::Approx(std::sin(w * pos)).epsilon(2e-3));
        }
    }
    CHECK_THROWS_AS(timing_offset(tone(100, 0.1), 1.5), ConfigError);
}

TEST_CASE("timing offset: chunked equals one-shot") {
    auto x = tone(3000, 0.17);
    auto ref = timing_offset(x, 1.003);
    TimingOffsetStage stage(1.003);
    std::vector<cfloat> got;
    for (size_t pos = 0; pos < x.samples.size();) {
        size_t n = std::min<size_t>(11 + pos % 29, x.samples.size() - pos);
        stage.process(x.samples.data() + pos, n, got);
        pos += n;
    }
    REQUIRE(got.size() == ref.samples.size());
    for (size_t i = 0; i < got.size(); i += 97) CHECK(got[i] == ref.samples[i]);
}

TEST_CASE("apply_channel: composition and defaults") {
    ChannelParams p;  // everything off
    auto x = tone(500, 0.2);
    auto y = apply_channel(x, p);
    REQUIRE(y.samples.size() == x.samples.size());
    CHECK(y.samples[123] == x.samples[123]);

    // noise only: equals the awgn stage with the derived seed
    p.noise_voltage = 0.5;
    p.seed = 42;
    auto yn = apply_channel(x, p);
    auto ref = awgn(x, 0.5, derive_seed(42, 0x41574e));
    CHECK(yn.samples[7] == ref.samples[7]);
    CHECK(yn.samples[400] == ref.samples[400]);

    // full chain changes the signal but keeps the sample budget sane
    p.fading_enabled = true;
    p.freq_offset_norm = 1e-4;
    p.timing_ratio = 1.001;
    auto yf = apply_channel(x, p);
    CHECK(yf.samples.size() >= x.samples.size() - 10);
    CHECK(yf.samples.size() <= x.samples.size());
}
