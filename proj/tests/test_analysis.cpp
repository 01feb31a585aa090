#include "doctest.h"
#include "longsync/analysis.hpp"
#include "longsync/rng.hpp"

#include <cmath>

using namespace longsync;

TEST_CASE("binom_tail: exact small cases") {
    // C(20,16..20)/2^20 = 6196/1048576, computed exactly by hand
    CHECK(binom_tail(20, 0.5, 16) == doctest::Approx(6196.0 / 1048576.0).epsilon(1e-12));
    // threshold 0 is certain; past trials impossible
    CHECK(binom_tail(20, 0.5, 0) == 1.0);
    CHECK(binom_tail(20, 0.5, 21) == 0.0);
    CHECK(binom_tail(20, 0.5, 1) == doctest::Approx(1.0 - 1.0 / 1048576.0).epsilon(1e-12));
    // degenerate p
    CHECK(binom_tail(10, 0.0, 1) == 0.0);
    CHECK(binom_tail(10, 0.0, 0) == 1.0);
    CHECK(binom_tail(10, 1.0, 10) == 1.0);
    // single trial
    CHECK(binom_tail(1, 0.3, 1) == doctest::Approx(0.3).epsilon(1e-12));
    CHECK_THROWS_AS(binom_tail(10, 1.5, 3), ConfigError);
}

TEST_CASE("binom_tail: exact rational references at production sizes") {
    // reference values computed with exact rational arithmetic
    CHECK(binom_tail(50, 0.3, 20) == doctest::Approx(0.08480259855382563).epsilon(1e-10));
    CHECK(false_alarm_prob(300, 210) == doctest::Approx(1.6526229272229305e-12).epsilon(1e-8));
    CHECK(false_alarm_prob(500, 350) == doctest::Approx(9.171233384919267e-20).epsilon(1e-8));
    CHECK(false_alarm_prob(300, 192) == doctest::Approx(7.103289951811348e-07).epsilon(1e-8));
}

TEST_CASE("binom_tail: complement identity and monotonicity") {
    // P(X >= t | p) + P(Y >= n-t+1 | 1-p) = 1 with Y the failure count
    for (size_t t = 0; t <= 40; ++t) {
        double upper = binom_tail(40, 0.37, t);
        double mirror = binom_tail(40, 0.63, 40 - t + 1);
        CHECK(upper + mirror == doctest::Approx(1.0).epsilon(1e-10));
        if (t > 0) CHECK(binom_tail(40, 0.37, t) <= binom_tail(40, 0.37, t - 1) + 1e-15);
    }
    // monotone in p
    CHECK(binom_tail(300, 0.85, 210) > binom_tail(300, 0.75, 210));
}

TEST_CASE("binom_tail agrees with Monte Carlo") {
    SplitMix64 g(314);
    const size_t trials = 200000;
    size_t hits = 0;
    for (size_t i = 0; i < trials; ++i) {
        size_t successes = 0;
        for (size_t j = 0; j < 30; ++j) successes += g.uniform() < 0.4;
        hits += successes >= 15;
    }
    double mc = static_cast<double>(hits) / trials;
    double exact = binom_tail(30, 0.4, 15);
    CHECK(std::abs(mc - exact) < 4.0 * std::sqrt(exact * (1 - exact) / trials) + 1e-4);
}

TEST_CASE("detection_prob at production operating point") {
    CHECK(detection_prob(300, 210, 0.1) > 1.0 - 1e-9);
    CHECK(detection_prob(300, 210, 0.0) == 1.0);
    // at 30% BER the expected correlation 0.7k sits right at T = 0.7k
    double d = detection_prob(300, 210, 0.3);
    CHECK(d > 0.35);
    CHECK(d < 0.65);
    CHECK_THROWS_AS(detection_prob(300, 210, 0.6), ConfigError);
}

TEST_CASE("recommend_threshold: exact crossing point") {
    // smallest T with P(Binom(300,1/2) >= T) <= 1e-6 is 192
    auto t = recommend_threshold(300, 0.2, 1e-6);
    REQUIRE(t.has_value());
    CHECK(*t == 192);
    CHECK(false_alarm_prob(300, *t) <= 1e-6);
    CHECK(false_alarm_prob(300, *t - 1) > 1e-6);
    CHECK(detection_prob(300, *t, 0.2) >= 1.0 - 1e-6);

    // reference operating point: fa_max 1e-9 feasible below the 0.7k threshold
    auto t9 = recommend_threshold(300, 0.2, 1e-9);
    REQUIRE(t9.has_value());
    CHECK(*t9 == 202);  // smallest T with P(Binom(300,1/2) >= T) <= 1e-9
    CHECK(*t9 <= 210);

    // tiny k cannot separate noise from a badly corrupted syncword
    CHECK(!recommend_threshold(10, 0.4, 1e-9).has_value());
    // detection-side infeasibility: worst-case BER pushes the mean below T
    CHECK(!recommend_threshold(300, 0.45, 1e-6).has_value());
    CHECK_THROWS_AS(recommend_threshold(300, 0.0, 1e-6), ConfigError);
    CHECK_THROWS_AS(recommend_threshold(300, 0.2, 0.0), ConfigError);
}

namespace {
BitStream bits_of(const char* s) {
    BitStream bs;
    for (; *s; ++s) bs.push_back(*s == '1');
    return bs;
}
}  // namespace

TEST_CASE("match_payloads: hand-constructed scenarios") {
    std::vector<BitStream> orig = {bits_of("00000000"), bits_of("11111111"),
                                   bits_of("00001111"), bits_of("11110000")};

    SUBCASE("perfect reception") {
        auto r = match_payloads(orig, orig, 0.3);
        CHECK(r.frames_total == 4);
        CHECK(r.frames_detected == 4);
        CHECK(r.frames_missed == 0);
        CHECK(r.false_alarms == 0);
        CHECK(r.fser == 0.0);
    }
    SUBCASE("fuzzy matching within delta") {
        std::vector<BitStream> rx = {bits_of("00000011"), bits_of("11101111"),
                                     bits_of("10001111"), bits_of("11110000")};
        auto r = match_payloads(orig, rx, 0.3);  // up to 2 of 8 bits may differ
        CHECK(r.frames_detected == 4);
        CHECK(r.fser == 0.0);
    }
    SUBCASE("missed middle frame") {
        std::vector<BitStream> rx = {bits_of("00000000"), bits_of("00001111"),
                                     bits_of("11110000")};
        auto r = match_payloads(orig, rx, 0.3);
        CHECK(r.frames_detected == 3);
        CHECK(r.frames_missed == 1);
        CHECK(r.false_alarms == 0);
        CHECK(r.fser == doctest::Approx(0.25));
    }
    SUBCASE("false alarm does not advance the cursor") {
        std::vector<BitStream> rx = {bits_of("00000000"), bits_of("01010101"),
                                     bits_of("11111111"), bits_of("00001111"),
                                     bits_of("11110000")};
        auto r = match_payloads(orig, rx, 0.2);
        CHECK(r.frames_detected == 4);
        CHECK(r.false_alarms == 1);
        CHECK(r.fser == 0.0);
    }
    SUBCASE("matching is strictly sequential") {
        // receiving frame 3 first consumes the cursor past 0..2
        std::vector<BitStream> rx = {bits_of("11110000"), bits_of("00000000")};
        auto r = match_payloads(orig, rx, 0.2);
        CHECK(r.frames_detected == 1);
        CHECK(r.frames_missed == 3);
        CHECK(r.false_alarms == 1);
    }
    SUBCASE("empty inputs") {
        auto r = match_payloads({}, {}, 0.3);
        CHECK(r.frames_total == 0);
        CHECK(r.fser == 0.0);
        auto r2 = match_payloads(orig, {}, 0.3);
        CHECK(r2.frames_missed == 4);
        CHECK(r2.fser == 1.0);
    }
    SUBCASE("validation") {
        CHECK_THROWS_AS(match_payloads(orig, {bits_of("000")}, 0.3), ConfigError);
        CHECK_THROWS_AS(match_payloads(orig, orig, 0.5), ConfigError);
    }
}

TEST_CASE("ber_measure") {
    CHECK(ber_measure(bits_of("0000"), bits_of("0101")) == doctest::Approx(0.5));
    CHECK(ber_measure(bits_of(""), bits_of("")) == 0.0);
    CHECK_THROWS_AS(ber_measure(bits_of("00"), bits_of("000")), ConfigError);
}

TEST_CASE("fser report csv") {
    FserReport r;
    r.label = "lab";
    r.noise_voltage = 0.5;
    r.snr_db = 3.0;
    r.frames_total = 10;
    r.frames_detected = 9;
    r.frames_missed = 1;
    r.false_alarms = 2;
    r.fser = 0.1;
    CHECK(FserReport::csv_header() ==
          "label,noise_voltage,snr_db,total,detected,missed,false_alarms,fser");
    CHECK(r.csv_row() == "lab,0.5,3,10,9,1,2,0.1");
}
