#pragma once

#include <optional>
#include <string>
#include <vector>

#include "longsync/bitstream.hpp"

namespace longsync {

// P(X >= threshold) for X ~ Binomial(trials, p). Log-space terms with
// compensated summation; good to better than 1e-9 relative error for the
// syncword sizes in use (k up to several hundred).
double binom_tail(size_t trials, double p, size_t threshold);

// Per-position probability that i.i.d. random bits reach the correlation
// threshold: Binomial(k, 1/2) upper tail at T.
double false_alarm_prob(size_t k, size_t threshold);

// Probability that a true syncword corrupted by a binary symmetric channel
// at the given bit error rate still reaches the threshold.
double detection_prob(size_t k, size_t threshold, double ber);

// Smallest T with false_alarm_prob(k, T) <= fa_max, provided detection at
// that T stays near-certain (>= 0.999) at ber_max. nullopt when infeasible.
std::optional<size_t> recommend_threshold(size_t k, double ber_max, double fa_max);

struct FserReport {
    std::string label;
    double noise_voltage = 0.0;
    double snr_db = 0.0;
    size_t frames_total = 0;
    size_t frames_detected = 0;
    size_t frames_missed = 0;
    size_t false_alarms = 0;
    double fser = 0.0;

    // CSV row: label,noise_voltage,snr_db,total,detected,missed,false_alarms,fser
    std::string csv_row() const;
    static std::string csv_header();
};

// Sequential fuzzy matching of extracted payloads against the transmitted
// originals. A payload matches the first original at/after the cursor with
// Hamming distance <= delta*n; skipped originals are missed, unmatched
// extractions are false alarms.
FserReport match_payloads(const std::vector<BitStream>& originals,
                          const std::vector<BitStream>& extracted,
                          double delta = 0.3);

double ber_measure(const BitStream& a, const BitStream& b);

}  // namespace longsync
