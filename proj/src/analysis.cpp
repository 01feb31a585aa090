#include "longsync/analysis.hpp"

#include <cmath>
#include <sstream>

namespace longsync {

double binom_tail(size_t trials, double p, size_t threshold) {
    if (p < 0.0 || p > 1.0) throw ConfigError("binom_tail: p outside [0, 1]");
    if (threshold == 0) return 1.0;
    if (threshold > trials) return 0.0;
    if (p == 0.0) return 0.0;  // X = 0 a.s., threshold >= 1 here
    if (p == 1.0) return 1.0;  // X = trials >= threshold here

    const double n = static_cast<double>(trials);
    const double lp = std::log(p);
    const double lq = std::log1p(-p);
    // Sum the smaller tail, Kahan-compensated, then complement if needed.
    const bool sum_upper = (threshold > p * (n + 1));
    size_t lo = sum_upper ? threshold : 0;
    size_t hi = sum_upper ? trials : threshold - 1;
    double sum = 0.0, c = 0.0;
    for (size_t i = lo; i <= hi; ++i) {
        double di = static_cast<double>(i);
        double lt = std::lgamma(n + 1.0) - std::lgamma(di + 1.0) -
                    std::lgamma(n - di + 1.0) + di * lp + (n - di) * lq;
        double term = std::exp(lt);
        double y = term - c;
        double t = sum + y;
        c = (t - sum) - y;
        sum = t;
    }
    if (sum_upper) return std::min(sum, 1.0);
    return std::max(0.0, 1.0 - sum);
}

double false_alarm_prob(size_t k, size_t threshold) {
    return binom_tail(k, 0.5, threshold);
}

double detection_prob(size_t k, size_t threshold, double ber) {
    if (ber < 0.0 || ber > 0.5) throw ConfigError("detection_prob: ber outside [0, 0.5]");
    return binom_tail(k, 1.0 - ber, threshold);
}

std::optional<size_t> recommend_threshold(size_t k, double ber_max, double fa_max) {
    if (!(ber_max > 0.0 && ber_max < 0.5)) throw ConfigError("recommend_threshold: ber_max outside (0, 0.5)");
    if (!(fa_max > 0.0 && fa_max < 1.0)) throw ConfigError("recommend_threshold: fa_max outside (0, 1)");
    // detection must stay near-certain at the worst-case BER; a fixed high
    // bar keeps the recommendation meaningful even for very small fa_max
    constexpr double kDetMin = 0.999;
    for (size_t t = 1; t <= k; ++t) {
        if (false_alarm_prob(k, t) <= fa_max) {
            if (detection_prob(k, t, ber_max) >= kDetMin) return t;
            return std::nullopt;  // larger T only lowers detection further
        }
    }
    return std::nullopt;
}

std::string FserReport::csv_header() {
    return "label,noise_voltage,snr_db,total,detected,missed,false_alarms,fser";
}

std::string FserReport::csv_row() const {
    std::ostringstream os;
    os << label << ',' << noise_voltage << ',' << snr_db << ',' << frames_total
       << ',' << frames_detected << ',' << frames_missed << ',' << false_alarms
       << ',' << fser;
    return os.str();
}

FserReport match_payloads(const std::vector<BitStream>& originals,
                          const std::vector<BitStream>& extracted,
                          double delta) {
    if (delta < 0.0 || delta >= 0.5) throw ConfigError("match_payloads: delta outside [0, 0.5)");
    size_t n = originals.empty() ? 0 : originals[0].len();
    for (const auto& o : originals)
        if (o.len() != n) throw ConfigError("match_payloads: originals length mismatch");
    for (const auto& e : extracted)
        if (e.len() != n) throw ConfigError("match_payloads: extracted length mismatch");

    FserReport rep;
    rep.frames_total = originals.size();
    const size_t max_dist = static_cast<size_t>(delta * static_cast<double>(n));
    size_t cursor = 0;
    for (const auto& e : extracted) {
        bool matched = false;
        for (size_t j = cursor; j < originals.size(); ++j) {
            if (e.hamming_distance(originals[j]) <= max_dist) {
                rep.frames_detected++;
                cursor = j + 1;
                matched = true;
                break;
            }
        }
        if (!matched) rep.false_alarms++;
    }
    rep.frames_missed = rep.frames_total - rep.frames_detected;
    rep.fser = rep.frames_total == 0
                   ? 0.0
                   : static_cast<double>(rep.frames_missed) / static_cast<double>(rep.frames_total);
    return rep;
}

double ber_measure(const BitStream& a, const BitStream& b) {
    if (a.len() != b.len()) throw ConfigError("ber_measure: length mismatch");
    if (a.len() == 0) return 0.0;
    return static_cast<double>(a.hamming_distance(b)) / static_cast<double>(a.len());
}

}  // namespace longsync
