#include "longsync/correlator.hpp"

#include <bit>
#include <sstream>

#include "longsync/modem.hpp"

namespace longsync {

namespace {

size_t ceil_log2(size_t x) {
    size_t d = 0;
    size_t v = 1;
    while (v < x) {
        v <<= 1;
        ++d;
    }
    return d;
}

// Packed representation of a correlation pattern of length k.
struct PackedPattern {
    std::vector<uint64_t> words;
    uint64_t tail_mask;
    size_t k;

    explicit PackedPattern(const BitStream& bits) : k(bits.len()) {
        words.assign(bits.words().begin(), bits.words().end());
        size_t rem = k & 63;
        tail_mask = rem ? (1ull << rem) - 1 : ~0ull;
    }

    // agreements between this pattern and stream[pos .. pos+k)
    size_t correlate_at(const BitStream& stream, size_t pos) const {
        size_t mismatches = 0;
        for (size_t j = 0; j + 1 < words.size(); ++j)
            mismatches += static_cast<size_t>(
                std::popcount(stream.window64(pos + 64 * j) ^ words[j]));
        size_t j = words.size() - 1;
        mismatches += static_cast<size_t>(
            std::popcount((stream.window64(pos + 64 * j) ^ words[j]) & tail_mask));
        return k - mismatches;
    }
};

struct BlockBest {
    size_t corr = 0;
    size_t pos = 0;
    int rot = -1;
};

// Comparator-tree selection over positions [lo, hi] for all four variants.
template <typename CorrFn>
BlockBest select_best(size_t lo, size_t hi, CorrFn&& corr_of) {
    BlockBest best;
    for (int rot = 0; rot < 4; ++rot) {
        size_t rc = 0, rp = lo;
        bool first = true;
        for (size_t p = lo; p <= hi; ++p) {
            size_t c = corr_of(p, rot);
            if (first || c > rc) {
                rc = c;
                rp = p;
                first = false;
            }
        }
        if (best.rot < 0 || rc > best.corr) {
            best.corr = rc;
            best.pos = rp;
            best.rot = rot;
        }
    }
    return best;
}

}  // namespace

size_t correlate(const BitStream& window, const BitStream& sync) {
    if (window.len() != sync.len()) throw ConfigError("correlate: length mismatch");
    return window.len() - window.hamming_distance(sync);
}

std::array<BitStream, 4> rotated_variants(const Syncword& sync) {
    if (sync.bits.len() % 2 != 0) throw ConfigError("rotated_variants: odd syncword length");
    return {rotate_bits(sync.bits, 0), rotate_bits(sync.bits, 1),
            rotate_bits(sync.bits, 2), rotate_bits(sync.bits, 3)};
}

std::vector<DetectionEvent> scan(const BitStream& stream, const FrameConfig& cfg,
                                 const Syncword& sync, const ScanOptions& options) {
    if (cfg.threshold > cfg.k) throw ConfigError("scan: threshold exceeds k");
    if (sync.bits.len() != cfg.k) throw ConfigError("scan: syncword length != cfg.k");
    std::vector<DetectionEvent> events;
    const size_t L = stream.len();
    const size_t k = cfg.k;
    const size_t m = cfg.m;
    if (L < k) return events;

    auto variants = rotated_variants(sync);
    std::vector<PackedPattern> patterns;
    patterns.reserve(4);
    for (const auto& v : variants) patterns.emplace_back(v);

    const size_t last_pos = L - k;
    size_t next_eval = 0;
    // cycle t consumes bits up to c = min(t*m, L); windows ending inside
    // this cycle's bits are the cycle's block of positions
    for (size_t c = m; ; c = std::min(c + m, L)) {
        if (c >= k) {
            size_t hi = std::min(c - k, last_pos);
            if (next_eval <= hi) {
                size_t lo = next_eval;
                BlockBest best = select_best(lo, hi, [&](size_t p, int rot) {
                    return patterns[static_cast<size_t>(rot)].correlate_at(stream, p);
                });
                if (best.corr >= cfg.threshold) {
                    events.push_back({best.pos, best.corr, best.rot});
                    next_eval = options.suspend_during_capture ? best.pos + k + cfg.n
                                                               : hi + 1;
                } else {
                    next_eval = hi + 1;
                }
            }
        }
        if (c >= L) break;
    }
    return events;
}

ExtractResult extract_payloads(const BitStream& stream,
                               const std::vector<DetectionEvent>& events,
                               const FrameConfig& cfg) {
    ExtractResult out;
    for (const auto& ev : events) {
        if (ev.pos + cfg.k + cfg.n > stream.len()) {
            out.truncated.push_back(ev);
            continue;
        }
        BitStream raw = stream.slice(ev.pos + cfg.k, cfg.n);
        // received = rot applied to transmitted; undo with the inverse rotation
        out.frames.push_back({ev, rotate_bits(raw, (4 - ev.rot) % 4)});
    }
    return out;
}

// --- ArchState ---

ArchState::ArchState(const FrameConfig& cfg, const Syncword& sync,
                     const ScanOptions& options)
    : k_(cfg.k),
      m_(cfg.m),
      n_(cfg.n),
      threshold_(cfg.threshold),
      suspend_(options.suspend_during_capture),
      variants_(rotated_variants(sync)) {
    if (sync.bits.len() != cfg.k) throw ConfigError("ArchState: syncword length != cfg.k");
    reg_.reserve(m_ + k_ - 1);
}

std::vector<DetectionEvent> ArchState::step(const BitStream& bits) {
    if (bits.len() > m_) throw ConfigError("ArchState::step: more than m bits supplied");
    for (size_t i = 0; i < bits.len(); ++i) {
        reg_.push_back(bits.get(i) ? 1 : 0);
        if (reg_.size() > m_ + k_ - 1) reg_.erase(reg_.begin());
    }
    consumed_ += bits.len();

    std::vector<DetectionEvent> events;
    if (consumed_ < k_) return events;
    size_t hi = consumed_ - k_;
    if (next_eval_ > hi) return events;
    size_t lo = next_eval_;
    const size_t reg_base = consumed_ - reg_.size();  // absolute pos of reg_[0]

    auto corr_of = [&](size_t p, int rot) {
        const BitStream& v = variants_[static_cast<size_t>(rot)];
        size_t off = p - reg_base;
        size_t agree = 0;
        for (size_t i = 0; i < k_; ++i)
            agree += (reg_[off + i] == (v.get(i) ? 1 : 0)) ? 1u : 0u;
        return agree;
    };
    BlockBest best = select_best(lo, hi, corr_of);
    if (best.corr >= threshold_) {
        events.push_back({best.pos, best.corr, best.rot});
        next_eval_ = suspend_ ? best.pos + k_ + n_ : hi + 1;
    } else {
        next_eval_ = hi + 1;
    }
    return events;
}

ResourceReport arch_resources(size_t k, size_t m) {
    if (k < 2 || m < 1) throw ConfigError("arch_resources: require k >= 2, m >= 1");
    ResourceReport r;
    r.xnor_gates = m * k;
    r.adders = m * (k - 1);
    r.comparators = (m - 1) + 1;  // max-select tree + threshold compare
    r.register_bits = m + k - 1;
    r.adder_tree_depth = ceil_log2(k);
    r.comparator_tree_depth = ceil_log2(m);
    r.bits_per_cycle = m;
    return r;
}

std::string events_csv(const std::vector<DetectionEvent>& events) {
    std::ostringstream os;
    os << "pos,corr,rot\n";
    for (const auto& ev : events)
        os << ev.pos << ',' << ev.corr << ',' << ev.rot << '\n';
    return os.str();
}

}  // namespace longsync
