#include "longsync/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>
#include <thread>

#include "longsync/rng.hpp"

namespace longsync {

std::vector<double> RunConfig::noise_points() const {
    if (!(sweep_step > 0.0)) throw ConfigError("sweep step must be > 0");
    std::vector<double> pts;
    for (double v = sweep_start; v <= sweep_stop + 1e-9; v += sweep_step)
        pts.push_back(v);
    return pts;
}

FserReport run_condition(const RunConfig& cfg, double noise_voltage, uint64_t seed,
                         const std::string& label) {
    FrameConfig frame = cfg.frame;
    frame.sync_seed = derive_seed(seed, 1);
    frame.payload_seed = derive_seed(seed, 2);
    frame.validate();
    cfg.modem.validate();

    GeneratedFrames gen = gen_frames(frame);
    Syncword sync = gen_syncword(frame.k, frame.sync_seed);

    ChannelParams chan = cfg.channel;
    chan.noise_voltage = noise_voltage;
    chan.seed = derive_seed(seed, 3);
    chan.validate();

    const int sps = cfg.modem.sps;
    auto taps = rrc_taps(sps, cfg.modem.excess_bw, cfg.modem.rrc_ntaps);
    FirFilter shaper(taps, std::sqrt(static_cast<double>(sps)));
    FirFilter matcher(taps);
    FadingChannel fading(chan.n_sinusoids, chan.doppler_norm, chan.seed);
    FreqOffsetStage foff(chan.freq_offset_norm);
    TimingOffsetStage toff(chan.timing_ratio);
    AwgnStage noise(chan.noise_voltage, derive_seed(chan.seed, 0x41574e));
    Agc agc;
    SymbolSynchronizer timing(cfg.modem);
    CostasLoop carrier(cfg.modem);

    const size_t total_bits = gen.stream.len();
    const size_t chunk_symbols = 1 << 16;
    double tx_power_sum = 0.0;
    size_t tx_power_count = 0;
    BitStream rx_bits;

    std::vector<cfloat> up, shaped, impaired, tmp, filtered, leveled, symbols, locked;
    size_t bit_pos = 0;
    bool flushed = false;
    size_t tail_zeros = static_cast<size_t>(cfg.modem.rrc_ntaps) * 2 + 8 * sps;
    while (bit_pos < total_bits || !flushed || tail_zeros > 0) {
        size_t nbits = std::min(2 * chunk_symbols, total_bits - bit_pos);
        up.assign(static_cast<size_t>(nbits / 2) * sps, cfloat(0, 0));
        for (size_t i = 0; i < nbits; i += 2) {
            unsigned b1 = gen.stream.get(bit_pos + i) ? 1u : 0u;
            unsigned b0 = gen.stream.get(bit_pos + i + 1) ? 1u : 0u;
            constexpr float r = 0.70710678118654752f;
            static const cfloat pts[4] = {{+r, +r}, {-r, +r}, {+r, -r}, {-r, -r}};
            up[(i / 2) * sps] = pts[(b1 << 1) | b0];
        }
        bit_pos += nbits;

        shaped.clear();
        shaper.process(up.data(), up.size(), shaped);
        if (bit_pos >= total_bits && !flushed) {
            shaper.flush(shaped);
            flushed = true;
        } else if (flushed) {
            // drain the receiver-side filter and loop tails
            shaped.assign(tail_zeros, cfloat(0, 0));
            tail_zeros = 0;
        }
        for (const auto& s : shaped) tx_power_sum += std::norm(s);
        tx_power_count += shaped.size();

        impaired.clear();
        if (chan.fading_enabled) {
            fading.process(shaped.data(), shaped.size(), impaired);
        } else {
            impaired = shaped;
        }
        if (chan.freq_offset_norm != 0.0) {
            tmp.clear();
            foff.process(impaired.data(), impaired.size(), tmp);
            impaired.swap(tmp);
        }
        if (chan.timing_ratio != 1.0) {
            tmp.clear();
            toff.process(impaired.data(), impaired.size(), tmp);
            impaired.swap(tmp);
        }
        if (chan.noise_voltage > 0.0) {
            tmp.clear();
            noise.process(impaired.data(), impaired.size(), tmp);
            impaired.swap(tmp);
        }

        filtered.clear();
        matcher.process(impaired.data(), impaired.size(), filtered);
        leveled.clear();
        agc.process(filtered.data(), filtered.size(), leveled);
        symbols.clear();
        timing.process(leveled.data(), leveled.size(), symbols);
        locked.clear();
        carrier.process(symbols.data(), symbols.size(), locked);
        for (const auto& s : locked) {
            bool i_neg = s.real() < 0.0f;
            bool q_neg = s.imag() < 0.0f;
            unsigned pair = (!i_neg && !q_neg) ? 0b00 : (i_neg && !q_neg) ? 0b01
                            : (i_neg && q_neg) ? 0b11 : 0b10;
            rx_bits.push_back((pair >> 1) & 1u);
            rx_bits.push_back(pair & 1u);
        }
    }

    auto events = scan(rx_bits, frame, sync);
    auto extracted = extract_payloads(rx_bits, events, frame);
    std::vector<BitStream> payloads;
    payloads.reserve(extracted.frames.size());
    for (auto& f : extracted.frames) payloads.push_back(std::move(f.payload));

    FserReport rep = match_payloads(gen.payloads, payloads, cfg.match_delta);
    rep.label = label.empty() ? "run" : label;
    rep.noise_voltage = noise_voltage;
    double tx_power = tx_power_count ? tx_power_sum / static_cast<double>(tx_power_count) : 0.0;
    rep.snr_db = noise_voltage > 0.0
                     ? 10.0 * std::log10(tx_power / (noise_voltage * noise_voltage))
                     : std::numeric_limits<double>::infinity();
    return rep;
}

std::vector<SweepRow> run_sweep(const RunConfig& cfg) {
    auto points = cfg.noise_points();
    struct Job {
        size_t cond, rep;
        uint64_t seed;
        double nv;
    };
    std::vector<Job> jobs;
    for (size_t c = 0; c < points.size(); ++c)
        for (size_t r = 0; r < cfg.repeats; ++r)
            jobs.push_back({c, r, derive_seed(cfg.master_seed, c, r), points[c]});

    std::vector<SweepRow> rows(jobs.size());
    unsigned workers = std::max(1u, std::thread::hardware_concurrency());
    workers = std::min<unsigned>(workers, static_cast<unsigned>(jobs.size()));
    std::atomic<size_t> next{0};
    auto work = [&]() {
        for (;;) {
            size_t j = next.fetch_add(1);
            if (j >= jobs.size()) return;
            const Job& job = jobs[j];
            std::ostringstream lbl;
            lbl << "k" << cfg.frame.k << "_nv" << job.nv << "_r" << job.rep;
            FserReport rep = run_condition(cfg, job.nv, job.seed, lbl.str());
            rows[j] = SweepRow{job.cond, job.rep, job.seed, std::move(rep)};
        }
    };
    if (workers <= 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
        for (auto& t : pool) t.join();
    }
    std::sort(rows.begin(), rows.end(), [](const SweepRow& a, const SweepRow& b) {
        return std::tie(a.condition, a.repeat) < std::tie(b.condition, b.repeat);
    });
    return rows;
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
    std::ostringstream os;
    os << "condition,repeat,seed," << FserReport::csv_header() << "\n";
    for (const auto& r : rows)
        os << r.condition << ',' << r.repeat << ',' << r.seed << ','
           << r.report.csv_row() << "\n";
    return os.str();
}

std::string sweep_svg(const std::vector<SweepRow>& rows) {
    // mean FSER per condition vs SNR, log-y
    std::map<size_t, std::pair<double, std::vector<double>>> conds;  // snr, fsers
    for (const auto& r : rows) {
        conds[r.condition].first = r.report.snr_db;
        conds[r.condition].second.push_back(r.report.fser);
    }
    std::vector<std::pair<double, double>> pts;  // snr, mean fser
    double floor_fser = 1.0;
    for (auto& [c, sf] : conds) {
        double mean = 0.0;
        for (double f : sf.second) mean += f;
        mean /= static_cast<double>(sf.second.size());
        pts.push_back({sf.first, mean});
        if (mean > 0.0) floor_fser = std::min(floor_fser, mean);
    }
    std::sort(pts.begin(), pts.end());
    floor_fser = std::min(floor_fser, 1e-1) / 10.0;
    floor_fser = std::max(floor_fser, 1e-6);

    const double w = 640, h = 480, ml = 70, mr = 20, mt = 30, mb = 50;
    double xmin = pts.empty() ? 0 : pts.front().first;
    double xmax = pts.empty() ? 1 : pts.back().first;
    if (xmax - xmin < 1e-9) xmax = xmin + 1.0;
    double ymin = std::log10(floor_fser), ymax = 0.0;
    auto X = [&](double snr) { return ml + (snr - xmin) / (xmax - xmin) * (w - ml - mr); };
    auto Y = [&](double fser) {
        double ly = std::log10(std::max(fser, floor_fser));
        return mt + (ymax - ly) / (ymax - ymin) * (h - mt - mb);
    };

    std::ostringstream os;
    os << "<svg xmlns='http://www.w3.org/2000/svg' width='" << w << "' height='" << h << "'>\n";
    os << "<rect width='100%' height='100%' fill='white'/>\n";
    os << "<line x1='" << ml << "' y1='" << h - mb << "' x2='" << w - mr << "' y2='" << h - mb
       << "' stroke='black'/>\n";
    os << "<line x1='" << ml << "' y1='" << mt << "' x2='" << ml << "' y2='" << h - mb
       << "' stroke='black'/>\n";
    for (int d = 0; d >= static_cast<int>(std::ceil(ymin)); --d) {
        double y = Y(std::pow(10.0, d));
        os << "<line x1='" << ml - 4 << "' y1='" << y << "' x2='" << w - mr << "' y2='" << y
           << "' stroke='#ddd'/>\n";
        os << "<text x='" << ml - 8 << "' y='" << y + 4
           << "' font-size='11' text-anchor='end'>1e" << d << "</text>\n";
    }
    for (const auto& [snr, fser] : pts) {
        os << "<text x='" << X(snr) << "' y='" << h - mb + 16
           << "' font-size='11' text-anchor='middle'>" << std::round(snr * 10) / 10
           << "</text>\n";
    }
    os << "<text x='" << (ml + w - mr) / 2 << "' y='" << h - 10
       << "' font-size='12' text-anchor='middle'>SNR (dB)</text>\n";
    os << "<text x='16' y='" << (mt + h - mb) / 2
       << "' font-size='12' text-anchor='middle' transform='rotate(-90 16 "
       << (mt + h - mb) / 2 << ")'>FSER</text>\n";
    if (!pts.empty()) {
        os << "<polyline fill='none' stroke='#1f6fb2' stroke-width='1.5' points='";
        for (const auto& [snr, fser] : pts) os << X(snr) << ',' << Y(fser) << ' ';
        os << "'/>\n";
        for (const auto& [snr, fser] : pts)
            os << "<circle cx='" << X(snr) << "' cy='" << Y(fser)
               << "' r='3' fill='#1f6fb2'/>\n";
    }
    os << "</svg>\n";
    return os.str();
}

namespace {

std::map<std::string, std::string> parse_kv(const std::string& text) {
    std::map<std::string, std::string> kv;
    std::istringstream is(text);
    std::string line;
    while (std::getline(is, line)) {
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        auto eq = line.find('=');
        if (eq == std::string::npos) continue;
        auto trim = [](std::string s) {
            size_t a = s.find_first_not_of(" \t\r");
            size_t b = s.find_last_not_of(" \t\r");
            return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
        };
        std::string key = trim(line.substr(0, eq));
        std::string val = trim(line.substr(eq + 1));
        if (!key.empty()) kv[key] = val;
    }
    return kv;
}

}  // namespace

RunConfig parse_run_config(const std::string& text) {
    RunConfig cfg;
    auto kv = parse_kv(text);
    for (const auto& [key, val] : kv) {
        try {
            if (key == "n") cfg.frame.n = std::stoull(val);
            else if (key == "k") cfg.frame.k = std::stoull(val);
            else if (key == "threshold") cfg.frame.threshold = std::stoull(val);
            else if (key == "m") cfg.frame.m = std::stoull(val);
            else if (key == "frames") cfg.frame.frames = std::stoull(val);
            else if (key == "refresh_interval") cfg.frame.refresh_interval = std::stoull(val);
            else if (key == "sps") cfg.modem.sps = std::stoi(val);
            else if (key == "excess_bw") cfg.modem.excess_bw = std::stod(val);
            else if (key == "rrc_ntaps") cfg.modem.rrc_ntaps = std::stoi(val);
            else if (key == "sync_loop_bw") cfg.modem.sync_loop_bw = std::stod(val);
            else if (key == "sync_damping") cfg.modem.sync_damping = std::stod(val);
            else if (key == "costas_loop_bw") cfg.modem.costas_loop_bw = std::stod(val);
            else if (key == "fading") cfg.channel.fading_enabled = (val == "1" || val == "true");
            else if (key == "n_sinusoids") cfg.channel.n_sinusoids = std::stoi(val);
            else if (key == "doppler_norm") cfg.channel.doppler_norm = std::stod(val);
            else if (key == "freq_offset_norm") cfg.channel.freq_offset_norm = std::stod(val);
            else if (key == "timing_ratio") cfg.channel.timing_ratio = std::stod(val);
            else if (key == "sweep_start") cfg.sweep_start = std::stod(val);
            else if (key == "sweep_stop") cfg.sweep_stop = std::stod(val);
            else if (key == "sweep_step") cfg.sweep_step = std::stod(val);
            else if (key == "repeats") cfg.repeats = std::stoull(val);
            else if (key == "match_delta") cfg.match_delta = std::stod(val);
            else if (key == "master_seed") cfg.master_seed = std::stoull(val);
            else if (key == "out_csv") cfg.out_csv = val;
            else if (key == "out_svg") cfg.out_svg = val;
            else throw ConfigError("unknown config key: " + key);
        } catch (const std::invalid_argument&) {
            throw ConfigError("bad value for " + key + ": " + val);
        } catch (const std::out_of_range&) {
            throw ConfigError("bad value for " + key + ": " + val);
        }
    }
    return cfg;
}

std::string dump_run_config(const RunConfig& cfg) {
    std::ostringstream os;
    os << "n=" << cfg.frame.n << "\nk=" << cfg.frame.k
       << "\nthreshold=" << cfg.frame.threshold << "\nm=" << cfg.frame.m
       << "\nframes=" << cfg.frame.frames
       << "\nrefresh_interval=" << cfg.frame.refresh_interval
       << "\nsps=" << cfg.modem.sps << "\nexcess_bw=" << cfg.modem.excess_bw
       << "\nrrc_ntaps=" << cfg.modem.rrc_ntaps
       << "\nsync_loop_bw=" << cfg.modem.sync_loop_bw
       << "\nsync_damping=" << cfg.modem.sync_damping
       << "\ncostas_loop_bw=" << cfg.modem.costas_loop_bw
       << "\nfading=" << (cfg.channel.fading_enabled ? 1 : 0)
       << "\nn_sinusoids=" << cfg.channel.n_sinusoids
       << "\ndoppler_norm=" << cfg.channel.doppler_norm
       << "\nfreq_offset_norm=" << cfg.channel.freq_offset_norm
       << "\ntiming_ratio=" << cfg.channel.timing_ratio
       << "\nsweep_start=" << cfg.sweep_start << "\nsweep_stop=" << cfg.sweep_stop
       << "\nsweep_step=" << cfg.sweep_step << "\nrepeats=" << cfg.repeats
       << "\nmatch_delta=" << cfg.match_delta
       << "\nmaster_seed=" << cfg.master_seed << "\nout_csv=" << cfg.out_csv
       << "\nout_svg=" << cfg.out_svg << "\n";
    return os.str();
}

}  // namespace longsync
