// longsync command line front end: file-based frame sync experiments.
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "longsync/analysis.hpp"
#include "longsync/channel.hpp"
#include "longsync/correlator.hpp"
#include "longsync/framing.hpp"
#include "longsync/iqfile.hpp"
#include "longsync/modem.hpp"
#include "longsync/pipeline.hpp"
#include "longsync/rng.hpp"

using namespace longsync;

namespace {

std::string read_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw FormatError("cannot open " + path);
    std::ostringstream os;
    os << f.rdbuf();
    return os.str();
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw FormatError("cannot open " + path + " for writing");
    f << text;
}

BitFormat parse_bit_format(const std::string& s) {
    if (s == "packed") return BitFormat::Packed;
    if (s == "u8") return BitFormat::BytePerBit;
    throw ConfigError("bit format must be 'packed' or 'u8'");
}

// Shared config handling: optional key=value file, then per-flag overrides.
struct ConfigOpts {
    std::string config_path;
    std::vector<std::string> sets;  // extra key=value overrides

    RunConfig load() const {
        RunConfig cfg;
        if (!config_path.empty()) cfg = parse_run_config(read_file(config_path));
        std::string extra;
        for (const auto& s : sets) extra += s + "\n";
        if (!extra.empty()) {
            // re-parse on top of the current values
            RunConfig over = cfg;
            auto merged = dump_run_config(cfg) + extra;
            over = parse_run_config(merged);
            cfg = over;
        }
        return cfg;
    }
};

void add_config_opts(CLI::App* app, ConfigOpts& opts) {
    app->add_option("--config", opts.config_path, "key=value config file");
    app->add_option("--set", opts.sets,
                    "override a config entry, e.g. --set k=500 (repeatable)");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"frame synchronization simulator: long random syncwords, "
                 "QPSK modem, fading/AWGN channel, bit-parallel detector"};
    app.require_subcommand(1);

    ConfigOpts cfg_opts;
    std::string in_path, out_path, bit_format = "packed";
    std::string events_path, csv_path, svg_path;
    double noise = 0.0;
    uint64_t seed = 1;
    bool continuous = false;

    // generate: frame stream bits + manifest sidecar
    auto* generate = app.add_subcommand("generate", "generate a framed bit stream");
    add_config_opts(generate, cfg_opts);
    generate->add_option("--out", out_path, "output bit file")->required();
    generate->add_option("--bit-format", bit_format, "packed|u8");

    // tx: bits -> shaped IQ
    auto* tx = app.add_subcommand("tx", "modulate bits to shaped IQ samples");
    add_config_opts(tx, cfg_opts);
    tx->add_option("--in", in_path, "input bit file")->required();
    tx->add_option("--out", out_path, "output IQ file (float32 interleaved)")->required();
    tx->add_option("--bit-format", bit_format, "packed|u8");

    // channel: IQ -> impaired IQ
    auto* channel = app.add_subcommand("channel", "apply channel impairments to IQ");
    add_config_opts(channel, cfg_opts);
    channel->add_option("--in", in_path, "input IQ file")->required();
    channel->add_option("--out", out_path, "output IQ file")->required();
    channel->add_option("--noise", noise, "noise voltage");
    channel->add_option("--seed", seed, "channel seed");

    // rx: IQ -> bits
    auto* rx = app.add_subcommand("rx", "demodulate IQ samples to bits");
    add_config_opts(rx, cfg_opts);
    rx->add_option("--in", in_path, "input IQ file")->required();
    rx->add_option("--out", out_path, "output bit file")->required();
    rx->add_option("--bit-format", bit_format, "packed|u8");

    // detect: bits -> detection events
    auto* detect = app.add_subcommand("detect", "scan a bit stream for syncwords");
    add_config_opts(detect, cfg_opts);
    detect->add_option("--in", in_path, "input bit file")->required();
    detect->add_option("--events", events_path, "write events CSV here (default stdout)");
    detect->add_option("--bit-format", bit_format, "packed|u8");
    detect->add_flag("--continuous", continuous,
                     "keep scanning inside captured payloads");

    // fser: one condition end to end
    auto* fser = app.add_subcommand("fser", "run one noise condition end to end");
    add_config_opts(fser, cfg_opts);
    fser->add_option("--noise", noise, "noise voltage")->required();
    fser->add_option("--seed", seed, "run seed");
    fser->add_option("--csv", csv_path, "append the report row to this CSV");

    // sweep: full noise sweep, CSV + SVG
    auto* sweep = app.add_subcommand("sweep", "sweep noise voltage, write CSV/SVG");
    add_config_opts(sweep, cfg_opts);
    sweep->add_option("--csv", csv_path, "results CSV (default from config)");
    sweep->add_option("--svg", svg_path, "FSER plot SVG (default from config)");

    // analyze: threshold statistics and detector resources
    auto* analyze = app.add_subcommand("analyze", "threshold statistics and resources");
    add_config_opts(analyze, cfg_opts);
    double ber = 0.1, fa_max = 1e-6;
    analyze->add_option("--ber", ber, "bit error rate for detection probability");
    analyze->add_option("--fa-max", fa_max, "false alarm bound for the recommendation");

    CLI11_PARSE(app, argc, argv);

    try {
        RunConfig cfg = cfg_opts.load();

        if (*generate) {
            cfg.frame.validate();
            if (cfg.frame.frames == 0) throw ConfigError("generate: frames must be > 0");
            auto gen = gen_frames(cfg.frame);
            write_bits(out_path, gen.stream, parse_bit_format(bit_format));
            std::ostringstream man;
            man << dump_run_config(cfg) << "total_bits=" << gen.stream.len()
                << "\nframe_bits=" << cfg.frame.k + cfg.frame.n << "\n";
            write_file(out_path + ".manifest", man.str());
            std::cout << "wrote " << gen.stream.len() << " bits ("
                      << cfg.frame.frames << " frames) to " << out_path << "\n";
        } else if (*tx) {
            BitStream bits = read_bits(in_path, parse_bit_format(bit_format));
            auto shaped = pulse_shape(qpsk_map(bits), cfg.modem);
            write_iq(out_path, shaped);
            std::cout << "wrote " << shaped.samples.size() << " samples to "
                      << out_path << "\n";
        } else if (*channel) {
            ChannelParams p = cfg.channel;
            if (channel->count("--noise")) p.noise_voltage = noise;
            p.seed = seed;
            auto x = read_iq(in_path, 32000.0, cfg.modem.sps);
            auto y = apply_channel(x, p);
            write_iq(out_path, y);
            std::ostringstream meta;
            meta << "seed=" << p.seed << "\nnoise_voltage=" << p.noise_voltage
                 << "\nfading=" << (p.fading_enabled ? 1 : 0)
                 << "\nn_sinusoids=" << p.n_sinusoids
                 << "\ndoppler_norm=" << p.doppler_norm
                 << "\nfreq_offset_norm=" << p.freq_offset_norm
                 << "\ntiming_ratio=" << p.timing_ratio << "\n";
            write_file(out_path + ".channel", meta.str());
            std::cout << "wrote " << y.samples.size() << " samples to " << out_path
                      << " (snr " << snr_from_noise_voltage(x, p.noise_voltage)
                      << " dB)\n";
        } else if (*rx) {
            auto iq = read_iq(in_path, 32000.0 * cfg.modem.sps, cfg.modem.sps);
            BitStream bits = demodulate(iq, cfg.modem);
            write_bits(out_path, bits, parse_bit_format(bit_format));
            std::cout << "wrote " << bits.len() << " bits to " << out_path << "\n";
        } else if (*detect) {
            cfg.frame.validate();
            BitStream bits = read_bits(in_path, parse_bit_format(bit_format));
            auto sync = gen_syncword(cfg.frame.k, cfg.frame.sync_seed);
            auto events = scan(bits, cfg.frame, sync, ScanOptions{!continuous});
            std::string csv = events_csv(events);
            if (events_path.empty())
                std::cout << csv;
            else
                write_file(events_path, csv);
            std::cerr << events.size() << " detection(s)\n";
        } else if (*fser) {
            if (cfg.frame.frames == 0) throw ConfigError("fser: frames must be > 0");
            auto rep = run_condition(cfg, noise, seed);
            std::cout << FserReport::csv_header() << "\n" << rep.csv_row() << "\n";
            if (!csv_path.empty()) {
                std::ofstream f(csv_path, std::ios::app);
                if (!f) throw FormatError("cannot open " + csv_path);
                f << rep.csv_row() << "\n";
            }
        } else if (*sweep) {
            if (cfg.frame.frames == 0) throw ConfigError("sweep: frames must be > 0");
            if (!csv_path.empty()) cfg.out_csv = csv_path;
            if (!svg_path.empty()) cfg.out_svg = svg_path;
            auto rows = run_sweep(cfg);
            write_file(cfg.out_csv, sweep_csv(rows));
            write_file(cfg.out_svg, sweep_svg(rows));
            std::cout << "wrote " << rows.size() << " rows to " << cfg.out_csv
                      << " and plot to " << cfg.out_svg << "\n";
        } else if (*analyze) {
            cfg.frame.validate();
            size_t k = cfg.frame.k, T = cfg.frame.threshold;
            std::cout << "k=" << k << " threshold=" << T << "\n";
            std::cout << "false_alarm_prob=" << false_alarm_prob(k, T) << "\n";
            std::cout << "detection_prob(ber=" << ber << ")="
                      << detection_prob(k, T, ber) << "\n";
            auto rec = recommend_threshold(k, ber, fa_max);
            if (rec)
                std::cout << "recommended_threshold(fa<=" << fa_max << ")=" << *rec << "\n";
            else
                std::cout << "recommended_threshold(fa<=" << fa_max << ")=none\n";
            auto r = arch_resources(k, cfg.frame.m);
            std::cout << "xnor_gates=" << r.xnor_gates << "\nadders=" << r.adders
                      << "\ncomparators=" << r.comparators
                      << "\nregister_bits=" << r.register_bits
                      << "\nadder_tree_depth=" << r.adder_tree_depth
                      << "\ncomparator_tree_depth=" << r.comparator_tree_depth
                      << "\nbits_per_cycle=" << r.bits_per_cycle << "\n";
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
