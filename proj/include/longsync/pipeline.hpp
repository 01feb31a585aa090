#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "longsync/analysis.hpp"
#include "longsync/channel.hpp"
#include "longsync/correlator.hpp"
#include "longsync/framing.hpp"
#include "longsync/modem.hpp"

namespace longsync {

struct RunConfig {
    FrameConfig frame;
    ModemParams modem;
    ChannelParams channel;
    double sweep_start = 0.4;
    double sweep_stop = 1.1;
    double sweep_step = 0.1;
    size_t repeats = 1;
    double match_delta = 0.3;
    uint64_t master_seed = 1;
    std::string out_csv = "fser.csv";
    std::string out_svg = "fser.svg";

    std::vector<double> noise_points() const;
};

// Run one condition end to end in memory: generate frames, modulate,
// impair, demodulate, detect, extract, match. Chunked so memory stays
// bounded regardless of frame count.
FserReport run_condition(const RunConfig& cfg, double noise_voltage, uint64_t seed,
                         const std::string& label = "");

struct SweepRow {
    size_t condition = 0;
    size_t repeat = 0;
    uint64_t seed = 0;
    FserReport report;
};

std::vector<SweepRow> run_sweep(const RunConfig& cfg);

std::string sweep_csv(const std::vector<SweepRow>& rows);
std::string sweep_svg(const std::vector<SweepRow>& rows);

// Flat key=value config text <-> RunConfig (unknown keys rejected).
RunConfig parse_run_config(const std::string& text);
std::string dump_run_config(const RunConfig& cfg);

}  // namespace longsync
