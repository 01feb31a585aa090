// Python bindings for the frame-sync library core.
#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "longsync/analysis.hpp"
#include "longsync/channel.hpp"
#include "longsync/correlator.hpp"
#include "longsync/framing.hpp"
#include "longsync/modem.hpp"
#include "longsync/pipeline.hpp"
#include "longsync/rng.hpp"

namespace py = pybind11;
using namespace longsync;

namespace {

BitStream bits_from_list(const std::vector<bool>& v) { return BitStream::from_bools(v); }

IqStream iq_from_list(const std::vector<cfloat>& v, int sps) {
    IqStream x;
    x.samples = v;
    x.sps = sps;
    return x;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "long-syncword frame synchronization simulator core";

    py::register_exception<ConfigError>(m, "ConfigError");
    py::register_exception<FormatError>(m, "FormatError");

    py::class_<BitStream>(m, "BitStream")
        .def(py::init<>())
        .def(py::init<size_t>())
        .def_static("from_bools", &bits_from_list)
        .def("__len__", &BitStream::len)
        .def("get", &BitStream::get)
        .def("set", &BitStream::set)
        .def("push_back", &BitStream::push_back)
        .def("append", &BitStream::append)
        .def("slice", &BitStream::slice)
        .def("complement", &BitStream::complement)
        .def("hamming_distance", &BitStream::hamming_distance)
        .def("to_bools", &BitStream::to_bools)
        .def("__eq__", [](const BitStream& a, const BitStream& b) { return a == b; });

    m.def("pack", &pack);
    m.def("unpack", &unpack);
    m.def("derive_seed", &derive_seed, py::arg("master"), py::arg("a"), py::arg("b") = 0);

    py::class_<Syncword>(m, "Syncword")
        .def_readonly("bits", &Syncword::bits)
        .def_readonly("k", &Syncword::k)
        .def_readonly("seed", &Syncword::seed);

    py::class_<FrameConfig>(m, "FrameConfig")
        .def(py::init<>())
        .def_readwrite("n", &FrameConfig::n)
        .def_readwrite("k", &FrameConfig::k)
        .def_readwrite("threshold", &FrameConfig::threshold)
        .def_readwrite("m", &FrameConfig::m)
        .def_readwrite("frames", &FrameConfig::frames)
        .def_readwrite("sync_seed", &FrameConfig::sync_seed)
        .def_readwrite("payload_seed", &FrameConfig::payload_seed)
        .def_readwrite("refresh_interval", &FrameConfig::refresh_interval)
        .def("validate", &FrameConfig::validate);

    m.def("gen_syncword", &gen_syncword);

    py::class_<GeneratedFrames>(m, "GeneratedFrames")
        .def_readonly("payloads", &GeneratedFrames::payloads)
        .def_readonly("stream", &GeneratedFrames::stream);
    m.def("gen_frames", &gen_frames);

    m.def("binom_tail", &binom_tail);
    m.def("false_alarm_prob", &false_alarm_prob);
    m.def("detection_prob", &detection_prob);
    m.def("recommend_threshold", &recommend_threshold);
    m.def("ber_measure", &ber_measure);

    py::class_<FserReport>(m, "FserReport")
        .def_readonly("label", &FserReport::label)
        .def_readonly("noise_voltage", &FserReport::noise_voltage)
        .def_readonly("snr_db", &FserReport::snr_db)
        .def_readonly("frames_total", &FserReport::frames_total)
        .def_readonly("frames_detected", &FserReport::frames_detected)
        .def_readonly("frames_missed", &FserReport::frames_missed)
        .def_readonly("false_alarms", &FserReport::false_alarms)
        .def_readonly("fser", &FserReport::fser)
        .def("csv_row", &FserReport::csv_row)
        .def_static("csv_header", &FserReport::csv_header);
    m.def("match_payloads", &match_payloads, py::arg("originals"), py::arg("extracted"),
          py::arg("delta") = 0.3);

    py::class_<IqStream>(m, "IqStream")
        .def(py::init<>())
        .def_static("from_samples", &iq_from_list, py::arg("samples"), py::arg("sps") = 1)
        .def_readwrite("samples", &IqStream::samples)
        .def_readwrite("sample_rate", &IqStream::sample_rate)
        .def_readwrite("sps", &IqStream::sps);

    py::class_<ModemParams>(m, "ModemParams")
        .def(py::init<>())
        .def_readwrite("sps", &ModemParams::sps)
        .def_readwrite("excess_bw", &ModemParams::excess_bw)
        .def_readwrite("rrc_ntaps", &ModemParams::rrc_ntaps)
        .def_readwrite("sync_loop_bw", &ModemParams::sync_loop_bw)
        .def_readwrite("sync_damping", &ModemParams::sync_damping)
        .def_readwrite("costas_loop_bw", &ModemParams::costas_loop_bw)
        .def("validate", &ModemParams::validate);

    m.def("qpsk_map", &qpsk_map);
    m.def("hard_decide", &hard_decide);
    m.def("rotate_bits", &rotate_bits);
    m.def("rrc_taps", &rrc_taps);
    m.def("pulse_shape", &pulse_shape);
    m.def("matched_filter", &matched_filter);
    m.def("symbol_sync", &symbol_sync);
    m.def("costas", &costas);
    m.def("demodulate", &demodulate);

    py::class_<ChannelParams>(m, "ChannelParams")
        .def(py::init<>())
        .def_readwrite("noise_voltage", &ChannelParams::noise_voltage)
        .def_readwrite("n_sinusoids", &ChannelParams::n_sinusoids)
        .def_readwrite("doppler_norm", &ChannelParams::doppler_norm)
        .def_readwrite("freq_offset_norm", &ChannelParams::freq_offset_norm)
        .def_readwrite("timing_ratio", &ChannelParams::timing_ratio)
        .def_readwrite("fading_enabled", &ChannelParams::fading_enabled)
        .def_readwrite("seed", &ChannelParams::seed)
        .def("validate", &ChannelParams::validate);

    m.def("awgn", &awgn);
    m.def("rayleigh_fade", &rayleigh_fade);
    m.def("freq_offset", &freq_offset);
    m.def("timing_offset", &timing_offset);
    m.def("apply_channel", &apply_channel);
    m.def("snr_from_noise_voltage", &snr_from_noise_voltage);

    py::class_<DetectionEvent>(m, "DetectionEvent")
        .def_readonly("pos", &DetectionEvent::pos)
        .def_readonly("corr", &DetectionEvent::corr)
        .def_readonly("rot", &DetectionEvent::rot)
        .def("__repr__", [](const DetectionEvent& e) {
            return "DetectionEvent(pos=" + std::to_string(e.pos) +
                   ", corr=" + std::to_string(e.corr) + ", rot=" + std::to_string(e.rot) + ")";
        });

    py::class_<ScanOptions>(m, "ScanOptions")
        .def(py::init<>())
        .def_readwrite("suspend_during_capture", &ScanOptions::suspend_during_capture);

    m.def("correlate", &correlate);
    m.def("rotated_variants", &rotated_variants);
    m.def("scan", &scan, py::arg("stream"), py::arg("cfg"), py::arg("sync"),
          py::arg("options") = ScanOptions{});

    py::class_<CapturedFrame>(m, "CapturedFrame")
        .def_readonly("event", &CapturedFrame::event)
        .def_readonly("payload", &CapturedFrame::payload);
    py::class_<ExtractResult>(m, "ExtractResult")
        .def_readonly("frames", &ExtractResult::frames)
        .def_readonly("truncated", &ExtractResult::truncated);
    m.def("extract_payloads", &extract_payloads);

    py::class_<ResourceReport>(m, "ResourceReport")
        .def_readonly("xnor_gates", &ResourceReport::xnor_gates)
        .def_readonly("adders", &ResourceReport::adders)
        .def_readonly("comparators", &ResourceReport::comparators)
        .def_readonly("register_bits", &ResourceReport::register_bits)
        .def_readonly("adder_tree_depth", &ResourceReport::adder_tree_depth)
        .def_readonly("comparator_tree_depth", &ResourceReport::comparator_tree_depth)
        .def_readonly("bits_per_cycle", &ResourceReport::bits_per_cycle);
    m.def("arch_resources", &arch_resources);

    py::class_<RunConfig>(m, "RunConfig")
        .def(py::init<>())
        .def_readwrite("frame", &RunConfig::frame)
        .def_readwrite("modem", &RunConfig::modem)
        .def_readwrite("channel", &RunConfig::channel)
        .def_readwrite("sweep_start", &RunConfig::sweep_start)
        .def_readwrite("sweep_stop", &RunConfig::sweep_stop)
        .def_readwrite("sweep_step", &RunConfig::sweep_step)
        .def_readwrite("repeats", &RunConfig::repeats)
        .def_readwrite("match_delta", &RunConfig::match_delta)
        .def_readwrite("master_seed", &RunConfig::master_seed)
        .def("noise_points", &RunConfig::noise_points);

    m.def("run_condition", &run_condition, py::arg("cfg"), py::arg("noise_voltage"),
          py::arg("seed"), py::arg("label") = std::string(),
          py::call_guard<py::gil_scoped_release>());
    m.def("parse_run_config", &parse_run_config);
    m.def("dump_run_config", &dump_run_config);
}
