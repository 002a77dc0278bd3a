#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "burstgate/sim_time.hpp"

namespace burstgate {

/// A simulated datagram. `size_bytes` is the wire size including all headers.
struct Packet {
    std::uint32_t flow_id = 0;
    std::uint64_t seq = 0;
    std::uint32_t size_bytes = 0;
    SimTime created_at;
};

/// The bottleneck output link. `network_delay_ms` is the fixed one-way delay
/// of the rest of the path; it feeds the MOS calculation only and plays no
/// part in queueing.
struct LinkSpec {
    double capacity_bps = 0.0;
    double network_delay_ms = 0.0;
};

enum class BufferMode { packets, bytes };

struct BufferCapacity {
    BufferMode mode = BufferMode::packets;
    std::uint64_t limit = 0;
};

struct VoipParams {
    double inter_packet_s = 0.020;
    std::uint32_t packet_bytes = 60;
};

struct CameraParams {
    std::uint32_t packets_per_burst = 26;
    std::uint32_t packet_bytes = 1500;
    double burst_interval_mean_s = 0.278;
    double burst_interval_halfwidth_s = 0.06;
    // Spacing inside one burst; default models 1500-byte serialization on a
    // 100 Mbps LAN segment feeding the router.
    double intra_burst_gap_s = 0.00012;
};

/// One packet of a replayable capture, offset from the trace start.
struct TraceRecord {
    double t_s = 0.0;
    std::uint32_t size_bytes = 0;
};

struct TraceParams {
    std::string path;
    bool loop = false;
    // Filled by the loader; offered-load queries fail until it is set.
    std::shared_ptr<const std::vector<TraceRecord>> records;
};

/// Synthetic videoconference source: fixed frame rate, truncated-exponential
/// frame sizes fragmented at the MTU.
struct SynthVcParams {
    double mean_bps = 2e6;
    double fps = 30.0;
    std::uint32_t mtu_bytes = 1500;
};

enum class FlowKind { voip, camera, trace, synth_vc };

struct FlowSpec {
    FlowKind kind = FlowKind::voip;
    std::variant<VoipParams, CameraParams, TraceParams, SynthVcParams> params = VoipParams{};
    // Replaces the computed nominal rate in offered-load/utilization
    // arithmetic; the generated traffic itself is untouched.
    std::optional<double> rate_override_bps;
    std::string name; // display id for reports; defaulted from kind + index

    const VoipParams& voip() const { return std::get<VoipParams>(params); }
    const CameraParams& camera() const { return std::get<CameraParams>(params); }
    const TraceParams& trace() const { return std::get<TraceParams>(params); }
    const SynthVcParams& synth_vc() const { return std::get<SynthVcParams>(params); }
};

/// One experiment: a bottleneck link and buffer, the competing flows, and the
/// measurement window. Flow start offsets are drawn per iteration from
/// [0, start_window_s].
struct Scenario {
    LinkSpec link;
    BufferCapacity buffer;
    std::vector<FlowSpec> flows;
    double duration_s = 60.0;
    double start_window_s = 5.0;
};

struct RunConfig {
    std::uint32_t iterations = 40;
    std::uint64_t master_seed = 1;
    std::vector<double> mos_delay_sweep_ms = {0.0, 50.0, 100.0, 150.0, 200.0};
};

const char* to_string(FlowKind kind);
const char* to_string(BufferMode mode);

} // namespace burstgate
