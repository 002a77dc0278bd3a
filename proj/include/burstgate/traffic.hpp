#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "burstgate/rng.hpp"
#include "burstgate/types.hpp"

namespace burstgate {

/// Every packet one flow will offer to the link during one iteration,
/// timestamps non-decreasing per flow. Sources are open-loop, so the whole
/// schedule exists independent of what the queue later does to it. The first
/// draw from `flow_seed` places the flow in [0, start_window_s]; a second
/// seeds the stream's own jitter.
std::vector<Packet> generate_arrivals(const FlowSpec& flow, std::uint32_t flow_id,
                                      std::uint64_t flow_seed, SimTime until,
                                      double start_window_s);

/// Constant-bit-rate talker: packets of packet_bytes at start, start+Δ, …
/// strictly before `until`.
std::vector<Packet> voip_stream(const VoipParams& p, std::uint32_t flow_id, SimTime start,
                                SimTime until);

/// Bursty camera: bursts of packets_per_burst packets spaced
/// intra_burst_gap_s apart; burst k+1 starts at burst k's start plus a
/// uniform draw from [mean − halfwidth, mean + halfwidth].
std::vector<Packet> camera_stream(const CameraParams& p, std::uint32_t flow_id, SimTime start,
                                  SimTime until, std::uint64_t seed);

/// Replay loaded records at start + t_s, cut strictly before `until`; loop
/// mode restarts at the trace end, shifted by the trace span (which must be
/// positive to loop).
std::vector<Packet> trace_stream(const TraceParams& p, std::uint32_t flow_id, SimTime start,
                                 SimTime until);

/// Fixed-fps frames with truncated-exponential sizes (capped at 12x the
/// mean), each fragmented into MTU packets plus a remainder, all stamped at
/// the frame instant.
std::vector<Packet> synth_vc_stream(const SynthVcParams& p, std::uint32_t flow_id,
                                    SimTime start, SimTime until, std::uint64_t seed);

/// Table of measured camera burst lengths by resolution/quality setting,
/// e.g. packets_per_burst("704x576", 50) == 41. Unknown combinations throw
/// UnknownTableEntry. The flat listing backs the `table1` CLI command.
std::uint32_t packets_per_burst(const std::string& resolution, std::uint32_t quality);

struct BurstTableRow {
    std::string resolution;
    std::uint32_t quality;
    std::uint32_t packets;
};

const std::vector<BurstTableRow>& burst_table();

/// Read a `t_s,size_bytes` CSV. Header line optional; blank lines ignored.
/// Timestamps must be non-decreasing; they are shifted so the first is 0.
/// Throws TraceParseError / NonMonotonicTimestamp / EmptyTrace.
std::vector<TraceRecord> load_trace(const std::string& path);

/// Mean rate of a loaded trace over its span (bits/s). For a single-packet
/// trace (zero span) the rate is unresolvable without an override.
double trace_rate_bps(const std::vector<TraceRecord>& records);

} // namespace burstgate
