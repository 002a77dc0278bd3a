#include "burstgate/traffic.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>

#include "burstgate/errors.hpp"

namespace burstgate {

namespace {

void require_window(SimTime start, SimTime until) {
    if (start >= until)
        throw ConfigError("stream window is empty (start must precede the end of the run)");
}

} // namespace

std::vector<Packet> voip_stream(const VoipParams& p, std::uint32_t flow_id, SimTime start,
                                SimTime until) {
    require_window(start, until);
    const std::int64_t delta_us = std::llround(p.inter_packet_s * 1e6);
    std::vector<Packet> out;
    std::uint64_t seq = 0;
    for (std::int64_t t = start.micros(); t < until.micros(); t += delta_us)
        out.push_back({flow_id, seq++, p.packet_bytes, SimTime::from_micros(t)});
    return out;
}

std::vector<Packet> camera_stream(const CameraParams& p, std::uint32_t flow_id, SimTime start,
                                  SimTime until, std::uint64_t seed) {
    require_window(start, until);
    SplitMix64 rng(seed);
    const std::int64_t gap_us = std::llround(p.intra_burst_gap_s * 1e6);
    const double lo = p.burst_interval_mean_s - p.burst_interval_halfwidth_s;
    const double hi = p.burst_interval_mean_s + p.burst_interval_halfwidth_s;

    std::vector<Packet> out;
    std::uint64_t seq = 0;
    std::int64_t burst_start = start.micros();
    while (burst_start < until.micros()) {
        for (std::uint32_t j = 0; j < p.packets_per_burst; ++j) {
            const std::int64_t t = burst_start + std::int64_t(j) * gap_us;
            if (t >= until.micros()) break;
            out.push_back({flow_id, seq++, p.packet_bytes, SimTime::from_micros(t)});
        }
        burst_start += std::llround(rng.next_uniform(lo, hi) * 1e6);
    }
    return out;
}

std::vector<Packet> trace_stream(const TraceParams& p, std::uint32_t flow_id, SimTime start,
                                 SimTime until) {
    require_window(start, until);
    if (!p.records)
        throw ConfigError("trace flow has no loaded records");
    const auto& recs = *p.records;

    std::vector<std::int64_t> rec_us(recs.size());
    for (std::size_t i = 0; i < recs.size(); ++i)
        rec_us[i] = std::llround(recs[i].t_s * 1e6);

    std::vector<Packet> out;
    std::uint64_t seq = 0;
    if (!p.loop) {
        for (std::size_t i = 0; i < recs.size(); ++i) {
            const std::int64_t t = start.micros() + rec_us[i];
            if (t >= until.micros()) break;
            out.push_back({flow_id, seq++, recs[i].size_bytes, SimTime::from_micros(t)});
        }
        return out;
    }

    const std::int64_t span_us = rec_us.back();
    if (span_us <= 0)
        throw ConfigError("trace \"" + p.path + "\" has zero time span and cannot loop");
    for (std::int64_t replay_base = start.micros();; replay_base += span_us) {
        if (replay_base >= until.micros()) break;
        bool emitted_any = false;
        for (std::size_t i = 0; i < recs.size(); ++i) {
            const std::int64_t t = replay_base + rec_us[i];
            if (t >= until.micros()) break;
            out.push_back({flow_id, seq++, recs[i].size_bytes, SimTime::from_micros(t)});
            emitted_any = true;
        }
        if (!emitted_any) break;
    }
    return out;
}

std::vector<Packet> synth_vc_stream(const SynthVcParams& p, std::uint32_t flow_id, SimTime start,
                                    SimTime until, std::uint64_t seed) {
    require_window(start, until);
    SplitMix64 rng(seed);
    const double mean_frame_bytes = p.mean_bps / (8.0 * p.fps);
    const std::int64_t frame_us = std::llround(1e6 / p.fps);

    std::vector<Packet> out;
    std::uint64_t seq = 0;
    for (std::int64_t t = start.micros(); t < until.micros(); t += frame_us) {
        // Truncated exponential via inverse CDF, capped at 12x the mean so a
        // single frame can never flood the run.
        const double u = rng.next_double();
        double frame = -mean_frame_bytes * std::log(1.0 - u);
        frame = std::min(frame, 12.0 * mean_frame_bytes);
        std::int64_t remaining = std::llround(frame);
        while (remaining > 0) {
            const std::uint32_t sz =
                remaining >= std::int64_t(p.mtu_bytes) ? p.mtu_bytes
                                                       : std::uint32_t(remaining);
            out.push_back({flow_id, seq++, sz, SimTime::from_micros(t)});
            remaining -= sz;
        }
    }
    return out;
}

std::vector<Packet> generate_arrivals(const FlowSpec& flow, std::uint32_t flow_id,
                                      std::uint64_t flow_seed, SimTime until,
                                      double start_window_s) {
    // First draw places the flow in its start window; a fresh value seeds the
    // stream's own jitter so the two stay independent.
    SplitMix64 rng(flow_seed);
    const SimTime start = SimTime::from_seconds(rng.next_uniform(0.0, start_window_s));
    const std::uint64_t stream_seed = rng.next_u64();

    switch (flow.kind) {
    case FlowKind::voip:
        return voip_stream(flow.voip(), flow_id, start, until);
    case FlowKind::camera:
        return camera_stream(flow.camera(), flow_id, start, until, stream_seed);
    case FlowKind::trace:
        return trace_stream(flow.trace(), flow_id, start, until);
    case FlowKind::synth_vc:
        return synth_vc_stream(flow.synth_vc(), flow_id, start, until, stream_seed);
    }
    return {};
}

const std::vector<BurstTableRow>& burst_table() {
    static const std::vector<BurstTableRow> rows = {
        {"704x576", 50, 41},
        {"704x576", 32, 26},
        {"704x576", 16, 10},
        {"352x288", 13, 9},
        {"352x288", 4, 3},
    };
    return rows;
}

std::uint32_t packets_per_burst(const std::string& resolution, std::uint32_t quality) {
    for (const auto& row : burst_table())
        if (row.resolution == resolution && row.quality == quality)
            return row.packets;
    throw UnknownTableEntry(resolution + " @ " + std::to_string(quality) + " kB");
}

namespace {

std::string_view trim(std::string_view sv) {
    while (!sv.empty() && std::isspace(static_cast<unsigned char>(sv.front()))) sv.remove_prefix(1);
    while (!sv.empty() && std::isspace(static_cast<unsigned char>(sv.back()))) sv.remove_suffix(1);
    return sv;
}

} // namespace

std::vector<TraceRecord> load_trace(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw ConfigError("cannot open trace file: " + path);

    std::vector<TraceRecord> records;
    std::string line;
    std::size_t line_no = 0;
    bool first_data_line = true;
    while (std::getline(in, line)) {
        ++line_no;
        std::string_view sv = trim(line);
        if (sv.empty()) continue;
        if (first_data_line && sv.substr(0, 3) == "t_s") {
            first_data_line = false;
            continue; // optional header
        }
        first_data_line = false;

        const auto comma = sv.find(',');
        if (comma == std::string_view::npos)
            throw TraceParseError(line_no, "expected \"t_s,size_bytes\"");
        const std::string_view t_field = trim(sv.substr(0, comma));
        const std::string_view size_field = trim(sv.substr(comma + 1));

        TraceRecord rec;
        auto [tp, terr] = std::from_chars(t_field.data(), t_field.data() + t_field.size(), rec.t_s);
        if (terr != std::errc{} || tp != t_field.data() + t_field.size())
            throw TraceParseError(line_no, "bad timestamp \"" + std::string(t_field) + "\"");
        auto [sp, serr] =
            std::from_chars(size_field.data(), size_field.data() + size_field.size(), rec.size_bytes);
        if (serr != std::errc{} || sp != size_field.data() + size_field.size())
            throw TraceParseError(line_no, "bad size \"" + std::string(size_field) + "\"");
        if (rec.size_bytes < 1)
            throw TraceParseError(line_no, "size_bytes must be >= 1");
        if (!records.empty() && rec.t_s < records.back().t_s)
            throw NonMonotonicTimestamp(line_no);
        records.push_back(rec);
    }
    if (records.empty())
        throw EmptyTrace(path);

    const double t0 = records.front().t_s;
    for (auto& r : records) r.t_s -= t0;
    return records;
}

double trace_rate_bps(const std::vector<TraceRecord>& records) {
    if (records.empty())
        throw UnresolvableRate("empty trace");
    const double span = records.back().t_s - records.front().t_s;
    if (span <= 0)
        throw UnresolvableRate("trace has zero time span; set rate_override_bps");
    double bits = 0;
    for (const auto& r : records) bits += r.size_bytes * 8.0;
    return bits / span;
}

} // namespace burstgate
