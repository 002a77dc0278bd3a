#include "burstgate/scenario.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "burstgate/errors.hpp"
#include "burstgate/traffic.hpp"

namespace burstgate {

namespace {

using nlohmann::json;

bool flow_params_valid(const FlowSpec& f) {
    switch (f.kind) {
    case FlowKind::voip: {
        const auto& p = f.voip();
        return p.inter_packet_s > 0 && p.packet_bytes >= 1;
    }
    case FlowKind::camera: {
        const auto& p = f.camera();
        return p.packets_per_burst >= 1 && p.packet_bytes >= 1 &&
               p.burst_interval_mean_s > 0 &&
               p.burst_interval_halfwidth_s >= 0 &&
               p.burst_interval_halfwidth_s < p.burst_interval_mean_s &&
               p.intra_burst_gap_s >= 0;
    }
    case FlowKind::trace: {
        const auto& p = f.trace();
        return !p.path.empty();
    }
    case FlowKind::synth_vc: {
        const auto& p = f.synth_vc();
        return p.mean_bps > 0 && p.fps > 0 && p.mtu_bytes >= 200;
    }
    }
    return false;
}

void reject_unknown_keys(const json& obj, std::initializer_list<const char*> allowed,
                         const std::string& where) {
    for (const auto& [key, _] : obj.items()) {
        bool known = false;
        for (const char* a : allowed)
            if (key == a) { known = true; break; }
        if (!known)
            throw ConfigError("unknown key \"" + key + "\" in " + where);
    }
}

const json& require_key(const json& obj, const char* key, const std::string& where) {
    auto it = obj.find(key);
    if (it == obj.end())
        throw ConfigError("missing key \"" + std::string(key) + "\" in " + where);
    return *it;
}

double as_number(const json& v, const std::string& what) {
    if (!v.is_number())
        throw ConfigError(what + " must be a number");
    return v.get<double>();
}

std::uint64_t as_count(const json& v, const std::string& what) {
    if (!v.is_number_unsigned())
        throw ConfigError(what + " must be a non-negative integer");
    return v.get<std::uint64_t>();
}

FlowSpec parse_flow(const json& jf, std::size_t index, const std::string& base_dir) {
    const std::string where = "flows[" + std::to_string(index) + "]";
    if (!jf.is_object())
        throw ConfigError(where + " must be an object");

    const std::string kind = require_key(jf, "kind", where).get<std::string>();
    FlowSpec flow;

    if (kind == "voip") {
        reject_unknown_keys(jf, {"kind", "name", "rate_override_bps", "inter_packet_s",
                                 "packet_bytes"},
                            where);
        VoipParams p;
        if (jf.contains("inter_packet_s"))
            p.inter_packet_s = as_number(jf["inter_packet_s"], where + ".inter_packet_s");
        if (jf.contains("packet_bytes"))
            p.packet_bytes = static_cast<std::uint32_t>(as_count(jf["packet_bytes"], where + ".packet_bytes"));
        flow.kind = FlowKind::voip;
        flow.params = p;
    } else if (kind == "camera") {
        reject_unknown_keys(jf, {"kind", "name", "rate_override_bps", "packets_per_burst",
                                 "packet_bytes", "burst_interval_mean_s",
                                 "burst_interval_halfwidth_s", "intra_burst_gap_s"},
                            where);
        CameraParams p;
        if (jf.contains("packets_per_burst"))
            p.packets_per_burst = static_cast<std::uint32_t>(as_count(jf["packets_per_burst"], where + ".packets_per_burst"));
        if (jf.contains("packet_bytes"))
            p.packet_bytes = static_cast<std::uint32_t>(as_count(jf["packet_bytes"], where + ".packet_bytes"));
        if (jf.contains("burst_interval_mean_s"))
            p.burst_interval_mean_s = as_number(jf["burst_interval_mean_s"], where + ".burst_interval_mean_s");
        if (jf.contains("burst_interval_halfwidth_s"))
            p.burst_interval_halfwidth_s = as_number(jf["burst_interval_halfwidth_s"], where + ".burst_interval_halfwidth_s");
        if (jf.contains("intra_burst_gap_s"))
            p.intra_burst_gap_s = as_number(jf["intra_burst_gap_s"], where + ".intra_burst_gap_s");
        flow.kind = FlowKind::camera;
        flow.params = p;
    } else if (kind == "trace") {
        reject_unknown_keys(jf, {"kind", "name", "rate_override_bps", "path", "loop"}, where);
        TraceParams p;
        p.path = require_key(jf, "path", where).get<std::string>();
        if (jf.contains("loop")) {
            if (!jf["loop"].is_boolean())
                throw ConfigError(where + ".loop must be a boolean");
            p.loop = jf["loop"].get<bool>();
        }
        if (!base_dir.empty() && std::filesystem::path(p.path).is_relative())
            p.path = (std::filesystem::path(base_dir) / p.path).string();
        p.records = std::make_shared<const std::vector<TraceRecord>>(load_trace(p.path));
        flow.kind = FlowKind::trace;
        flow.params = p;
    } else if (kind == "synth_vc") {
        reject_unknown_keys(jf, {"kind", "name", "rate_override_bps", "mean_bps", "fps",
                                 "mtu_bytes"},
                            where);
        SynthVcParams p;
        if (jf.contains("mean_bps"))
            p.mean_bps = as_number(jf["mean_bps"], where + ".mean_bps");
        if (jf.contains("fps"))
            p.fps = as_number(jf["fps"], where + ".fps");
        if (jf.contains("mtu_bytes"))
            p.mtu_bytes = static_cast<std::uint32_t>(as_count(jf["mtu_bytes"], where + ".mtu_bytes"));
        flow.kind = FlowKind::synth_vc;
        flow.params = p;
    } else {
        throw ConfigError(where + ": unknown flow kind \"" + kind + "\"");
    }

    if (jf.contains("rate_override_bps"))
        flow.rate_override_bps = as_number(jf["rate_override_bps"], where + ".rate_override_bps");
    if (jf.contains("name"))
        flow.name = jf["name"].get<std::string>();
    else
        flow.name = std::string(to_string(flow.kind)) + "_" + std::to_string(index);
    return flow;
}

} // namespace

const char* to_string(Violation v) {
    switch (v) {
    case Violation::empty_flows: return "flows must be non-empty";
    case Violation::non_positive_duration: return "duration_s must be > 0";
    case Violation::negative_start_window: return "start_window_s must be >= 0";
    case Violation::start_window_exceeds_duration: return "start_window_s must be < duration_s";
    case Violation::zero_capacity: return "link.capacity_bps must be > 0";
    case Violation::negative_network_delay: return "link.network_delay_ms must be >= 0";
    case Violation::zero_buffer_limit: return "buffer.limit must be >= 1";
    case Violation::invalid_flow_param: return "a flow has out-of-range parameters";
    }
    return "?";
}

std::vector<Violation> validate_scenario(const Scenario& s) {
    std::vector<Violation> out;
    if (s.flows.empty()) out.push_back(Violation::empty_flows);
    if (!(s.duration_s > 0)) out.push_back(Violation::non_positive_duration);
    if (s.start_window_s < 0) out.push_back(Violation::negative_start_window);
    else if (s.start_window_s >= s.duration_s)
        out.push_back(Violation::start_window_exceeds_duration);
    if (!(s.link.capacity_bps > 0)) out.push_back(Violation::zero_capacity);
    if (s.link.network_delay_ms < 0) out.push_back(Violation::negative_network_delay);
    if (s.buffer.limit < 1) out.push_back(Violation::zero_buffer_limit);
    for (const auto& f : s.flows)
        if (!flow_params_valid(f)) {
            out.push_back(Violation::invalid_flow_param);
            break;
        }
    return out;
}

void require_valid(const Scenario& s) {
    auto violations = validate_scenario(s);
    if (violations.empty()) return;
    std::ostringstream msg;
    msg << "invalid scenario:";
    for (auto v : violations) msg << "\n  - " << to_string(v);
    throw ConfigError(msg.str());
}

double flow_rate_bps(const FlowSpec& flow) {
    if (flow.rate_override_bps) return *flow.rate_override_bps;
    switch (flow.kind) {
    case FlowKind::voip: {
        const auto& p = flow.voip();
        return p.packet_bytes * 8.0 / p.inter_packet_s;
    }
    case FlowKind::camera: {
        const auto& p = flow.camera();
        return double(p.packets_per_burst) * p.packet_bytes * 8.0 / p.burst_interval_mean_s;
    }
    case FlowKind::trace: {
        const auto& p = flow.trace();
        if (!p.records)
            throw UnresolvableRate("trace flow \"" + flow.name + "\" has no loaded records");
        return trace_rate_bps(*p.records);
    }
    case FlowKind::synth_vc:
        return flow.synth_vc().mean_bps;
    }
    return 0.0;
}

double offered_load_bps(const Scenario& s) {
    double total = 0.0;
    for (const auto& f : s.flows) total += flow_rate_bps(f);
    return total;
}

double utilization(const Scenario& s) {
    return offered_load_bps(s) / s.link.capacity_bps;
}

Scenario parse_scenario(const std::string& json_text, const std::string& base_dir) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("scenario JSON parse failed: ") + e.what());
    }
    if (!doc.is_object())
        throw ConfigError("scenario document must be a JSON object");

    try {
        reject_unknown_keys(doc, {"link", "buffer", "flows", "duration_s", "start_window_s"},
                            "scenario");

        Scenario s;
        const json& jlink = require_key(doc, "link", "scenario");
        reject_unknown_keys(jlink, {"capacity_bps", "network_delay_ms"}, "link");
        s.link.capacity_bps = as_number(require_key(jlink, "capacity_bps", "link"),
                                        "link.capacity_bps");
        if (jlink.contains("network_delay_ms"))
            s.link.network_delay_ms = as_number(jlink["network_delay_ms"], "link.network_delay_ms");

        const json& jbuf = require_key(doc, "buffer", "scenario");
        reject_unknown_keys(jbuf, {"mode", "limit"}, "buffer");
        const std::string mode = require_key(jbuf, "mode", "buffer").get<std::string>();
        if (mode == "packets") s.buffer.mode = BufferMode::packets;
        else if (mode == "bytes") s.buffer.mode = BufferMode::bytes;
        else throw ConfigError("buffer.mode must be \"packets\" or \"bytes\"");
        s.buffer.limit = as_count(require_key(jbuf, "limit", "buffer"), "buffer.limit");

        const json& jflows = require_key(doc, "flows", "scenario");
        if (!jflows.is_array())
            throw ConfigError("flows must be an array");
        for (std::size_t i = 0; i < jflows.size(); ++i)
            s.flows.push_back(parse_flow(jflows[i], i, base_dir));

        s.duration_s = as_number(require_key(doc, "duration_s", "scenario"), "duration_s");
        if (doc.contains("start_window_s"))
            s.start_window_s = as_number(doc["start_window_s"], "start_window_s");

        require_valid(s);
        return s;
    } catch (const json::exception& e) {
        throw ConfigError(std::string("scenario field has wrong type: ") + e.what());
    }
}

Scenario load_scenario(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw ConfigError("cannot open scenario file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_scenario(buf.str(), std::filesystem::path(path).parent_path().string());
}

} // namespace burstgate
