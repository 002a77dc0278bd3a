#include <doctest.h>

#include <deque>
#include <memory>
#include <queue>

#include "burstgate/engine.hpp"
#include "burstgate/errors.hpp"
#include "burstgate/rng.hpp"
#include "burstgate/traffic.hpp"

using namespace burstgate;

namespace {

Scenario one_flow_scenario(double capacity_bps, std::uint64_t buffer_packets, FlowSpec flow,
                           double duration_s, double window_s = 0.0) {
    Scenario s;
    s.link.capacity_bps = capacity_bps;
    s.link.network_delay_ms = 0.0;
    s.buffer = {BufferMode::packets, buffer_packets};
    flow.name = flow.name.empty() ? "f0" : flow.name;
    s.flows = {std::move(flow)};
    s.duration_s = duration_s;
    s.start_window_s = window_s;
    return s;
}

FlowSpec voip_flow(const char* name = "call") {
    FlowSpec f;
    f.kind = FlowKind::voip;
    f.params = VoipParams{};
    f.name = name;
    return f;
}

FlowSpec camera_flow(const char* name = "cam") {
    FlowSpec f;
    f.kind = FlowKind::camera;
    f.params = CameraParams{};
    f.name = name;
    return f;
}

bool same_stats(const FlowStats& a, const FlowStats& b) {
    return a.sent == b.sent && a.delivered == b.delivered && a.dropped == b.dropped &&
           a.residual == b.residual && a.bytes_sent == b.bytes_sent &&
           a.bytes_delivered == b.bytes_delivered && a.bytes_dropped == b.bytes_dropped &&
           a.queue_delay_sum_us == b.queue_delay_sum_us;
}

bool same_result(const IterationResult& a, const IterationResult& b) {
    if (a.per_flow.size() != b.per_flow.size()) return false;
    for (std::size_t i = 0; i < a.per_flow.size(); ++i)
        if (!same_stats(a.per_flow[i], b.per_flow[i])) return false;
    return same_stats(a.aggregate, b.aggregate);
}

// A second, deliberately different implementation of the same model: a
// min-heap event loop with scheduled completion events, instead of the
// production sorted-arrival walk. Agreement between the two on arbitrary
// scenarios is strong evidence that neither mis-handles event ordering,
// capacity accounting, or the end-of-run drain.
struct RefStats {
    std::uint64_t sent = 0, delivered = 0, dropped = 0, residual = 0;
    std::int64_t delay_sum_us = 0;
};

std::vector<RefStats> reference_run(const Scenario& s, std::uint64_t seed) {
    const SimTime until = SimTime::from_seconds(s.duration_s);
    std::vector<std::vector<Packet>> arrivals(s.flows.size());
    for (std::uint32_t f = 0; f < s.flows.size(); ++f)
        arrivals[f] =
            generate_arrivals(s.flows[f], f, mix_seed(seed, f), until, s.start_window_s);

    std::priority_queue<Event, std::vector<Event>, std::greater<Event>> heap;
    for (std::uint32_t f = 0; f < arrivals.size(); ++f)
        for (const Packet& p : arrivals[f])
            heap.push({p.created_at, EventKind::arrival, f, p.seq});

    std::vector<RefStats> stats(s.flows.size());
    std::deque<Packet> q;
    std::uint64_t q_bytes = 0;
    bool busy = false;
    Packet on_wire;

    const auto fits = [&](const Packet& p) {
        if (s.buffer.mode == BufferMode::packets) return q.size() + 1 <= s.buffer.limit;
        return q_bytes + p.size_bytes <= s.buffer.limit;
    };
    const auto start_service = [&](const Packet& p, SimTime now) {
        busy = true;
        on_wire = p;
        const SimTime dep = now + service_time(p.size_bytes, s.link.capacity_bps);
        heap.push({dep, EventKind::service_completion, p.flow_id, p.seq});
    };

    while (!heap.empty()) {
        const Event ev = heap.top();
        if (ev.time > until) break;
        heap.pop();
        if (ev.kind == EventKind::service_completion) {
            stats[ev.flow_id].delivered += 1;
            stats[ev.flow_id].delay_sum_us += (ev.time - on_wire.created_at).micros();
            if (!q.empty()) {
                const Packet next = q.front();
                q.pop_front();
                q_bytes -= next.size_bytes;
                start_service(next, ev.time);
            } else {
                busy = false;
            }
        } else {
            const Packet& p = arrivals[ev.flow_id][ev.seq];
            stats[p.flow_id].sent += 1;
            if (!busy && q.empty()) {
                start_service(p, ev.time);
            } else if (fits(p)) {
                q.push_back(p);
                q_bytes += p.size_bytes;
            } else {
                stats[p.flow_id].dropped += 1;
            }
        }
    }
    if (busy) {
        stats[on_wire.flow_id].residual += 1;
        for (const Packet& p : q) stats[p.flow_id].residual += 1;
    }
    return stats;
}

} // namespace

TEST_SUITE("engine") {

TEST_CASE("an unloaded call sees pure serialization delay") {
    const auto s = one_flow_scenario(5e6, 30, voip_flow(), 1.0);
    const auto r = run_iteration(s, 42);
    REQUIRE(r.per_flow.size() == 1);
    const auto& f = r.per_flow[0];
    CHECK(f.sent == 50);
    CHECK(f.delivered == 50);
    CHECK(f.dropped == 0);
    CHECK(f.residual == 0);
    // 60 B on a 5 Mb/s wire serializes in exactly 96 us
    CHECK(f.queue_delay_sum_us == 50 * 96);
    CHECK(f.mean_queue_delay_s() == doctest::Approx(96e-6));
    CHECK(f.bytes_sent == 3000);
    CHECK(f.bytes_delivered == 3000);
    CHECK(r.aggregate.sent == 50);
}

TEST_CASE("a completion frees its slot before a simultaneous arrival") {
    // Service time of one 60 B packet at 24 kb/s is exactly the 20 ms packet
    // interval, so every arrival instant coincides with a departure. With a
    // one-slot buffer the tie rule decides everything: completions first
    // means flow 0 always finds the slot just vacated, and flow 1 (judged
    // after flow 0 at equal times) finds it taken.
    Scenario s = one_flow_scenario(24000, 1, voip_flow("a"), 1.0);
    s.flows.push_back(voip_flow("b"));
    const auto r = run_iteration(s, 7);
    const auto& a = r.per_flow[0];
    const auto& b = r.per_flow[1];
    CHECK(a.sent == 50);
    CHECK(b.sent == 50);
    CHECK(a.dropped == 0);
    CHECK(b.dropped == 49);
    CHECK(b.delivered == 1);
    CHECK(a.delivered == 49);
    CHECK(a.residual == 1);
    CHECK(b.residual == 0);
}

TEST_CASE("packets still in flight at the horizon are residual, not lost") {
    // 40 ms service against a 20 ms arrival period: the queue grows by one
    // packet per service and nothing is ever dropped into a large buffer.
    const auto s = one_flow_scenario(12000, 100, voip_flow(), 1.0);
    const auto r = run_iteration(s, 3);
    const auto& f = r.per_flow[0];
    CHECK(f.sent == 50);
    CHECK(f.delivered == 25);
    CHECK(f.dropped == 0);
    CHECK(f.residual == 25);
}

TEST_CASE("warmup excludes early packets from every counter") {
    const auto s = one_flow_scenario(5e6, 30, voip_flow(), 1.0);
    RunOptions opts;
    opts.warmup_s = 0.5;
    const auto r = run_iteration(s, 42, opts);
    const auto& f = r.per_flow[0];
    CHECK(f.sent == 25); // arrivals at 0.50, 0.52, ..., 0.98
    CHECK(f.delivered == 25);
    CHECK(f.queue_delay_sum_us == 25 * 96);

    // same run, warmed up past a standing queue: counted packets never reach
    // the wire inside the window
    const auto slow = one_flow_scenario(12000, 100, voip_flow(), 1.0);
    const auto r2 = run_iteration(slow, 3, opts);
    CHECK(r2.per_flow[0].sent == 25);
    CHECK(r2.per_flow[0].delivered == 0);
    CHECK(r2.per_flow[0].residual == 25);
}

TEST_CASE("equal seeds reproduce a run exactly; different seeds do not") {
    Scenario s = one_flow_scenario(3.5e6, 10, camera_flow("cam1"), 20.0, 5.0);
    s.flows.push_back(camera_flow("cam2"));
    s.flows.push_back(voip_flow());
    const auto r1 = run_iteration(s, 1234);
    const auto r2 = run_iteration(s, 1234);
    CHECK(same_result(r1, r2));
    const auto r3 = run_iteration(s, 1235);
    CHECK(!same_result(r1, r3));
}

TEST_CASE("a full burst into a small buffer loses a fixed overflow") {
    // One camera, 5-slot buffer, 3.5 Mb/s. A 26-packet burst lands within
    // 3 ms while the first service takes 3.429 ms, so 1 goes to the wire,
    // 5 queue, and exactly 20 drop -- every time. The queue then drains long
    // before the next burst (>= 218 ms away).
    auto s = one_flow_scenario(3.5e6, 5, camera_flow(), 10.0);
    std::vector<DropRecord> drops;
    RunOptions opts;
    opts.drop_log = &drops;
    const auto r = run_iteration(s, 99, opts);
    REQUIRE(r.per_flow[0].dropped > 0);
    // group drops by burst (26 packets per burst, seq dense from 0)
    std::vector<std::uint64_t> per_burst;
    for (const auto& d : drops) {
        const std::uint64_t burst = d.seq / 26;
        if (per_burst.size() <= burst) per_burst.resize(burst + 1, 0);
        ++per_burst[burst];
    }
    REQUIRE(per_burst.size() >= 30);
    // ignore the final burst, which the 10 s horizon may have truncated
    for (std::size_t b = 0; b + 1 < per_burst.size(); ++b)
        CHECK(per_burst[b] == 20);
}

TEST_CASE("drop log names the rejected packets") {
    auto s = one_flow_scenario(3.5e6, 5, camera_flow(), 1.0);
    std::vector<DropRecord> drops;
    RunOptions opts;
    opts.drop_log = &drops;
    const auto r = run_iteration(s, 5, opts);
    CHECK(drops.size() == r.per_flow[0].dropped);
    // first burst: seq 0 on the wire, 1-5 queued, 6-25 rejected
    REQUIRE(drops.size() >= 20);
    for (int i = 0; i < 20; ++i) {
        CHECK(drops[std::size_t(i)].flow_id == 0);
        CHECK(drops[std::size_t(i)].seq == std::uint64_t(6 + i));
    }
}

TEST_CASE("monte-carlo runner matches manual per-iteration seeds") {
    Scenario s = one_flow_scenario(3.5e6, 10, camera_flow(), 10.0, 2.0);
    s.flows.push_back(voip_flow());
    RunConfig cfg;
    cfg.iterations = 6;
    cfg.master_seed = 21;
    const auto many = run_many(s, cfg, 1);
    REQUIRE(many.size() == 6);
    for (std::uint32_t i = 0; i < 6; ++i) {
        CHECK(many[i].iteration == i);
        CHECK(many[i].seed == mix_seed(21, i));
        CHECK(same_result(many[i], run_iteration(s, mix_seed(21, i))));
    }
}

TEST_CASE("results are independent of the worker count") {
    Scenario s = one_flow_scenario(3.5e6, 10, camera_flow(), 10.0, 2.0);
    s.flows.push_back(voip_flow());
    RunConfig cfg;
    cfg.iterations = 9;
    cfg.master_seed = 4;
    const auto serial = run_many(s, cfg, 1);
    const auto pooled = run_many(s, cfg, 4);
    const auto defaulted = run_many(s, cfg, 0);
    REQUIRE(serial.size() == 9);
    REQUIRE(pooled.size() == 9);
    REQUIRE(defaulted.size() == 9);
    for (std::size_t i = 0; i < 9; ++i) {
        CHECK(same_result(serial[i], pooled[i]));
        CHECK(same_result(serial[i], defaulted[i]));
    }
}

TEST_CASE("a bad scenario is rejected before any iteration runs") {
    Scenario s = one_flow_scenario(3.5e6, 10, camera_flow(), 1.0);
    s.flows[0].params = CameraParams{.packets_per_burst = 0};
    RunConfig cfg;
    cfg.iterations = 3;
    CHECK_THROWS_WITH_AS(run_many(s, cfg, 2), doctest::Contains("invalid scenario"),
                         ConfigError);
}

TEST_CASE("an error inside a run names its iteration") {
    // a zero-span looped trace passes static validation but cannot generate
    Scenario s = one_flow_scenario(3.5e6, 10, camera_flow(), 1.0);
    FlowSpec fs;
    fs.kind = FlowKind::trace;
    TraceParams tp;
    tp.path = "flat";
    tp.loop = true;
    tp.records = std::make_shared<std::vector<TraceRecord>>(
        std::vector<TraceRecord>{{0.0, 100}});
    fs.params = tp;
    fs.rate_override_bps = 1000.0;
    fs.name = "replay";
    s.flows.push_back(fs);
    RunConfig cfg;
    cfg.iterations = 3;
    CHECK_THROWS_WITH_AS(run_many(s, cfg, 1), doctest::Contains("iteration 0"), ConfigError);
    CHECK_THROWS_WITH_AS(run_many(s, cfg, 1), doctest::Contains("cannot loop"), ConfigError);
    // pooled runs keep the category (and some failing index) intact
    CHECK_THROWS_WITH_AS(run_many(s, cfg, 2), doctest::Contains("iteration"), ConfigError);
}

TEST_CASE("heap-based reference simulator agrees on random scenarios") {
    SplitMix64 pick(97);
    auto trace_records = std::make_shared<std::vector<TraceRecord>>(
        std::vector<TraceRecord>{{0.0, 400}, {0.05, 1200}, {0.1, 800}});
    for (int k = 0; k < 10; ++k) {
        Scenario s;
        s.link.capacity_bps = pick.next_uniform(1e6, 10e6);
        s.link.network_delay_ms = 0.0;
        if (k % 2 == 0)
            s.buffer = {BufferMode::packets, 3 + pick.next_u64() % 38};
        else
            s.buffer = {BufferMode::bytes, 4500 + pick.next_u64() % 55000};
        s.duration_s = 5.0;
        s.start_window_s = 1.0;
        const unsigned n_flows = 1 + unsigned(pick.next_u64() % 4);
        for (unsigned f = 0; f < n_flows; ++f) {
            switch ((k + int(f)) % 4) {
            case 0: s.flows.push_back(camera_flow()); break;
            case 1: s.flows.push_back(voip_flow()); break;
            case 2: {
                FlowSpec fs;
                fs.kind = FlowKind::synth_vc;
                fs.params = SynthVcParams{};
                fs.name = "vc";
                s.flows.push_back(fs);
                break;
            }
            default: {
                FlowSpec fs;
                fs.kind = FlowKind::trace;
                TraceParams tp;
                tp.path = "mem";
                tp.loop = true;
                tp.records = trace_records;
                fs.params = tp;
                fs.rate_override_bps = 192000.0;
                fs.name = "replay";
                s.flows.push_back(fs);
                break;
            }
            }
        }
        const std::uint64_t seed = mix_seed(1000, std::uint64_t(k));
        const auto got = run_iteration(s, seed);
        const auto want = reference_run(s, seed);
        REQUIRE(got.per_flow.size() == want.size());
        for (std::size_t f = 0; f < want.size(); ++f) {
            INFO("scenario ", k, " flow ", f);
            CHECK(got.per_flow[f].sent == want[f].sent);
            CHECK(got.per_flow[f].delivered == want[f].delivered);
            CHECK(got.per_flow[f].dropped == want[f].dropped);
            CHECK(got.per_flow[f].residual == want[f].residual);
            CHECK(got.per_flow[f].queue_delay_sum_us == want[f].delay_sum_us);
        }
    }
}

TEST_CASE("aggregate counters are the exact per-flow sums") {
    Scenario s = one_flow_scenario(3.5e6, 8, camera_flow("cam1"), 15.0, 3.0);
    s.flows.push_back(camera_flow("cam2"));
    s.flows.push_back(voip_flow());
    const auto r = run_iteration(s, 11);
    FlowStats sum;
    for (const auto& f : r.per_flow) {
        sum.sent += f.sent;
        sum.delivered += f.delivered;
        sum.dropped += f.dropped;
        sum.residual += f.residual;
        sum.bytes_sent += f.bytes_sent;
        sum.bytes_delivered += f.bytes_delivered;
        sum.bytes_dropped += f.bytes_dropped;
        sum.queue_delay_sum_us += f.queue_delay_sum_us;
    }
    CHECK(same_stats(sum, r.aggregate));
    CHECK(r.aggregate.sent == r.aggregate.delivered + r.aggregate.dropped + r.aggregate.residual);
}

TEST_CASE("buffer sweep tightens losses as the buffer grows") {
    const auto s = one_flow_scenario(3.5e6, 5, camera_flow(), 20.0, 1.0);
    RunConfig cfg;
    cfg.iterations = 4;
    cfg.master_seed = 2;
    const std::vector<double> limits{5, 10, 20, 30};
    const auto points = sweep(s, SweepParameter::buffer_limit, limits, cfg, 2);
    REQUIRE(points.size() == 4);
    for (std::size_t i = 0; i < points.size(); ++i) {
        CHECK(points[i].value == doctest::Approx(limits[i]));
        REQUIRE(points[i].per_flow.size() == 1);
        if (i)
            CHECK(points[i].aggregate.mean_loss_rate <= points[i - 1].aggregate.mean_loss_rate);
    }
    CHECK(points[0].aggregate.mean_loss_rate > 0.0);
    // a sweep cell is the plain mean/std of the per-iteration loss rates
    Scenario at10 = s;
    at10.buffer.limit = 10;
    const auto runs = run_many(at10, cfg, 1);
    double mean = 0;
    for (const auto& r : runs) mean += r.aggregate.loss_rate();
    mean /= double(runs.size());
    CHECK(points[1].aggregate.mean_loss_rate == doctest::Approx(mean));
}

TEST_CASE("capacity sweep relieves losses as the link speeds up") {
    Scenario s = one_flow_scenario(3.5e6, 10, camera_flow("cam1"), 20.0, 2.0);
    s.flows.push_back(camera_flow("cam2"));
    RunConfig cfg;
    cfg.iterations = 3;
    cfg.master_seed = 8;
    // a camera burst is inelastic (100 Mb/s instantaneous), so only a link
    // faster than the intra-burst rate is guaranteed loss-free
    const auto points =
        sweep(s, SweepParameter::capacity_bps, {2.5e6, 5e6, 10e6, 400e6}, cfg, 2);
    REQUIRE(points.size() == 4);
    for (std::size_t i = 1; i < points.size(); ++i)
        CHECK(points[i].aggregate.mean_loss_rate <= points[i - 1].aggregate.mean_loss_rate);
    CHECK(points.front().aggregate.mean_loss_rate > 0.0);
    CHECK(points.back().aggregate.mean_loss_rate == doctest::Approx(0.0));
}

TEST_CASE("a sweep value that breaks the scenario is rejected") {
    const auto s = one_flow_scenario(3.5e6, 5, camera_flow(), 5.0);
    RunConfig cfg;
    cfg.iterations = 1;
    CHECK_THROWS_AS(sweep(s, SweepParameter::buffer_limit, {10, 0}, cfg, 1), ConfigError);
    CHECK_THROWS_AS(sweep(s, SweepParameter::capacity_bps, {-1e6}, cfg, 1), ConfigError);
}

} // TEST_SUITE
