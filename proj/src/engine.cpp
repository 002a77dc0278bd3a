#include "burstgate/engine.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <mutex>
#include <thread>

#include "burstgate/errors.hpp"
#include "burstgate/queue.hpp"
#include "burstgate/scenario.hpp"
#include "burstgate/traffic.hpp"

namespace burstgate {

namespace {

void check_capacity(const DropTailBuffer& buf, const BufferCapacity& cap) {
    const bool ok = cap.mode == BufferMode::packets ? buf.packets() <= cap.limit
                                                    : buf.bytes() <= cap.limit;
    if (!ok)
        throw InvariantViolation("buffer capacity exceeded");
}

void check_conservation(const FlowStats& f) {
    if (f.sent != f.delivered + f.dropped + f.residual)
        throw InvariantViolation("packet conservation broken for flow \"" + f.name + "\"");
}

} // namespace

IterationResult run_iteration(const Scenario& s, std::uint64_t seed, const RunOptions& opts) {
    require_valid(s);
    const SimTime until = SimTime::from_seconds(s.duration_s);
    const std::int64_t warmup_us = std::llround(opts.warmup_s * 1e6);
    const auto counted = [&](const Packet& p) { return p.created_at.micros() >= warmup_us; };

    IterationResult result;
    result.seed = seed;
    result.per_flow.resize(s.flows.size());

    std::vector<std::vector<Packet>> arrivals(s.flows.size());
    std::size_t total = 0;
    for (std::uint32_t f = 0; f < s.flows.size(); ++f) {
        arrivals[f] = generate_arrivals(s.flows[f], f, mix_seed(seed, f), until,
                                        s.start_window_s);
        total += arrivals[f].size();
        auto& st = result.per_flow[f];
        st.flow_id = f;
        st.kind = s.flows[f].kind;
        st.name = s.flows[f].name;
    }

    // Merge every flow's arrivals into the one total event order. Streams
    // emit seq densely from 0, so an event maps back to its packet by index.
    std::vector<Event> order;
    order.reserve(total);
    for (std::uint32_t f = 0; f < arrivals.size(); ++f)
        for (const Packet& p : arrivals[f])
            order.push_back({p.created_at, EventKind::arrival, f, p.seq});
    std::sort(order.begin(), order.end());
    for (std::size_t i = 1; i < order.size(); ++i)
        if (order[i - 1] == order[i])
            throw InvariantViolation("event order is not total (duplicate event)");

    DropTailBuffer buf(s.buffer);
    bool link_busy = false;
    Packet in_service;
    SimTime departs;

    const auto deliver = [&](const Packet& p, SimTime at) {
        if (!counted(p)) return;
        auto& st = result.per_flow[p.flow_id];
        st.delivered += 1;
        st.bytes_delivered += p.size_bytes;
        st.queue_delay_sum_us += (at - p.created_at).micros();
    };

    // Finish the in-service packet and promote the queue head, if any.
    const auto complete = [&] {
        deliver(in_service, departs);
        if (!buf.empty()) {
            in_service = buf.pop();
            departs = departs + service_time(in_service.size_bytes, s.link.capacity_bps);
        } else {
            link_busy = false;
        }
        check_capacity(buf, s.buffer);
    };

    for (const Event& ev : order) {
        // Completions due no later than this arrival fire first, so a slot
        // freed at the same instant is available to the arriving packet.
        while (link_busy && departs <= ev.time)
            complete();

        const Packet& p = arrivals[ev.flow_id][ev.seq];
        auto& st = result.per_flow[p.flow_id];
        if (counted(p)) {
            st.sent += 1;
            st.bytes_sent += p.size_bytes;
        }
        switch (buf.offer(p, !link_busy)) {
        case DropTailBuffer::Admit::start_service:
            link_busy = true;
            in_service = p;
            departs = p.created_at + service_time(p.size_bytes, s.link.capacity_bps);
            break;
        case DropTailBuffer::Admit::queued:
            break;
        case DropTailBuffer::Admit::dropped:
            if (counted(p)) {
                st.dropped += 1;
                st.bytes_dropped += p.size_bytes;
                if (opts.drop_log)
                    opts.drop_log->push_back({p.flow_id, p.seq});
            }
            break;
        }
        check_capacity(buf, s.buffer);
    }

    // Drain whatever still completes inside the measurement window; the rest
    // is neither delivered nor lost.
    while (link_busy && departs <= until)
        complete();
    if (link_busy) {
        if (counted(in_service)) result.per_flow[in_service.flow_id].residual += 1;
        while (!buf.empty()) {
            const Packet p = buf.pop();
            if (counted(p)) result.per_flow[p.flow_id].residual += 1;
        }
    }

    result.aggregate.name = "aggregate";
    for (const auto& st : result.per_flow) {
        check_conservation(st);
        result.aggregate.sent += st.sent;
        result.aggregate.delivered += st.delivered;
        result.aggregate.dropped += st.dropped;
        result.aggregate.residual += st.residual;
        result.aggregate.bytes_sent += st.bytes_sent;
        result.aggregate.bytes_delivered += st.bytes_delivered;
        result.aggregate.bytes_dropped += st.bytes_dropped;
        result.aggregate.queue_delay_sum_us += st.queue_delay_sum_us;
    }
    check_conservation(result.aggregate);
    return result;
}

namespace {

// Re-throw the in-flight exception with the failing iteration named, keeping
// its category (config vs invariant) intact for the caller's exit code.
[[noreturn]] void rethrow_with_index(std::uint32_t i) {
    const std::string prefix = "iteration " + std::to_string(i) + ": ";
    try {
        throw;
    } catch (const InvariantViolation& e) {
        throw InvariantViolation(prefix + e.what());
    } catch (const ConfigError& e) {
        throw ConfigError(prefix + e.what());
    }
}

} // namespace

std::vector<IterationResult> run_many(const Scenario& s, const RunConfig& cfg,
                                      unsigned threads) {
    if (cfg.iterations < 1)
        throw ConfigError("iterations must be >= 1");
    require_valid(s);

    if (threads == 0) {
        threads = std::thread::hardware_concurrency();
        if (threads == 0) threads = 1;
    }
    threads = std::min<unsigned>(threads, cfg.iterations);

    std::vector<IterationResult> results(cfg.iterations);
    const auto one = [&](std::uint32_t i) {
        results[i] = run_iteration(s, mix_seed(cfg.master_seed, i));
        results[i].iteration = i;
    };

    if (threads <= 1) {
        for (std::uint32_t i = 0; i < cfg.iterations; ++i) {
            try {
                one(i);
            } catch (...) {
                rethrow_with_index(i);
            }
        }
        return results;
    }

    // Workers pull the next free index; each index is written exactly once,
    // so the output is identical whatever the interleaving.
    std::atomic<std::uint32_t> next{0};
    std::atomic<bool> failed{false};
    std::exception_ptr error;
    std::uint32_t error_index = cfg.iterations;
    std::mutex error_mutex;

    const auto worker = [&] {
        for (;;) {
            const std::uint32_t i = next.fetch_add(1);
            if (i >= cfg.iterations || failed.load()) return;
            try {
                one(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (i < error_index) {
                    error = std::current_exception();
                    error_index = i;
                }
                failed.store(true);
            }
        }
    };

    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();

    if (error) {
        try {
            std::rethrow_exception(error);
        } catch (...) {
            rethrow_with_index(error_index);
        }
    }
    return results;
}

namespace {

SweepCell loss_stats(const std::vector<double>& samples) {
    SweepCell cell;
    if (samples.empty()) return cell;
    double sum = 0;
    for (double v : samples) sum += v;
    cell.mean_loss_rate = sum / double(samples.size());
    if (samples.size() > 1) {
        double sq = 0;
        for (double v : samples) {
            const double d = v - cell.mean_loss_rate;
            sq += d * d;
        }
        cell.std_loss_rate = std::sqrt(sq / double(samples.size() - 1));
    }
    return cell;
}

} // namespace

std::vector<SweepPoint> sweep(const Scenario& base, SweepParameter parameter,
                              const std::vector<double>& values, const RunConfig& cfg,
                              unsigned threads) {
    if (values.empty())
        throw ConfigError("sweep needs at least one value");

    std::vector<SweepPoint> points;
    points.reserve(values.size());
    for (double value : values) {
        Scenario s = base;
        if (parameter == SweepParameter::buffer_limit) {
            if (!(value >= 1))
                throw ConfigError("buffer limit sweep values must be >= 1");
            s.buffer.limit = std::uint64_t(std::llround(value));
        } else {
            if (!(value > 0))
                throw ConfigError("capacity sweep values must be > 0");
            s.link.capacity_bps = value;
        }
        require_valid(s);

        const auto results = run_many(s, cfg, threads);
        SweepPoint point;
        point.value = value;
        point.per_flow.resize(base.flows.size());
        std::vector<double> agg;
        agg.reserve(results.size());
        std::vector<std::vector<double>> per(base.flows.size());
        for (const auto& r : results) {
            agg.push_back(r.aggregate.loss_rate());
            for (std::size_t f = 0; f < r.per_flow.size(); ++f)
                per[f].push_back(r.per_flow[f].loss_rate());
        }
        for (std::size_t f = 0; f < per.size(); ++f)
            point.per_flow[f] = loss_stats(per[f]);
        point.aggregate = loss_stats(agg);
        points.push_back(std::move(point));
    }
    return points;
}

} // namespace burstgate
