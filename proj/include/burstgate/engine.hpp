#pragma once

#include <compare>
#include <cstdint>
#include <vector>

#include "burstgate/sim_time.hpp"
#include "burstgate/types.hpp"

namespace burstgate {

/// Event order for the merged simulation timeline. At equal times a
/// ServiceCompletion sorts before an Arrival so a departing packet frees its
/// slot before a simultaneous arrival is judged; (flow_id, seq) break the
/// remaining ties, making the order total over distinct events.
enum class EventKind : std::uint8_t { service_completion = 0, arrival = 1 };

struct Event {
    SimTime time;
    EventKind kind = EventKind::arrival;
    std::uint32_t flow_id = 0;
    std::uint64_t seq = 0;

    friend std::strong_ordering operator<=>(const Event&, const Event&) = default;
};

/// Whole-run counters for one flow (or the aggregate). Every offered packet
/// ends up in exactly one of delivered / dropped / residual; residual means
/// still queued or on the wire when the measurement window closed.
struct FlowStats {
    std::uint32_t flow_id = 0;
    FlowKind kind = FlowKind::voip;
    std::string name;

    std::uint64_t sent = 0;
    std::uint64_t delivered = 0;
    std::uint64_t dropped = 0;
    std::uint64_t residual = 0;

    std::uint64_t bytes_sent = 0;
    std::uint64_t bytes_delivered = 0;
    std::uint64_t bytes_dropped = 0;

    // Exact integer sum of (departure − arrival) over delivered packets, so
    // means aggregate across flows without floating-point order effects.
    std::int64_t queue_delay_sum_us = 0;

    double loss_rate() const { return sent ? double(dropped) / double(sent) : 0.0; }

    double mean_queue_delay_s() const {
        return delivered ? double(queue_delay_sum_us) / double(delivered) / 1e6 : 0.0;
    }
};

struct IterationResult {
    std::uint32_t iteration = 0;
    std::uint64_t seed = 0;
    std::vector<FlowStats> per_flow; // indexed by flow_id
    FlowStats aggregate;
};

/// A packet rejected by the buffer, named by identity rather than count so
/// drop sets under different configurations can be compared packet-by-packet.
struct DropRecord {
    std::uint32_t flow_id = 0;
    std::uint64_t seq = 0;

    friend std::strong_ordering operator<=>(const DropRecord&, const DropRecord&) = default;
};

struct RunOptions {
    // Packets created before this instant are simulated but left out of the
    // counters. Default keeps the whole [0, duration] window.
    double warmup_s = 0.0;
    std::vector<DropRecord>* drop_log = nullptr;
};

/// Simulate one repetition: draw per-flow start offsets, generate every
/// arrival, push the merged event order through the buffer and link, and
/// count. Pure in (scenario, seed) — identical inputs give bit-identical
/// results on any platform. Arrivals stop at duration_s; nothing drains
/// afterwards (leftovers are residual).
IterationResult run_iteration(const Scenario& s, std::uint64_t seed,
                              const RunOptions& opts = {});

/// Monte-Carlo runner: iteration i uses mix_seed(cfg.master_seed, i).
/// `threads` caps worker count (0 = hardware default); results are ordered
/// by iteration and independent of the parallelism degree.
std::vector<IterationResult> run_many(const Scenario& s, const RunConfig& cfg,
                                      unsigned threads = 0);

enum class SweepParameter { buffer_limit, capacity_bps };

struct SweepCell {
    double mean_loss_rate = 0.0;
    double std_loss_rate = 0.0; // sample std-dev across iterations (0 if n < 2)
};

struct SweepPoint {
    double value = 0.0;
    std::vector<SweepCell> per_flow; // indexed by flow_id
    SweepCell aggregate;
};

/// Re-run the experiment once per parameter value, collecting per-flow loss
/// statistics across iterations. Each derived scenario is re-validated.
std::vector<SweepPoint> sweep(const Scenario& base, SweepParameter parameter,
                              const std::vector<double>& values, const RunConfig& cfg,
                              unsigned threads = 0);

} // namespace burstgate
