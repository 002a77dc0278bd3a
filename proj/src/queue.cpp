#include "burstgate/queue.hpp"

#include <cmath>

#include "burstgate/errors.hpp"

namespace burstgate {

bool DropTailBuffer::fits(const Packet& p) const {
    if (cap_.mode == BufferMode::packets)
        return q_.size() + 1 <= cap_.limit;
    return bytes_ + p.size_bytes <= cap_.limit;
}

DropTailBuffer::Admit DropTailBuffer::offer(const Packet& p, bool link_idle) {
    if (link_idle && q_.empty())
        return Admit::start_service;
    if (!fits(p))
        return Admit::dropped;
    q_.push_back(p);
    bytes_ += p.size_bytes;
    return Admit::queued;
}

Packet DropTailBuffer::pop() {
    if (q_.empty())
        throw InvalidCompletion("pop on an empty buffer");
    Packet p = q_.front();
    q_.pop_front();
    bytes_ -= p.size_bytes;
    return p;
}

std::uint64_t bdp_bytes(double capacity_bps, double rtt_s) {
    if (!(capacity_bps > 0) || !(rtt_s > 0))
        throw ConfigError("bdp needs positive capacity and RTT");
    return std::uint64_t(std::floor(capacity_bps * rtt_s / 8.0));
}

std::uint64_t small_buffer_bytes(double capacity_bps, double rtt_s, std::uint32_t n_flows) {
    if (n_flows < 1)
        throw NonPositiveFlows("flow count must be >= 1");
    return std::uint64_t(std::floor(capacity_bps * rtt_s / 8.0 / std::sqrt(double(n_flows))));
}

std::uint32_t tiny_buffer_packets(std::optional<std::uint32_t> preferred) {
    if (!preferred)
        return 30;
    if (*preferred < 10 || *preferred > 99)
        throw OutOfTinyRange(*preferred);
    return *preferred;
}

double fill_rate_bps(double arrival_bps, double capacity_bps) {
    if (arrival_bps < 0 || capacity_bps < 0)
        throw ConfigError("rates must be non-negative");
    return arrival_bps > capacity_bps ? arrival_bps - capacity_bps : 0.0;
}

std::optional<double> time_to_overflow_s(double free_bits, double fill_bps) {
    if (free_bits < 0 || fill_bps < 0)
        throw ConfigError("free_bits and fill rate must be non-negative");
    if (fill_bps == 0)
        return std::nullopt;
    return free_bits / fill_bps;
}

} // namespace burstgate
