#pragma once

#include <cstdint>
#include <deque>
#include <optional>

#include "burstgate/types.hpp"

namespace burstgate {

/// Drop-tail FIFO in front of the serializing link. The packet currently on
/// the wire does not count against the capacity limit; in bytes mode a packet
/// that exactly fills the remaining space is admitted.
class DropTailBuffer {
public:
    explicit DropTailBuffer(BufferCapacity cap) : cap_(cap) {}

    enum class Admit { start_service, queued, dropped };

    /// Offer one packet. `link_idle` tells the buffer the server is free:
    /// an arrival at an idle server with an empty queue bypasses the queue
    /// entirely and goes straight onto the wire.
    Admit offer(const Packet& p, bool link_idle);

    /// Pop the head for service. Precondition: not empty.
    Packet pop();

    bool empty() const { return q_.empty(); }
    std::uint64_t packets() const { return q_.size(); }
    std::uint64_t bytes() const { return bytes_; }

private:
    bool fits(const Packet& p) const;

    BufferCapacity cap_;
    std::deque<Packet> q_;
    std::uint64_t bytes_ = 0;
};

/// Bandwidth-delay product in whole bytes: the classic rule of thumb for
/// router buffer sizing.
std::uint64_t bdp_bytes(double capacity_bps, double rtt_s);

/// BDP divided by sqrt(n) for n concurrent long-lived flows.
std::uint64_t small_buffer_bytes(double capacity_bps, double rtt_s, std::uint32_t n_flows);

/// "Tiny" regime: a few tens of packets regardless of link speed. Default 30;
/// an explicit preference must stay within [10, 99].
std::uint32_t tiny_buffer_packets(std::optional<std::uint32_t> preferred = std::nullopt);

/// Net rate at which a backlogged buffer grows, clamped at zero when the link
/// drains faster than traffic arrives.
double fill_rate_bps(double arrival_bps, double capacity_bps);

/// Time until `free_bits` of headroom is exhausted at the given fill rate.
/// Empty when the buffer never fills (fill rate is zero).
std::optional<double> time_to_overflow_s(double free_bits, double fill_bps);

} // namespace burstgate
