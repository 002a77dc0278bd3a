#pragma once

#include <cmath>
#include <compare>
#include <cstdint>

namespace burstgate {

/// Simulation clock value. Stored as integer microseconds so that event
/// ordering and arithmetic are exact and platform-independent; all external
/// interfaces speak decimal seconds.
class SimTime {
public:
    constexpr SimTime() = default;

    static constexpr SimTime from_micros(std::int64_t us) { return SimTime(us); }

    static SimTime from_seconds(double s) {
        return SimTime(static_cast<std::int64_t>(std::llround(s * 1e6)));
    }

    constexpr std::int64_t micros() const { return us_; }
    constexpr double seconds() const { return static_cast<double>(us_) / 1e6; }

    friend constexpr auto operator<=>(SimTime, SimTime) = default;

    friend constexpr SimTime operator+(SimTime a, SimTime b) { return SimTime(a.us_ + b.us_); }
    friend constexpr SimTime operator-(SimTime a, SimTime b) { return SimTime(a.us_ - b.us_); }

    SimTime& operator+=(SimTime other) {
        us_ += other.us_;
        return *this;
    }

private:
    constexpr explicit SimTime(std::int64_t us) : us_(us) {}
    std::int64_t us_ = 0;
};

/// Serialization time of `size_bytes` on a link of `capacity_bps`, rounded
/// to the microsecond grid.
inline SimTime service_time(std::uint32_t size_bytes, double capacity_bps) {
    const double us = static_cast<double>(size_bytes) * 8.0 * 1e6 / capacity_bps;
    return SimTime::from_micros(std::llround(us));
}

} // namespace burstgate
