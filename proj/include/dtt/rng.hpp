#pragma once
// Counter-based random streams.
//
// Every draw is a pure function of (stream key, segment, lane), so a trace
// can be replayed in isolation and the codeword of user j in segment i does
// not depend on which other users are still connected.

#include <cstdint>

namespace dtt {

inline constexpr std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

// Maps 64 random bits to a double in [0, 1) with 53 bits of resolution.
inline constexpr double to_unit(std::uint64_t bits) {
    return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

// Per-trial seed derived from a master seed and the trial index.
inline constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
    return splitmix64(splitmix64(master) ^ splitmix64(index + 0x632BE59BD9B4E019ull));
}

class CounterRng {
public:
    // Lanes reserved per segment; user lanes start at kFirstUserLane.
    static constexpr std::uint64_t kBiasLane = 0;
    static constexpr std::uint64_t kAttackLane = 1;
    static constexpr std::uint64_t kFirstUserLane = 2;

    explicit constexpr CounterRng(std::uint64_t key) : key_(splitmix64(key)) {}

    constexpr std::uint64_t segment_key(std::uint64_t segment) const {
        return splitmix64(key_ ^ (segment * 0xD1B54A32D192ED03ull));
    }

    static constexpr double draw(std::uint64_t segment_key, std::uint64_t lane) {
        return to_unit(splitmix64(segment_key + lane * 0x9E3779B97F4A7C15ull));
    }

    constexpr double uniform(std::uint64_t segment, std::uint64_t lane) const {
        return draw(segment_key(segment), lane);
    }

private:
    std::uint64_t key_;
};

} // namespace dtt
