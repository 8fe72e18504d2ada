#pragma once

#include <cmath>
#include <cstdint>

// Reproducibility contract: every random quantity in this library is a pure
// function of a 64-bit seed through the SplitMix64 generator below.  Streams
// for rows, trials and worker shards are derived with substream_seed(), so a
// run can be replayed piecewise without re-running the whole ensemble.

namespace mwalk::rng {

inline constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;

// SplitMix64 output function (Steele, Lea, Flood).
constexpr std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

// Stream `idx` of a master seed.  Two-level derivations
// substream_seed(substream_seed(s, a), b) are used for (row, trial) style
// addressing; the golden-ratio increment keeps nearby indices decorrelated.
constexpr std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t idx) {
    return mix64(seed + (idx + 1) * kGolden);
}

class Stream {
  public:
    explicit Stream(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        state_ += kGolden;
        return mix64(state_);
    }

    // Uniform on [0,1), 53-bit mantissa.
    double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Exp(1); -log1p(-u) maps [0,1) to (0,inf) without hitting log(0).
    double next_exp() { return -std::log1p(-next_unit()); }

    // Uniform integer in [0, n) by 128-bit multiply-shift.
    std::uint32_t next_below(std::uint32_t n) {
        return static_cast<std::uint32_t>((static_cast<unsigned __int128>(next_u64()) * n) >> 64);
    }

    // Uniform element of F_q via rejection, exact for any q in [2, 256).
    std::uint8_t next_mark(std::uint32_t q) {
        const std::uint64_t limit = ~0ull - (~0ull % q);
        std::uint64_t x = next_u64();
        while (x > limit) x = next_u64();
        return static_cast<std::uint8_t>(x % q);
    }

    bool next_bit() { return (next_u64() & 1ull) != 0; }

    // Poisson(mean) by Knuth's product method.  Means above 500 are split
    // into chunks so exp(-mean) stays in normal double range; the sum of
    // independent Poisson chunks has the exact target law.
    std::uint64_t next_poisson(double mean) {
        std::uint64_t count = 0;
        while (mean > 500.0) {
            count += poisson_small(500.0);
            mean -= 500.0;
        }
        return count + poisson_small(mean);
    }

  private:
    std::uint64_t poisson_small(double mean) {
        if (mean <= 0.0) return 0;
        const double floor = std::exp(-mean);
        std::uint64_t k = 0;
        double p = 1.0;
        do {
            ++k;
            p *= next_unit();
        } while (p > floor);
        return k - 1;
    }

    std::uint64_t state_;
};

}  // namespace mwalk::rng
