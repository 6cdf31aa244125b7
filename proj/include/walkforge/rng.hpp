#pragma once

#include <cassert>
#include <cmath>
#include <cstdint>

namespace walkforge {

// SplitMix64 (Steele et al.; the generator behind Java's SplittableRandom).
// One fixed algorithm for every random draw in the engine, so walk output is a
// pure function of (seed, query id) across platforms, thread counts, and
// execution modes.  Each walker owns a stream addressed by its query id; the
// (seed, stream) pair is mixed through the SplitMix64 finalizer, so streams are
// cheap to create and statistically independent.
//
// Samplers consume a fixed number of draws per call (documented per sampler in
// sampler.hpp); the interleaved executor relies on that to replay the exact
// sequence of the sequential one.
class RngStream {
public:
    RngStream() = default;

    RngStream(uint64_t seed, uint64_t stream)
        : state_(mix(mix(seed + kGamma) ^ mix(stream ^ kStreamSalt))) {}

    uint64_t next_u64() {
        draws_ += 1;
        state_ += kGamma;
        return mix(state_);
    }

    // Uniform integer in [0, n); exactly one draw.  Lemire multiply-shift
    // mapping: bias below n * 2^-64, invisible at any tolerance we test.
    uint32_t uniform_index(uint32_t n) {
        assert(n > 0);
        return static_cast<uint32_t>(
            (static_cast<unsigned __int128>(next_u64()) * n) >> 64);
    }

    // Uniform real in [0, bound); exactly one draw, 53-bit resolution.  The
    // product is clamped so rounding can never return the bound itself.
    double uniform_real(double bound) {
        assert(bound > 0.0);
        double u = static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
        double r = u * bound;
        return r < bound ? r : std::nextafter(bound, 0.0);
    }

    // Draws consumed so far; lets tests pin the per-call draw counts that the
    // sequential/interleaved equivalence depends on.
    uint64_t draws() const { return draws_; }

    // The SplitMix64 finalizer; also used wherever a pure hash of small
    // integers is needed (synthetic edge weights, stream seeding).
    static uint64_t mix(uint64_t z) {
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

private:
    static constexpr uint64_t kGamma = 0x9E3779B97F4A7C15ULL;
    static constexpr uint64_t kStreamSalt = 0xA3EC647659359ACDULL;

    uint64_t state_ = 0;
    uint64_t draws_ = 0;
};

}  // namespace walkforge
