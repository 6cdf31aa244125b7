#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "walkforge/error.hpp"
#include "walkforge/rng.hpp"

namespace walkforge {

// Discrete sampling over a weight sequence P = p_0..p_{n-1} (raw weights, not
// normalized).  Draw counts per generate call are part of the contract:
//
//   NAIVE  1 integer draw                 uniform only
//   ITS    1 real draw                    binary search over cumulative table
//   ALIAS  1 integer + 1 real draw        two-table constant-time lookup
//   REJ    2 draws per trial              dart throwing under p* = max p_i
//   O-REJ  2 draws per trial              p* asserted by the caller, no init scan
enum class SamplerKind : uint8_t { Naive, Its, Alias, Rej, ORej };

const char* to_string(SamplerKind kind);
SamplerKind parse_sampler(const std::string& name);

inline constexpr uint32_t kNoAlias = UINT32_MAX;
inline constexpr uint32_t kRejTrialCap = 1u << 20;

// Validates a weight sequence (non-empty, finite, non-negative, positive sum)
// and returns its plain sum.  Plain summation keeps the cumulative table cheap;
// for n <= 1e6 the relative error stays far below the 1e-12 the tests pin.
double checked_weight_sum(std::span<const double> weights);

// ---- ITS: inverse transform sampling ----------------------------------------

struct ItsTable {
    std::vector<double> cumulative;  // cumulative[i] = p_0 + ... + p_i

    double total() const { return cumulative.back(); }
    uint32_t size() const { return static_cast<uint32_t>(cumulative.size()); }
};

ItsTable its_init(std::span<const double> weights);

// Smallest i with x < cumulative[i]; ties resolve upward, so zero-weight
// entries are never returned.  Shared by the sequential path and the staged
// binary search in the interleaved executor, which must agree bit for bit.
inline uint32_t cumulative_upper_index(const double* cumulative, uint32_t n, double x) {
    uint32_t lo = 0;
    uint32_t hi = n;
    while (lo < hi) {
        uint32_t mid = lo + (hi - lo) / 2;
        if (x < cumulative[mid]) {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    return lo;
}

inline uint32_t its_pick(const ItsTable& table, double x) {
    return cumulative_upper_index(table.cumulative.data(), table.size(), x);
}

inline uint32_t its_generate(const ItsTable& table, RngStream& rng) {
    return its_pick(table, rng.uniform_real(table.total()));
}

// ---- ALIAS: Vose's alias method ---------------------------------------------

struct AliasSlot {
    double split;     // probability of taking `first` when this slot is hit
    uint32_t first;   // index into the weight sequence
    uint32_t second;  // kNoAlias iff split == 1.0
};

struct AliasTable {
    std::vector<AliasSlot> slots;

    uint32_t size() const { return static_cast<uint32_t>(slots.size()); }
};

// Vose's two-worklist construction.  Worklists are filled and consumed in
// ascending index order, so the table is deterministic for a given input.
// The sink form exists so the engine can decorate buckets (it embeds edge
// destinations) while running the identical construction; worklist and scale
// buffers are caller-owned for reuse across many small builds.
template <typename Sink>  // sink(slot_index, split, first, second)
void vose_build(std::span<const double> weights, double sum, std::vector<double>& scaled,
                std::vector<uint32_t>& small, std::vector<uint32_t>& large, Sink&& sink) {
    uint32_t n = static_cast<uint32_t>(weights.size());
    scaled.resize(n);
    small.clear();
    large.clear();
    for (uint32_t i = 0; i < n; ++i) {
        scaled[i] = weights[i] * n / sum;
        (scaled[i] < 1.0 ? small : large).push_back(i);
    }
    size_t small_head = 0;
    size_t large_head = 0;
    while (small_head < small.size() && large_head < large.size()) {
        uint32_t s = small[small_head++];
        uint32_t l = large[large_head];
        sink(s, scaled[s], s, l);
        scaled[l] -= 1.0 - scaled[s];
        if (scaled[l] < 1.0) {
            large_head++;
            small.push_back(l);
        }
    }
    // Leftovers sit at exactly probability 1; forcing the split soaks up the
    // float drift the subtractions above accumulate.
    for (size_t i = small_head; i < small.size(); ++i) {
        sink(small[i], 1.0, small[i], kNoAlias);
    }
    for (size_t i = large_head; i < large.size(); ++i) {
        sink(large[i], 1.0, large[i], kNoAlias);
    }
}

AliasTable alias_init(std::span<const double> weights);

inline uint32_t alias_pick(const AliasTable& table, uint32_t x, double y) {
    const AliasSlot& slot = table.slots[x];
    return y < slot.split ? slot.first : slot.second;
}

// Draw order is x then y; the interleaved ALIAS stage plan draws both in its
// S1 stage in the same order.
inline uint32_t alias_generate(const AliasTable& table, RngStream& rng) {
    uint32_t x = rng.uniform_index(table.size());
    double y = rng.uniform_real(1.0);
    return alias_pick(table, x, y);
}

// ---- REJ / O-REJ: rejection sampling ----------------------------------------

// p* = max p_i, validated like its_init.  Rejection needs no other state; the
// weights themselves are probed per trial.
double rej_init(std::span<const double> weights);

struct RejDraw {
    uint32_t index;
    uint32_t trials;  // number of (x, y) trials, accepted one included
};

// Dart throwing: per trial draw x in [0, n) then y in [0, p_star); accept when
// y < p_x.  Expected trials = n * p_star / sum(P).  `weight_at` is evaluated
// lazily, which is what makes O-REJ initialization-free: the caller asserts
// p_star >= max p_i and no pass over P ever happens.
template <typename WeightAt>
RejDraw rej_generate(uint32_t n, double p_star, WeightAt&& weight_at, RngStream& rng,
                     uint32_t trial_cap = kRejTrialCap) {
    for (uint32_t trial = 1; trial <= trial_cap; ++trial) {
        uint32_t x = rng.uniform_index(n);
        double y = rng.uniform_real(p_star);
        if (y < weight_at(x)) {
            return {x, trial};
        }
    }
    throw RejectionCapError("rejection sampling exceeded " + std::to_string(trial_cap) +
                            " trials; asserted bound does not match the weights");
}

inline RejDraw rej_generate(std::span<const double> weights, double p_star, RngStream& rng,
                            uint32_t trial_cap = kRejTrialCap) {
    return rej_generate(
        static_cast<uint32_t>(weights.size()), p_star,
        [&](uint32_t x) { return weights[x]; }, rng, trial_cap);
}

// O-REJ is REJ with a caller-asserted bound instead of a scanned one.  A bound
// below some weight skews the distribution silently, which is the caller's
// contract to keep (checked statistically in the tests).
template <typename WeightAt>
RejDraw orej_generate(uint32_t n, double p_star_bound, WeightAt&& weight_at, RngStream& rng,
                      uint32_t trial_cap = kRejTrialCap) {
    return rej_generate(n, p_star_bound, std::forward<WeightAt>(weight_at), rng, trial_cap);
}

// ---- NAIVE ------------------------------------------------------------------

// Uniform pick; the caller asserts the distribution is uniform.  Consumes its
// one draw even for n == 1 so draw sequences stay aligned.
inline uint32_t naive_generate(uint32_t n, RngStream& rng) {
    if (n == 0) {
        throw DistributionError("naive_generate over an empty domain");
    }
    return rng.uniform_index(n);
}

}  // namespace walkforge
