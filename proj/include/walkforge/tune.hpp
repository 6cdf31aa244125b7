#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "walkforge/graph.hpp"
#include "walkforge/prefetch.hpp"

namespace walkforge {

struct TuneOptions {
    uint32_t threads = 1;
    double budget_seconds = 120.0;
    uint64_t seed = 0;
    PrefetchLevel prefetch = PrefetchLevel::L1;
};

struct TunePoint {
    uint32_t k = 0;
    double steps_per_sec = 0.0;
};

// Result of the empirical ring-size sweep.  Phase 1 sweeps the task ring k
// over powers of two (1..1024) with the cheap probe workloads; phase 2 fixes
// the best k and sweeps the search ring k' <= k with the cycle-heavy samplers.
struct TuneReport {
    std::vector<TunePoint> task_ring;
    std::vector<TunePoint> search_ring;
    uint32_t best_k = 1;
    uint32_t best_k_prime = 1;
    bool budget_exhausted = false;

    std::string to_text() const;
};

// Probe workload: one fixed-length walk (10 vertices) from every vertex.
// Phase 1 measures NAIVE and ALIAS (no cycle stages) and combines by geometric
// mean; phase 2 measures ITS, REJ, and O-REJ at the chosen k.  When the budget
// runs out mid-sweep, the best point seen so far is recommended and the report
// says so.
TuneReport tune_ring_sizes(const Graph& g, const TuneOptions& opts = {});

}  // namespace walkforge
