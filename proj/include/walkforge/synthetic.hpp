#pragma once

#include <cstdint>

#include "walkforge/graph.hpp"

namespace walkforge {

// Deterministic synthetic graphs for tests and benchmarks.  All of them are a
// pure function of their parameters (edge sampling and attributes both run on
// seeded streams), so fixtures regenerate bit-identically.

struct PowerLawConfig {
    uint32_t vertex_count = 0;
    uint64_t edge_count = 0;
    // Chung-Lu style: vertex v is drawn with probability proportional to
    // (v+1)^-exponent at both endpoints, giving a heavy-tailed degree profile.
    double exponent = 0.8;
    uint64_t seed = 0;
    bool weighted = false;    // uniform [1, 5) per edge
    uint32_t label_count = 0; // 0 = unlabeled, else uniform over {0..label_count-1}
};

Graph make_power_law_graph(const PowerLawConfig& config);

// 2n directed edges i -> i±1 (mod n): every vertex has degree 2, so walks
// never dead-end.  Optionally weighted/labeled like the power-law generator.
Graph make_ring_graph(uint32_t n, uint64_t seed = 0, bool weighted = false,
                      uint32_t label_count = 0);

}  // namespace walkforge
