#pragma once

#include <utility>
#include <vector>

#include "walkforge/graph.hpp"

namespace testsupport {

using walkforge::Graph;
using walkforge::VertexId;

// 0 -> 1 -> 2 -> 0, unweighted.
inline Graph triangle() {
    return walkforge::build_graph(3, {{0, 1}, {1, 2}, {2, 0}});
}

// Hub 0 connected both ways to leaves 1..n.
inline Graph star(uint32_t leaves) {
    std::vector<std::pair<VertexId, VertexId>> edges;
    for (uint32_t i = 1; i <= leaves; ++i) {
        edges.push_back({0, i});
        edges.push_back({i, 0});
    }
    return walkforge::build_graph(leaves + 1, std::move(edges));
}

// 0 -> 1 -> ... -> n-1, terminal vertex is a dead end.
inline Graph line(uint32_t n) {
    std::vector<std::pair<VertexId, VertexId>> edges;
    for (uint32_t i = 0; i + 1 < n; ++i) {
        edges.push_back({i, i + 1});
    }
    return walkforge::build_graph(n, std::move(edges));
}

// Undirected complete graph on n vertices (both directions per pair).
inline Graph clique(uint32_t n) {
    std::vector<std::pair<VertexId, VertexId>> edges;
    for (uint32_t i = 0; i < n; ++i) {
        for (uint32_t j = 0; j < n; ++j) {
            if (i != j) {
                edges.push_back({i, j});
            }
        }
    }
    return walkforge::build_graph(n, std::move(edges));
}

// One vertex fanning out to `n` destinations with the given weights.
inline Graph fan(std::vector<double> weights) {
    std::vector<std::pair<VertexId, VertexId>> edges;
    for (uint32_t i = 0; i < weights.size(); ++i) {
        edges.push_back({0, i + 1});
    }
    uint32_t v = static_cast<uint32_t>(weights.size()) + 1;
    return walkforge::build_graph(v, std::move(edges), std::move(weights));
}

// True iff u -> v exists; linear scan so tests do not depend on has_edge.
inline bool scan_edge(const Graph& g, VertexId u, VertexId v) {
    for (VertexId n : g.neighbors(u)) {
        if (n == v) {
            return true;
        }
    }
    return false;
}

}  // namespace testsupport
