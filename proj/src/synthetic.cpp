#include "walkforge/synthetic.hpp"

#include <cmath>
#include <utility>
#include <vector>

#include "walkforge/rng.hpp"
#include "walkforge/sampler.hpp"

namespace walkforge {

namespace {

// Rebuild with synthetic attributes keyed on the final CSR edge order.  The
// structural arrays are copied out of the attribute-free graph; at the sizes
// the benchmarks use this is a transient cost only.
Graph attach_attributes(const Graph& skeleton, uint64_t seed, bool weighted,
                        uint32_t label_count) {
    if (!weighted && label_count == 0) {
        return skeleton;
    }
    uint64_t e = skeleton.edge_count();
    std::vector<uint64_t> offsets(skeleton.offsets_data(),
                                  skeleton.offsets_data() + skeleton.vertex_count() + 1);
    std::vector<VertexId> neighbors(skeleton.neighbors_data(), skeleton.neighbors_data() + e);
    std::vector<double> weights;
    std::vector<uint32_t> labels;
    if (weighted) {
        weights.resize(e);
        for (uint64_t i = 0; i < e; ++i) {
            weights[i] = synthetic_weight(seed, i);
        }
    }
    if (label_count > 0) {
        labels.resize(e);
        for (uint64_t i = 0; i < e; ++i) {
            labels[i] = synthetic_label(seed, i, label_count);
        }
    }
    return Graph::from_csr(std::move(offsets), std::move(neighbors), std::move(weights),
                           std::move(labels));
}

}  // namespace

Graph make_power_law_graph(const PowerLawConfig& config) {
    if (config.vertex_count == 0 || config.edge_count == 0) {
        throw ConfigError("power-law graph needs at least one vertex and one edge");
    }
    std::vector<double> vertex_weight(config.vertex_count);
    for (uint32_t v = 0; v < config.vertex_count; ++v) {
        vertex_weight[v] = std::pow(static_cast<double>(v) + 1.0, -config.exponent);
    }
    AliasTable picker = alias_init(vertex_weight);

    RngStream rng(config.seed, 0x504C4557ULL);
    std::vector<std::pair<VertexId, VertexId>> edges;
    edges.reserve(config.edge_count);
    for (uint64_t i = 0; i < config.edge_count; ++i) {
        VertexId src = alias_generate(picker, rng);
        VertexId dst = alias_generate(picker, rng);
        edges.emplace_back(src, dst);
    }
    Graph skeleton = build_graph(config.vertex_count, std::move(edges));
    return attach_attributes(skeleton, config.seed, config.weighted, config.label_count);
}

Graph make_ring_graph(uint32_t n, uint64_t seed, bool weighted, uint32_t label_count) {
    if (n < 2) {
        throw ConfigError("ring graph needs at least 2 vertices");
    }
    std::vector<std::pair<VertexId, VertexId>> edges;
    edges.reserve(2ull * n);
    for (uint32_t v = 0; v < n; ++v) {
        edges.emplace_back(v, (v + 1) % n);
        edges.emplace_back(v, (v + n - 1) % n);
    }
    Graph skeleton = build_graph(n, std::move(edges));
    return attach_attributes(skeleton, seed, weighted, label_count);
}

}  // namespace walkforge
