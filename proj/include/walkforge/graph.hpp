#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "walkforge/error.hpp"

namespace walkforge {

using VertexId = uint32_t;

// In-memory CSR graph: 64-bit offsets over 32-bit neighbor ids, with optional
// per-edge weights and labels aligned to the neighbor array.  Immutable after
// construction; the walk engine reads the raw arrays directly on its hot paths.
class Graph {
public:
    Graph() = default;

    // Takes ownership of prebuilt CSR arrays and validates every structural
    // invariant (monotone offsets, ids in range, finite non-negative weights,
    // matching array lengths).  Weights/labels may be empty to mean "absent".
    static Graph from_csr(std::vector<uint64_t> offsets, std::vector<VertexId> neighbors,
                          std::vector<double> weights = {}, std::vector<uint32_t> labels = {});

    uint32_t vertex_count() const { return static_cast<uint32_t>(offsets_.size() - 1); }
    uint64_t edge_count() const { return neighbors_.size(); }

    uint64_t edge_begin(VertexId v) const { return offsets_[v]; }

    uint32_t degree(VertexId v) const {
        check_vertex(v);
        return static_cast<uint32_t>(offsets_[v + 1] - offsets_[v]);
    }

    std::span<const VertexId> neighbors(VertexId v) const {
        check_vertex(v);
        return {neighbors_.data() + offsets_[v], offsets_[v + 1] - offsets_[v]};
    }

    VertexId neighbor(uint64_t edge) const { return neighbors_[edge]; }

    bool has_weights() const { return !weights_.empty(); }
    bool has_labels() const { return !labels_.empty(); }

    double weight(uint64_t edge) const {
        check_edge(edge);
        if (!has_weights()) {
            throw ConfigError("graph has no edge weights");
        }
        return weights_[edge];
    }

    uint32_t label(uint64_t edge) const {
        check_edge(edge);
        if (!has_labels()) {
            throw ConfigError("graph has no edge labels");
        }
        return labels_[edge];
    }

    // Raw arrays for the engine's stage machines; bounds are the caller's.
    const uint64_t* offsets_data() const { return offsets_.data(); }
    const VertexId* neighbors_data() const { return neighbors_.data(); }
    const double* weights_data() const { return weights_.data(); }
    const uint32_t* labels_data() const { return labels_.data(); }

    double avg_degree() const { return static_cast<double>(edge_count()) / vertex_count(); }
    uint64_t max_degree() const { return max_degree_; }
    double max_weight() const { return max_weight_; }  // 0 when unweighted

    // True when every adjacency list is sorted by destination; required for
    // O(log d) edge-existence queries (node2vec's distance test).
    bool adjacency_sorted() const { return adjacency_sorted_; }
    bool has_edge(VertexId src, VertexId dst) const;

    // Binary format "WFG1", little-endian:
    //   magic[4] | u64 vertex_count | u64 edge_count | u8 flags
    //   u64 offsets[V+1] | u32 neighbors[E] | f64 weights[E]? | u32 labels[E]?
    // flags bit0 = weights present, bit1 = labels present.  Files round-trip
    // bit-exactly; readers reject bad magic, truncation, and trailing bytes.
    void write_binary(const std::string& path) const;
    static Graph read_binary(const std::string& path);

private:
    void check_vertex(VertexId v) const {
        if (v >= vertex_count()) {
            throw ConfigError("vertex id " + std::to_string(v) + " out of range (V=" +
                              std::to_string(vertex_count()) + ")");
        }
    }
    void check_edge(uint64_t e) const {
        if (e >= edge_count()) {
            throw ConfigError("edge index " + std::to_string(e) + " out of range");
        }
    }
    void finalize_stats();

    std::vector<uint64_t> offsets_ = {0};
    std::vector<VertexId> neighbors_;
    std::vector<double> weights_;
    std::vector<uint32_t> labels_;
    uint64_t max_degree_ = 0;
    double max_weight_ = 0.0;
    bool adjacency_sorted_ = true;
};

// Synthetic per-edge attributes: pure functions of (seed, edge index), so a
// dataset converted twice with the same seed is byte-identical.  Weights are
// uniform in [1, 5); labels uniform over {0..label_count-1}.
double synthetic_weight(uint64_t seed, uint64_t edge_index);
uint32_t synthetic_label(uint64_t seed, uint64_t edge_index, uint32_t label_count);

enum class Directedness : uint8_t { Directed, Undirected };
enum class WeightMode : uint8_t { None, FromFile, Random };
enum class LabelMode : uint8_t { None, FromFile, Random };

struct EdgeListOptions {
    Directedness directedness = Directedness::Directed;
    WeightMode weights = WeightMode::None;
    LabelMode labels = LabelMode::None;
    uint32_t label_count = 5;  // Random labels draw from {0..label_count-1}
    uint64_t seed = 0;         // seed for Random weights/labels
};

struct LoadedGraph {
    Graph graph;
    // original_ids[dense] = id as it appeared in the input; identity when the
    // input was already dense 0..V-1.
    std::vector<uint64_t> original_ids;
};

// Whitespace-separated text edge list: `src dst [weight [label]]` per line,
// `#` starts a comment, blank lines ignored.  Arbitrary ids are remapped to
// dense 0-based ids in ascending numeric order; undirected mode emits both
// directions.  Edges are sorted by (source, destination), input order breaking
// ties, and that final order is what synthetic attributes are drawn against.
LoadedGraph load_edge_list(const std::string& path, const EdgeListOptions& options = {});

// CSR assembly from an unsorted edge set; the shared back end of the loader
// and the synthetic generators.  weights/labels must be edge-aligned or empty.
Graph build_graph(uint32_t vertex_count, std::vector<std::pair<VertexId, VertexId>> edges,
                  std::vector<double> weights = {}, std::vector<uint32_t> labels = {});

}  // namespace walkforge
